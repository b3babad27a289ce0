#include "helmdual/fft.hpp"
#include "helmdual/numeric.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace helmdual {

namespace {

// FFTW planner calls are not thread-safe; executions via fftw_execute_dft on
// distinct buffers are. Plans are created once per (dim, n) with
// FFTW_ESTIMATE|FFTW_UNALIGNED so they are deterministic and usable with any
// caller-allocated buffer.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

std::mutex plan_mutex;
std::map<std::pair<int, int>, PlanPair> plan_cache;

PlanPair get_plans(const Grid& grid) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(grid.dim, grid.samples);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;

    std::vector<std::complex<double>> dummy(grid.cell_count());
    std::vector<int> dims(grid.dim, grid.samples);
    auto* ptr = reinterpret_cast<fftw_complex*>(dummy.data());
    PlanPair p;
    p.forward = fftw_plan_dft(grid.dim, dims.data(), ptr, ptr, FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft(grid.dim, dims.data(), ptr, ptr, FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache[key] = p;
    return p;
}

} // namespace

std::vector<std::complex<double>> fft_forward(const Grid& grid, const std::vector<double>& values) {
    PlanPair plans = get_plans(grid);
    std::vector<std::complex<double>> buf(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) buf[i] = values[i];
    auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plans.forward, ptr, ptr);
    return buf;
}

std::vector<double> fft_inverse_real(const Grid& grid, std::vector<std::complex<double>>& spectrum,
                                     double* imag_residue) {
    PlanPair plans = get_plans(grid);
    auto* ptr = reinterpret_cast<fftw_complex*>(spectrum.data());
    fftw_execute_dft(plans.backward, ptr, ptr);
    const double scale = 1.0 / static_cast<double>(grid.cell_count());
    std::vector<double> out(spectrum.size());
    CompensatedSum re2, im2;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double re = spectrum[i].real() * scale;
        const double im = spectrum[i].imag() * scale;
        out[i] = re;
        re2.add(re * re);
        im2.add(im * im);
    }
    if (imag_residue) {
        const double denom = std::sqrt(re2.value());
        *imag_residue = denom > 0.0 ? std::sqrt(im2.value()) / denom : std::sqrt(im2.value());
    }
    return out;
}

ScalarField apply_multiplier(const ScalarField& f, const std::vector<double>& multiplier,
                             double* imag_residue) {
    if (multiplier.size() != f.size())
        throw GridMismatch("apply_multiplier: multiplier size mismatch");
    auto spec = fft_forward(f.grid(), f.values());
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= multiplier[i];
    auto out = fft_inverse_real(f.grid(), spec, imag_residue);
    return ScalarField(f.grid(), std::move(out));
}

} // namespace helmdual
