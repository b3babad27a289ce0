#pragma once

#include "helmdual/field.hpp"

#include <complex>
#include <vector>

namespace helmdual {

/// Unnormalized forward DFT of a real field (row-major, axis 0 fastest).
std::vector<std::complex<double>> fft_forward(const Grid& grid, const std::vector<double>& values);

/// Inverse DFT including the 1/n^N normalization. Returns the real part and
/// writes the relative L2 magnitude of the discarded imaginary part to
/// *imag_residue when non-null.
std::vector<double> fft_inverse_real(const Grid& grid, std::vector<std::complex<double>>& spectrum,
                                     double* imag_residue = nullptr);

/// Apply a real Fourier multiplier in place on a field:
/// out = IFFT( multiplier .* FFT(f) ). multiplier is indexed like the field
/// (flat index decomposed per axis, frequency = grid.freq(bin)).
ScalarField apply_multiplier(const ScalarField& f, const std::vector<double>& multiplier,
                             double* imag_residue = nullptr);

/// Evaluate a radially-indexed multiplier array: fills out[flat] = fn(|xi|^2)
/// over the frequency lattice.
template <typename F>
std::vector<double> build_multiplier(const Grid& grid, F&& fn) {
    std::vector<double> m(grid.cell_count());
    const int n = grid.samples;
    for (std::size_t flat = 0; flat < m.size(); ++flat) {
        std::size_t rem = flat;
        double xi2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
            int k = static_cast<int>(rem % n);
            rem /= n;
            double xi = grid.freq(k);
            xi2 += xi * xi;
        }
        m[flat] = fn(xi2);
    }
    return m;
}

} // namespace helmdual
