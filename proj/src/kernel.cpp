#include "helmdual/kernel.hpp"
#include "helmdual/fft.hpp"
#include "helmdual/resolvent.hpp"

#include <cmath>
#include <string>

namespace helmdual {

namespace {

constexpr double kPi = 3.14159265358979323846;

// digamma at positive integers: psi(1) = -gamma, psi(m) = -gamma + sum 1/j
double digamma_int(int m) {
    constexpr double kEulerGamma = 0.57721566490153286061;
    double v = -kEulerGamma;
    for (int j = 1; j < m; ++j) v += 1.0 / j;
    return v;
}

// Ascending series, order 1 (converges for all x; used for x <= 12 where
// cancellation stays below ~4 digits).
double bessel_j1_series(double x) {
    const double y = x / 2.0;
    double term = y;           // k = 0: y / (0! 1!)
    double sum = term;
    for (int k = 1; k < 60; ++k) {
        term *= -(y * y) / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double bessel_y1_series(double x) {
    const double y = x / 2.0;
    // sum_k (-1)^k [psi(k+1)+psi(k+2)] / (k! (k+1)!) y^{2k+1}
    double coeff = y;          // y^{2k+1}/(k!(k+1)!) at k=0
    double sum = coeff * (digamma_int(1) + digamma_int(2));
    for (int k = 1; k < 60; ++k) {
        coeff *= -(y * y) / (static_cast<double>(k) * (k + 1));
        double term = coeff * (digamma_int(k + 1) + digamma_int(k + 2));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return (2.0 / kPi) * std::log(y) * bessel_j1_series(x) - 2.0 / (kPi * x) - sum / kPi;
}

// Large-argument asymptotics, order 1 (mu = 4): Hankel P/Q expansions.
void bessel_pq_asymptotic(double x, double& P, double& Q) {
    constexpr double mu = 4.0;
    const double ix8 = 1.0 / (8.0 * x);
    // a_m = prod_{j=1..m} (mu - (2j-1)^2) / (m! 8^m x^m), alternating signs by pairs
    P = 1.0;
    Q = (mu - 1.0) * ix8;
    double num = mu - 1.0;     // running product of (mu - (2j-1)^2)
    double fact = 1.0;
    double pw = ix8;
    double prevP = 1.0, prevQ = std::abs(Q);
    for (int m = 2; m < 40; ++m) {
        num *= mu - (2.0 * m - 1.0) * (2.0 * m - 1.0);
        fact *= m;
        pw *= ix8;
        const double a = num / fact * pw;
        const double mag = std::abs(a);
        const bool into_p = (m % 2 == 0);
        // stop when terms stop decreasing (asymptotic series tail)
        if (mag > (into_p ? prevP : prevQ)) break;
        const int sign = (m / 2) % 2 == 0 ? 1 : -1;
        if (into_p) {
            P += sign * a;
            prevP = mag;
        } else {
            Q += sign * a;
            prevQ = mag;
        }
        if (mag < 1e-18) break;
    }
}

void bessel_j1y1(double x, double& j1, double& y1) {
    if (x <= 12.0) {
        j1 = bessel_j1_series(x);
        y1 = bessel_y1_series(x);
    } else {
        double P, Q;
        bessel_pq_asymptotic(x, P, Q);
        const double omega = x - 0.75 * kPi;   // x - nu*pi/2 - pi/4 at nu = 1
        const double amp = std::sqrt(2.0 / (kPi * x));
        j1 = amp * (P * std::cos(omega) - Q * std::sin(omega));
        y1 = amp * (P * std::sin(omega) + Q * std::cos(omega));
    }
}

} // namespace

KernelEval KernelEval::for_dimension(int N) {
    if (N < 3 || N > 5)
        throw UnsupportedDimension("KernelEval: dimension " + std::to_string(N) +
                                   " not supported (use 3, 4, or 5)");
    return KernelEval{N, (N - 2.0) / 2.0, N != 4};
}

std::complex<double> hankel_first_kind(double nu, double x) {
    if (!(x > 0.0))
        throw DomainError("hankel_first_kind: requires x > 0");
    const double amp = std::sqrt(2.0 / (kPi * x));
    if (nu == 0.5) {
        // H_{1/2} = -i sqrt(2/(pi x)) e^{ix}
        return {amp * std::sin(x), -amp * std::cos(x)};
    }
    if (nu == 1.5) {
        const double j = amp * (std::sin(x) / x - std::cos(x));
        const double y = -amp * (std::cos(x) / x + std::sin(x));
        return {j, y};
    }
    if (nu == 1.0) {
        double j, y;
        bessel_j1y1(x, j, y);
        return {j, y};
    }
    throw UnsupportedOrder("hankel_first_kind: order " + std::to_string(nu) +
                           " not supported (use 1/2, 1, or 3/2)");
}

double psi_value(int N, double r) {
    if (!(r > 0.0))
        throw DomainError("psi_value: requires r > 0");
    switch (N) {
        case 3:
            return std::cos(r) / (4.0 * kPi * r);
        case 4: {
            double j, y;
            bessel_j1y1(r, j, y);
            return -y / (8.0 * kPi * r);
        }
        case 5:
            return (std::sin(r) + std::cos(r) / r) / (8.0 * kPi * kPi * r * r);
        default:
            throw UnsupportedDimension("psi_value: dimension " + std::to_string(N) +
                                       " not supported (use 3, 4, or 5)");
    }
}

SpectralCutoff SpectralCutoff::annulus(double inner_, double outer_) {
    if (!(0.0 < inner_ && inner_ < outer_))
        throw DomainError("SpectralCutoff: requires 0 < inner < outer");
    SpectralCutoff c;
    c.inner = inner_;
    c.outer = outer_;
    c.zero = false;
    return c;
}

SpectralCutoff SpectralCutoff::none() {
    SpectralCutoff c;
    c.zero = true;
    return c;
}

double SpectralCutoff::value(double xi_norm) const {
    if (zero) return 0.0;
    const double d = std::abs(xi_norm - 1.0);
    if (d <= inner) return 1.0;
    if (d >= outer) return 0.0;
    // C-infinity plateau transition on (inner, outer)
    const double u = (d - inner) / (outer - inner);
    const double fa = std::exp(-1.0 / (1.0 - u));
    const double fb = std::exp(-1.0 / u);
    return fa / (fa + fb);
}

BoundReport verify_band_split_bounds(int N, const Grid& grid, const SpectralCutoff& cutoff,
                                     double delta) {
    if (N != 3 || grid.dim != 3)
        throw UnsupportedDimension("verify_band_split_bounds: implemented for N = 3");
    if (delta <= 0.0) delta = default_delta(grid);

    // annulus resolution check on the frequency lattice
    long annulus_count = 0;
    {
        auto counter = build_multiplier(grid, [&](double xi2) {
            const double d = std::abs(std::sqrt(xi2) - 1.0);
            return d <= 0.25 ? 1.0 : 0.0;
        });
        for (double v : counter) annulus_count += v > 0.5 ? 1 : 0;
    }
    if (annulus_count < 8)
        throw ResolutionError("verify_band_split_bounds: frequency annulus holds " +
                              std::to_string(annulus_count) + " lattice modes; need >= 8");

    ResolventPlan plan(grid, delta);

    // unit-mass impulse at the lattice origin (index 0); the impulse response
    // of the multiplier is the discrete kernel
    std::vector<double> imp(grid.cell_count(), 0.0);
    imp[0] = 1.0 / grid.cell_volume();
    ScalarField impulse(grid, std::move(imp));
    ScalarField psi_grid = apply_resolvent(plan, impulse);

    std::vector<double> band = plan.multiplier;
    {
        auto cutvals = build_multiplier(grid, [&](double xi2) {
            return cutoff.value(std::sqrt(xi2));
        });
        for (std::size_t i = 0; i < band.size(); ++i) band[i] *= cutvals[i];
    }
    ScalarField phi1 = apply_multiplier(impulse, band);

    const int n = grid.samples;
    const double L = grid.half_width;
    const double h = grid.spacing();
    double c1 = 0.0, c2 = 0.0;
    for (std::size_t flat = 1; flat < psi_grid.size(); ++flat) {
        std::size_t rem = flat;
        double r2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            int j = static_cast<int>(rem % n);
            rem /= n;
            double x = j * h;
            if (x > L) x -= 2.0 * L;   // wrapped distance from the origin cell
            r2 += x * x;
        }
        const double r = std::sqrt(r2);
        const double v1 = std::abs(phi1[flat]) * (1.0 + r);                   // (1+r)^{(N-1)/2}, N=3
        const double v2 = std::abs(psi_grid[flat] - phi1[flat]) * std::max(r, r * r2);
        c1 = std::max(c1, v1);
        c2 = std::max(c2, v2);
    }

    BoundReport rep;
    rep.dim = 3;
    rep.half_width = grid.half_width;
    rep.samples = grid.samples;
    rep.delta = delta;
    rep.annulus_mode_count = annulus_count;
    rep.c_phi1 = c1;
    rep.c_phi2 = c2;
    return rep;
}

} // namespace helmdual
