#pragma once

#include "helmdual/field.hpp"

#include <complex>

namespace helmdual {

/// Evaluation capabilities for one dimension: which Hankel order the kernel
/// needs and how it is computed. Closed trigonometric forms exist for the
/// half-integer orders (N = 3, 5); N = 4 uses the order-1 series/asymptotic
/// pair.
struct KernelEval {
    int N = 0;
    double order = 0.0;        // (N-2)/2
    bool closed_form = false;  // half-integer orders

    static KernelEval for_dimension(int N);
};

/// Hankel function of the first kind H^{(1)}_nu(x) = J_nu(x) + i Y_nu(x).
/// Supported orders: 1/2 and 3/2 (closed trigonometric forms) and 1
/// (ascending series for x <= 12, large-argument asymptotics beyond).
/// Pre: x > 0. Throws UnsupportedOrder / DomainError.
std::complex<double> hankel_first_kind(double nu, double x);

/// Real part of the outgoing fundamental solution of -Laplace - 1 at radius r:
///   Psi(r) = Re[ (i/4) (2 pi r)^{(2-N)/2} H^{(1)}_{(N-2)/2}(r) ].
/// Closed forms:
///   N=3: cos(r)/(4 pi r)
///   N=4: -Y_1(r)/(8 pi r)
///   N=5: (sin r + cos(r)/r)/(8 pi^2 r^2)
/// Pre: r > 0, N in {3,4,5}.
double psi_value(int N, double r);

/// Smooth radial annulus profile in frequency: 1 on ||xi|-1| <= inner,
/// 0 on ||xi|-1| >= outer, C-infinity transition between. The zero profile
/// (for degenerate-cutoff tests) is also expressible.
struct SpectralCutoff {
    double inner = 1.0 / 6.0;
    double outer = 1.0 / 4.0;
    bool zero = false;

    static SpectralCutoff annulus(double inner_ = 1.0 / 6.0, double outer_ = 1.0 / 4.0);
    static SpectralCutoff none();   // identically zero profile

    double value(double xi_norm) const;
};

/// Empirical constants of the near-sphere / off-sphere kernel splitting.
/// phi1 is the annulus-band part of the discrete kernel, phi2 the remainder;
/// the constants are the smallest C0 with
///   |phi1(x)| <= C0 (1+|x|)^{(1-N)/2},
///   |phi2(x)| <= C0 min{|x|^{2-N}, |x|^{-N}}   (origin cell excluded).
struct BoundReport {
    int dim = 0;
    double half_width = 0.0;
    int samples = 0;
    double delta = 0.0;
    long annulus_mode_count = 0;
    double c_phi1 = 0.0;
    double c_phi2 = 0.0;
};

/// Build the split on the grid from the resolvent impulse response and
/// report the empirical constants. Pre: N == 3; the frequency annulus
/// ||xi|-1| <= outer must contain at least 8 lattice frequencies
/// (ResolutionError otherwise). `delta` <= 0 picks the plan default.
BoundReport verify_band_split_bounds(int N, const Grid& grid, const SpectralCutoff& cutoff,
                                     double delta = 0.0);

} // namespace helmdual
