#pragma once

#include "helmdual/field.hpp"

#include <vector>

namespace helmdual {

/// Limiting-absorption realization of the real Helmholtz resolvent on a
/// periodic grid: Fourier multiplier
///     m_delta(xi) = (|xi|^2 - 1) / ((|xi|^2 - 1)^2 + delta^2),
/// the real part of 1/(|xi|^2 - 1 - i*delta). Frequencies exactly on the
/// unit sphere get m = 0 (the principal-value symmetric limit); they are
/// counted but do not trigger the near-singularity refusal, which applies to
/// the smallest *nonzero* offset |  |xi|^2 - 1 |.
struct ResolventPlan {
    Grid grid;
    double delta = 0.0;
    std::vector<double> multiplier;
    double min_nonzero_offset = 0.0;
    long on_sphere_count = 0;

    ResolventPlan(const Grid& g, double delta_);
};

/// Default regularization: max(1e-3, freq_spacing^2).
double default_delta(const Grid& grid);

/// u = IFFT( m_delta .* FFT(f) ). Output is real; the discarded imaginary
/// residue is checked to be below 1e-12 of the output norm.
ScalarField apply_resolvent(const ResolventPlan& plan, const ScalarField& f);

/// Spectral application of the symbol (|xi|^2 - 1), i.e. (-Laplace - 1)u.
ScalarField apply_helmholtz(const Grid& grid, const ScalarField& u);

/// Generalized Birman-Schwinger operator: P^{1/p} * R(Q^{1/q} * v).
ScalarField birman_schwinger(const ResolventPlan& plan, const CoefficientField& P, double p,
                             const CoefficientField& Q, double q, const ScalarField& v);

/// Weighted resolvent application with precomputed coefficient powers
/// (outer, inner already raised to 1/p, 1/q): outer .* R(inner .* v).
ScalarField apply_weighted_resolvent(const ResolventPlan& plan, const ScalarField& outer_pow,
                                     const ScalarField& inner_pow, const ScalarField& v);

} // namespace helmdual
