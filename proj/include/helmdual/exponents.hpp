#pragma once

#include "helmdual/errors.hpp"

namespace helmdual {

/// Exponent data for the Hamiltonian Helmholtz system. Populated only by
/// check_admissible, so a value of this type certifies that (N, p, q) lies
/// strictly inside the admissible region
///     p, q > 2N/(N-1),   (N-2)/N < 1/p + 1/q < (N-1)/(N+1).
struct AdmissibleExponents {
    int N = 0;
    double p = 0.0;
    double q = 0.0;
    double p_dual = 0.0;   // p/(p-1), in (1,2)
    double q_dual = 0.0;   // q/(q-1), in (1,2)
    double lambda = 0.0;   // far-field interaction decay rate, > 0
    double beta1 = 0.0;    // 2p/(1-(q-1)(p-1)), < 0
    double beta2 = 0.0;    // 2q/(1-(q-1)(p-1)), < 0
};

/// Rescaling powers between the physical frame (frequency k explicit) and
/// the dilated frame. beta1/beta2 are negative; power1/power2 = -beta
/// are the positive amplification exponents k^{-beta}.
struct RescalingExponents {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double power1 = 0.0;
    double power2 = 0.0;
};

/// Conjugate exponent r/(r-1). Pre: r > 1.
double dual_exponent(double r);

/// Validates the strict admissibility inequalities and computes all derived
/// exponents. Throws RegionViolation (with a reason code) on any failure,
/// including equality on a boundary.
AdmissibleExponents check_admissible(int N, double p, double q);

/// lambda(p,q) = -max{ N/p + (1-N)/2, N/q + (1-N)/2,
///                     (1-N)/2 + (N+1)/2 * (1/p + 1/q) }.
/// Pre: exponents admissible (validated; propagates RegionViolation).
double decay_exponent(int N, double p, double q);

/// beta1 = 2p/(1-(q-1)(p-1)), beta2 = 2q/(1-(q-1)(p-1)).
/// Pre: p, q > 2. Throws DegenerateScaling if (q-1)(p-1) == 1.
RescalingExponents rescaling_exponents(double p, double q);

} // namespace helmdual
