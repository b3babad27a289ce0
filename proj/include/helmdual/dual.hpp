#pragma once

#include "helmdual/exponents.hpp"
#include "helmdual/field.hpp"
#include "helmdual/resolvent.hpp"

#include <memory>

namespace helmdual {

/// One instance of the dual problem: admissible exponents, the (already
/// eps-dilated) coefficients, and the resolvent plan. Immutable and
/// shareable; the coefficient powers P^{1/p}, Q^{1/q} are precomputed.
class DualProblem {
public:
    DualProblem(AdmissibleExponents exps, CoefficientField P, CoefficientField Q,
                std::shared_ptr<const ResolventPlan> plan);

    const AdmissibleExponents& exponents() const { return exps_; }
    const CoefficientField& P() const { return P_; }
    const CoefficientField& Q() const { return Q_; }
    const ResolventPlan& plan() const { return *plan_; }
    const Grid& grid() const { return plan_->grid; }
    const ScalarField& p_power() const { return p_pow_; }   // P^{1/p}
    const ScalarField& q_power() const { return q_pow_; }   // Q^{1/q}

    /// K_{q,p}^{Q,P} phi = Q^{1/q} R(P^{1/p} phi)
    ScalarField apply_K_qp(const ScalarField& phi) const;
    /// K_{p,q}^{P,Q} psi = P^{1/p} R(Q^{1/q} psi)
    ScalarField apply_K_pq(const ScalarField& psi) const;

private:
    AdmissibleExponents exps_;
    CoefficientField P_, Q_;
    std::shared_ptr<const ResolventPlan> plan_;
    ScalarField p_pow_, q_pow_;
};

/// Dual state z = (psi, phi) with its cached quadrature values
///   A = ||psi||_{q'}^{q'},  B = ||phi||_{p'}^{p'},  C = int z^T K z,
/// plus the coupling field K_{q,p} phi (reused by energy, gradient and the
/// fixed-point sweep). States are immutable; scaling produces a new state
/// with analytically scaled caches (no resolvent call).
struct DualPair {
    ScalarField psi;
    ScalarField phi;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    ScalarField K_qp_phi;
};

/// Build a state from fields (one Birman-Schwinger application).
DualPair lift(const DualProblem& prob, ScalarField psi, ScalarField phi);

/// t*z with caches scaled exactly: A -> t^{q'}A, B -> t^{p'}B, C -> t^2 C.
DualPair scale_state(const DualProblem& prob, const DualPair& z, double t);

/// J(z) = A/q' + B/p' - C/2.
double energy(const DualProblem& prob, const DualPair& z);

/// Gradient field of J at z: ( spow(psi, q'-1) - K_{q,p} phi,
///                             spow(phi, p'-1) - K_{p,q} psi ).
/// Pairing with directions uses the h^N quadrature weight.
struct DualGradient {
    ScalarField g_psi;
    ScalarField g_phi;
};
DualGradient gradient(const DualProblem& prob, const DualPair& z);

/// <J'(z), z> = A + B - C; zero (to tolerance) iff z is on the Nehari set.
/// Throws ZeroState for z = 0.
double nehari_gap(const DualProblem& prob, const DualPair& z);

struct NehariProjection {
    double t = 0.0;
    DualPair state;
};

/// The unique t > 0 with t*z on the Nehari set, solving
///   t^{q'-2} A + t^{p'-2} B = C  (strictly decreasing left side).
/// Bracketing bisection to relative width 1e-14 plus one Newton polish.
/// Throws NotInPositiveCone when C <= 0.
NehariProjection nehari_project(const DualProblem& prob, const DualPair& z);

/// Residual of the integral-system fixed point, relative to the equation
/// scale: ||(g_psi, g_phi)||_2 / ||(spow(psi,q'-1), spow(phi,p'-1))||_2.
double relative_residual(const DualProblem& prob, const DualPair& z, const DualGradient& g);

} // namespace helmdual
