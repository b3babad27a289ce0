#include "helmdual/dual.hpp"
#include "helmdual/numeric.hpp"

#include <cmath>

namespace helmdual {

namespace {

double lp_power_sum(const ScalarField& f, double r) {
    CompensatedSum s;
    for (double v : f.values()) s.add(std::pow(std::abs(v), r));
    return s.value() * f.grid().cell_volume();
}

} // namespace

DualProblem::DualProblem(AdmissibleExponents exps, CoefficientField P, CoefficientField Q,
                         std::shared_ptr<const ResolventPlan> plan)
    : exps_(exps),
      P_(std::move(P)),
      Q_(std::move(Q)),
      plan_(std::move(plan)),
      p_pow_(signed_power(P_.base, 1.0 / exps_.p)),
      q_pow_(signed_power(Q_.base, 1.0 / exps_.q)) {
    if (!(P_.grid() == plan_->grid) || !(Q_.grid() == plan_->grid))
        throw GridMismatch("DualProblem: coefficients not on the plan's grid");
    if (!(P_.floor > 0.0) || !(Q_.floor > 0.0))
        throw FloorViolation("DualProblem: coefficient floors must be positive");
}

ScalarField DualProblem::apply_K_qp(const ScalarField& phi) const {
    return apply_weighted_resolvent(*plan_, q_pow_, p_pow_, phi);
}

ScalarField DualProblem::apply_K_pq(const ScalarField& psi) const {
    return apply_weighted_resolvent(*plan_, p_pow_, q_pow_, psi);
}

DualPair lift(const DualProblem& prob, ScalarField psi, ScalarField phi) {
    if (!(psi.grid() == prob.grid()) || !(phi.grid() == prob.grid()))
        throw GridMismatch("lift: state fields not on the problem grid");
    ScalarField K = prob.apply_K_qp(phi);
    const double A = lp_power_sum(psi, prob.exponents().q_dual);
    const double B = lp_power_sum(phi, prob.exponents().p_dual);
    const double C = 2.0 * inner(psi, K);   // symmetry halves the resolvent work
    return DualPair{std::move(psi), std::move(phi), A, B, C, std::move(K)};
}

DualPair scale_state(const DualProblem& prob, const DualPair& z, double t) {
    const auto& e = prob.exponents();
    auto scaled = [&](const ScalarField& f) {
        std::vector<double> v(f.values());
        for (double& x : v) x *= t;
        return ScalarField(f.grid(), std::move(v));
    };
    return DualPair{scaled(z.psi), scaled(z.phi),
                    std::pow(t, e.q_dual) * z.A,
                    std::pow(t, e.p_dual) * z.B,
                    t * t * z.C,
                    scaled(z.K_qp_phi)};
}

double energy(const DualProblem& prob, const DualPair& z) {
    const auto& e = prob.exponents();
    return z.A / e.q_dual + z.B / e.p_dual - z.C / 2.0;
}

DualGradient gradient(const DualProblem& prob, const DualPair& z) {
    const auto& e = prob.exponents();
    ScalarField K_pq_psi = prob.apply_K_pq(z.psi);
    std::vector<double> gp(z.psi.size()), gf(z.phi.size());
    for (std::size_t i = 0; i < gp.size(); ++i)
        gp[i] = signed_pow(z.psi[i], e.q_dual - 1.0) - z.K_qp_phi[i];
    for (std::size_t i = 0; i < gf.size(); ++i)
        gf[i] = signed_pow(z.phi[i], e.p_dual - 1.0) - K_pq_psi[i];
    return DualGradient{ScalarField(prob.grid(), std::move(gp)),
                        ScalarField(prob.grid(), std::move(gf))};
}

double nehari_gap(const DualProblem& prob, const DualPair& z) {
    (void)prob;
    if (z.A + z.B == 0.0)
        throw ZeroState("nehari_gap: zero state");
    return z.A + z.B - z.C;
}

NehariProjection nehari_project(const DualProblem& prob, const DualPair& z) {
    const auto& e = prob.exponents();
    const double A = z.A, B = z.B, C = z.C;
    if (!(C > 0.0))
        throw NotInPositiveCone("nehari_project: quadratic interaction C = " +
                                std::to_string(C) + " is not positive");
    const double eq = e.q_dual - 2.0;   // in (-1, 0)
    const double ep = e.p_dual - 2.0;
    auto f = [&](double t) { return std::pow(t, eq) * A + std::pow(t, ep) * B - C; };

    // one-term reductions bracket the root (left side lies between the two)
    double t1 = std::pow(C / (A + B), 1.0 / eq);
    double t2 = std::pow(C / (A + B), 1.0 / ep);
    double lo = std::min(t1, t2), hi = std::max(t1, t2);
    while (f(lo) < 0.0) lo *= 0.5;                 // defensive; not expected
    while (f(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    double t = 0.5 * (lo + hi);
    const double deriv = eq * std::pow(t, eq - 1.0) * A + ep * std::pow(t, ep - 1.0) * B;
    t -= f(t) / deriv;
    return NehariProjection{t, scale_state(prob, z, t)};
}

double relative_residual(const DualProblem& prob, const DualPair& z, const DualGradient& g) {
    const auto& e = prob.exponents();
    CompensatedSum num, den;
    for (double v : g.g_psi.values()) num.add(v * v);
    for (double v : g.g_phi.values()) num.add(v * v);
    for (double v : z.psi.values()) {
        const double w = std::pow(std::abs(v), e.q_dual - 1.0);
        den.add(w * w);
    }
    for (double v : z.phi.values()) {
        const double w = std::pow(std::abs(v), e.p_dual - 1.0);
        den.add(w * w);
    }
    const double d = std::sqrt(den.value());
    return d > 0.0 ? std::sqrt(num.value()) / d : std::sqrt(num.value());
}

} // namespace helmdual
