#include "helmdual/resolvent.hpp"
#include "helmdual/fft.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace helmdual {

double default_delta(const Grid& grid) {
    const double dxi = grid.freq_spacing();
    return std::max(1e-3, dxi * dxi);
}

ResolventPlan::ResolventPlan(const Grid& g, double delta_) : grid(g), delta(delta_) {
    if (!(delta > 0.0))
        throw DomainError("ResolventPlan: delta must be positive");
    double min_off = std::numeric_limits<double>::infinity();
    long hits = 0;
    multiplier = build_multiplier(grid, [&](double xi2) {
        const double t = xi2 - 1.0;
        if (t == 0.0) {
            ++hits;
            return 0.0;
        }
        min_off = std::min(min_off, std::abs(t));
        return t / (t * t + delta * delta);
    });
    min_nonzero_offset = min_off;
    on_sphere_count = hits;
    if (min_nonzero_offset < delta / 10.0)
        throw SingularGrid("ResolventPlan: nearest off-sphere frequency offset " +
                           std::to_string(min_nonzero_offset) + " is below delta/10 = " +
                           std::to_string(delta / 10.0));
}

ScalarField apply_resolvent(const ResolventPlan& plan, const ScalarField& f) {
    if (!(f.grid() == plan.grid))
        throw GridMismatch("apply_resolvent: field not on the plan's grid");
    double residue = 0.0;
    ScalarField out = apply_multiplier(f, plan.multiplier, &residue);
    if (residue > 1e-12)
        throw Error("apply_resolvent: imaginary residue " + std::to_string(residue) +
                    " exceeds 1e-12 of the output norm");
    return out;
}

ScalarField apply_helmholtz(const Grid& grid, const ScalarField& u) {
    if (!(u.grid() == grid))
        throw GridMismatch("apply_helmholtz: field not on the given grid");
    auto symbol = build_multiplier(grid, [](double xi2) { return xi2 - 1.0; });
    return apply_multiplier(u, symbol);
}

ScalarField apply_weighted_resolvent(const ResolventPlan& plan, const ScalarField& outer_pow,
                                     const ScalarField& inner_pow, const ScalarField& v) {
    if (!(v.grid() == plan.grid) || !(outer_pow.grid() == plan.grid) ||
        !(inner_pow.grid() == plan.grid))
        throw GridMismatch("apply_weighted_resolvent: grid mismatch");
    std::vector<double> weighted(v.size());
    for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] = inner_pow[i] * v[i];
    ScalarField rv = apply_resolvent(plan, ScalarField(plan.grid, std::move(weighted)));
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = outer_pow[i] * rv[i];
    return ScalarField(plan.grid, std::move(out));
}

ScalarField birman_schwinger(const ResolventPlan& plan, const CoefficientField& P, double p,
                             const CoefficientField& Q, double q, const ScalarField& v) {
    if (!(P.floor > 0.0) || !(Q.floor > 0.0))
        throw FloorViolation("birman_schwinger: coefficient floor must be positive");
    for (double c : P.base.values())
        if (!(c > 0.0)) throw FloorViolation("birman_schwinger: nonpositive P sample");
    for (double c : Q.base.values())
        if (!(c > 0.0)) throw FloorViolation("birman_schwinger: nonpositive Q sample");
    ScalarField outer = signed_power(P.base, 1.0 / p);
    ScalarField inner_w = signed_power(Q.base, 1.0 / q);
    return apply_weighted_resolvent(plan, outer, inner_w, v);
}

} // namespace helmdual
