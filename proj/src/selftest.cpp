#include "helmdual/cli.hpp"
#include "helmdual/fft.hpp"
#include "helmdual/numeric.hpp"

#include <cmath>
#include <iostream>

namespace helmdual::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

ScalarField random_trig(const Grid& g, Rng& rng, int kmax = 3, int nmodes = 8) {
    std::vector<double> vals(g.cell_count(), 0.0);
    const int n = g.samples;
    for (int m = 0; m < nmodes; ++m) {
        double kvec[8];
        for (int d = 0; d < g.dim; ++d)
            kvec[d] = static_cast<double>(rng.uniform_int(-kmax, kmax)) * kPi / g.half_width;
        const double a = rng.gaussian();
        const double b = rng.gaussian();
        for (std::size_t flat = 0; flat < vals.size(); ++flat) {
            std::size_t rem = flat;
            double phase = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const int j = static_cast<int>(rem % n);
                rem /= n;
                phase += kvec[d] * g.coord(j);
            }
            vals[flat] += a * std::cos(phase) + b * std::sin(phase);
        }
    }
    return ScalarField(g, std::move(vals));
}

struct Reporter {
    std::ostream& out;
    bool all_ok = true;
    void check(const std::string& name, bool ok, const std::string& detail) {
        all_ok = all_ok && ok;
        out << (ok ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

} // namespace

bool selftest(std::ostream& out, bool quick) {
    const int n = quick ? 32 : 48;
    Grid grid = make_grid(3, 8.0 * kPi, n);
    const double delta = 1e-3;
    auto plan = std::make_shared<const ResolventPlan>(grid, delta);
    AdmissibleExponents exps = check_admissible(3, 5.0, 5.0);
    CoefficientSpec pspec = CoefficientSpec::floor_plus_gaussians(0.5, {{1.0, {0, 0, 0}, 2.0}});
    DualProblem prob(exps, make_coefficient(pspec, grid), make_coefficient(pspec, grid), plan);
    Rng rng(20240901);
    Reporter rep{out};

    // multiplier algebra: (|xi|^2-1) m + delta^2/((|xi|^2-1)^2+delta^2) = 1
    {
        auto symbol = build_multiplier(grid, [](double xi2) { return xi2 - 1.0; });
        double worst = 0.0;
        for (std::size_t i = 0; i < symbol.size(); ++i) {
            const double t = symbol[i];
            const double lhs = t * plan->multiplier[i] + delta * delta / (t * t + delta * delta);
            worst = std::max(worst, std::abs(lhs - 1.0));
        }
        rep.check("multiplier-algebra", worst <= 1e-15, "max deviation " + sci(worst));
    }

    // operator symmetry <u, K_pq v> = <v, K_qp u>
    {
        const int pairs = quick ? 5 : 20;
        double worst = 0.0;
        for (int i = 0; i < pairs; ++i) {
            ScalarField u = random_trig(grid, rng);
            ScalarField v = random_trig(grid, rng);
            const double lhs = inner(u, prob.apply_K_pq(v));
            const double rhs = inner(v, prob.apply_K_qp(u));
            const double scale = lp_norm(u, 2.0) * lp_norm(v, 2.0);
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
        rep.check("operator-symmetry", worst <= 1e-10, "max relative asymmetry " + sci(worst));
    }

    // resolvent self-adjointness
    {
        ScalarField u = random_trig(grid, rng);
        ScalarField v = random_trig(grid, rng);
        const double lhs = inner(u, apply_resolvent(*plan, v));
        const double rhs = inner(v, apply_resolvent(*plan, u));
        const double rel = std::abs(lhs - rhs) / (lp_norm(u, 2.0) * lp_norm(v, 2.0));
        rep.check("resolvent-self-adjoint", rel <= 1e-11, "relative asymmetry " + sci(rel));
    }

    // gradient vs central finite differences (positive base state)
    {
        std::vector<double> base(grid.cell_count(), 3.0);
        ScalarField noise = random_trig(grid, rng);
        for (std::size_t i = 0; i < base.size(); ++i) base[i] += 0.2 * noise[i];
        ScalarField psi0(grid, base);
        ScalarField phi0(grid, std::move(base));
        DualPair z = lift(prob, psi0, phi0);
        DualGradient gr = gradient(prob, z);
        const int dirs = quick ? 3 : 10;
        const double t = 1e-5;
        double worst = 0.0;
        for (int i = 0; i < dirs; ++i) {
            ScalarField wp = random_trig(grid, rng);
            ScalarField wf = random_trig(grid, rng);
            const double dd = inner(gr.g_psi, wp) + inner(gr.g_phi, wf);
            auto perturb = [&](double sg) {
                std::vector<double> ps(psi0.size()), ph(phi0.size());
                for (std::size_t k = 0; k < ps.size(); ++k) {
                    ps[k] = psi0[k] + sg * t * wp[k];
                    ph[k] = phi0[k] + sg * t * wf[k];
                }
                return energy(prob, lift(prob, ScalarField(grid, std::move(ps)),
                                         ScalarField(grid, std::move(ph))));
            };
            const double fd = (perturb(1.0) - perturb(-1.0)) / (2.0 * t);
            worst = std::max(worst, std::abs(dd - fd) / std::max(std::abs(dd), 1e-300));
        }
        rep.check("gradient-fd", worst <= 1e-6, "max relative error " + sci(worst));
    }

    // Nehari identities on random cone states
    {
        const int tries = quick ? 5 : 20;
        double worst_gap = 0.0, worst_idem = 0.0, worst_scale = 0.0, worst_energy = 0.0;
        bool tangency_ok = true, positive_ok = true;
        int done = 0;
        for (int i = 0; i < tries * 10 && done < tries; ++i) {
            // modes must reach past the unit sphere for the cone to be hit
            ScalarField a = random_trig(grid, rng, 12);
            DualPair z = lift(prob, a, a);
            if (z.C <= 0.0) continue;
            ++done;
            NehariProjection proj = nehari_project(prob, z);
            worst_gap = std::max(worst_gap, std::abs(nehari_gap(prob, proj.state)) /
                                                (proj.state.A + proj.state.B));
            NehariProjection again = nehari_project(prob, proj.state);
            worst_idem = std::max(worst_idem, std::abs(again.t - 1.0));
            const double lam = 2.0;
            DualPair zs = scale_state(prob, z, lam);
            NehariProjection pl = nehari_project(prob, zs);
            worst_scale = std::max(worst_scale, std::abs(pl.t * lam - proj.t) / proj.t);
            const double J = energy(prob, proj.state);
            const double qd = exps.q_dual, pd = exps.p_dual;
            const double ident = (1.0 / qd - 0.5) * proj.state.A + (1.0 / pd - 0.5) * proj.state.B;
            worst_energy = std::max(worst_energy, std::abs(J - ident) / std::abs(J));
            positive_ok = positive_ok && J > 0.0;
            tangency_ok = tangency_ok &&
                          (qd - 2.0) * proj.state.A + (pd - 2.0) * proj.state.B < 0.0;
        }
        rep.check("nehari-projection-residual", done == tries && worst_gap <= 1e-12,
                  "max " + sci(worst_gap) + " over " + std::to_string(done) + " states");
        rep.check("nehari-idempotence", worst_idem <= 1e-10, "max |t-1| " + sci(worst_idem));
        rep.check("nehari-scaling-law", worst_scale <= 1e-10, "max " + sci(worst_scale));
        rep.check("nehari-energy-identity", worst_energy <= 1e-10, "max " + sci(worst_energy));
        rep.check("nehari-positive-energy", positive_ok && done == tries,
                  std::to_string(done) + " states");
        rep.check("nehari-tangency", tangency_ok, "(q'-2)A + (p'-2)B < 0");
    }

    // quadrature exactness on a trigonometric polynomial
    {
        Grid small = make_grid(3, kPi, 16);
        std::vector<double> vals(small.cell_count());
        const int ns = small.samples;
        for (std::size_t flat = 0; flat < vals.size(); ++flat)
            vals[flat] = std::cos(small.coord(static_cast<int>(flat % ns)));
        ScalarField f(small, std::move(vals));
        const double expect = std::sqrt(4.0 * kPi * kPi * kPi);
        const double got = lp_norm(f, 2.0);
        const double rel = std::abs(got - expect) / expect;
        rep.check("quadrature-exactness", rel <= 1e-12, "cos(x1) L2 rel err " + sci(rel));
    }

    // shift isometry (bit-exact) and signed-power oddness
    {
        ScalarField f = random_trig(grid, rng);
        ScalarField s = shift(f, {3, -5, 7});
        bool exact = lp_norm(f, exps.q_dual) == lp_norm(s, exps.q_dual);
        rep.check("shift-isometry", exact, "L^{q'} norm bit-equal under lattice shift");
        ScalarField neg(grid, [&] {
            std::vector<double> v(f.values());
            for (double& x : v) x = -x;
            return v;
        }());
        ScalarField sp = signed_power(f, 1.7);
        ScalarField sn = signed_power(neg, 1.7);
        bool odd = true;
        for (std::size_t i = 0; i < sp.size() && odd; ++i) odd = sp[i] == -sn[i];
        rep.check("signed-power-odd", odd, "spow(-f,s) == -spow(f,s) exactly");
    }

    return rep.all_ok;
}

} // namespace helmdual::cli
