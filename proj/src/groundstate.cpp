#include "helmdual/groundstate.hpp"
#include "helmdual/fft.hpp"
#include "helmdual/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace helmdual {

namespace {

ScalarField pointwise(const Grid& g, std::size_t n, auto&& fn) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return ScalarField(g, std::move(out));
}

double power_sum(const ScalarField& f, double r) {
    CompensatedSum s;
    for (double v : f.values()) s.add(std::pow(std::abs(v), r));
    return s.value() * f.grid().cell_volume();
}

/// Closed-form two-scalar rescaling (a psi, b phi) solving the component
/// Nehari conditions a^{q'-1} A = b w and b^{p'-1} B = a w, where w is the
/// coupling <psi, K phi>. The balanced state lies on the Nehari set and the
/// rescaling pins the psi/phi norm ratio, which the single-scalar projection
/// cannot control across fixed-point sweeps.
DualPair balance(const DualProblem& prob, const ScalarField& psi, const ScalarField& phi,
                 double* coupling_out = nullptr) {
    const auto& e = prob.exponents();
    ScalarField K = prob.apply_K_qp(phi);
    const double A = power_sum(psi, e.q_dual);
    const double B = power_sum(phi, e.p_dual);
    const double w = inner(psi, K);
    if (coupling_out) *coupling_out = w;
    if (!(w > 0.0) || !(A > 0.0) || !(B > 0.0))
        throw NotInPositiveCone("balance: coupling or norms not positive");
    const double gamma = (e.q_dual - 1.0) * (e.p_dual - 1.0) - 1.0;   // < 0
    const double ln_a = (e.p_dual * std::log(w) - (e.p_dual - 1.0) * std::log(A) - std::log(B)) / gamma;
    const double a = std::exp(ln_a);
    const double b = std::pow(a, e.q_dual - 1.0) * A / w;

    const Grid& g = prob.grid();
    ScalarField ps = pointwise(g, psi.size(), [&](std::size_t i) { return a * psi[i]; });
    ScalarField ph = pointwise(g, phi.size(), [&](std::size_t i) { return b * phi[i]; });
    ScalarField Ks = pointwise(g, K.size(), [&](std::size_t i) { return b * K[i]; });
    const double As = std::pow(a, e.q_dual) * A;
    const double Bs = std::pow(b, e.p_dual) * B;
    const double Cs = 2.0 * a * b * w;
    return DualPair{std::move(ps), std::move(ph), As, Bs, Cs, std::move(Ks)};
}

/// Annular-spectrum wave packet: IFFT of exp(-(|xi|-c)^2/w^2), normalized to
/// unit peak, rolled so its center sits on the given lattice cell.
ScalarField wave_packet(const Grid& grid, double center, double width,
                        const std::vector<long>& roll_cells) {
    auto spec = build_multiplier(grid, [&](double xi2) {
        const double d = (std::sqrt(xi2) - center) / width;
        return std::exp(-d * d);
    });
    std::vector<std::complex<double>> buf(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) buf[i] = spec[i];
    auto vals = fft_inverse_real(grid, buf);
    double mx = 0.0;
    for (double v : vals) mx = std::max(mx, std::abs(v));
    if (mx > 0.0)
        for (double& v : vals) v /= mx;
    ScalarField f(grid, std::move(vals));
    return shift(f, roll_cells);
}

/// Among the cells where P*Q attains its discrete max, the one closest to
/// the origin; seeds are centered there.
std::vector<long> argmax_cell(const DualProblem& prob) {
    const Grid& g = prob.grid();
    const auto& P = prob.P().base;
    const auto& Q = prob.Q().base;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < P.size(); ++i) mx = std::max(mx, P[i] * Q[i]);
    const double tol = std::abs(mx) * 1e-12;
    double best_r2 = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    std::array<int, 8> idx{};
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (P[i] * Q[i] < mx - tol) continue;
        auto pt = P.point(i);
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) r2 += pt[d] * pt[d];
        if (r2 < best_r2) {
            best_r2 = r2;
            best = i;
        }
    }
    P.unflatten(best, idx);
    std::vector<long> cells(g.dim);
    for (int d = 0; d < g.dim; ++d) cells[d] = idx[d];
    return cells;
}

DualPair make_seed(const DualProblem& prob, const SeedSpec& spec) {
    const Grid& g = prob.grid();
    if (spec.kind == SeedSpec::Kind::UserField) {
        if (!spec.user_psi || !spec.user_phi)
            throw ConfigError("seed: user kind requires both fields");
        try {
            return balance(prob, *spec.user_psi, *spec.user_phi);
        } catch (const NotInPositiveCone& e) {
            // a fixed user seed cannot be rescued by reseeding
            throw SeedOutsideCone(std::string("seed: user state outside the positive cone: ") +
                                  e.what());
        }
    }

    std::vector<long> center = argmax_cell(prob);
    if (!spec.center_offset.empty()) {
        if (static_cast<int>(spec.center_offset.size()) != g.dim)
            throw ConfigError("seed: center_offset dimension mismatch");
        for (int d = 0; d < g.dim; ++d) center[d] += spec.center_offset[d];
    }

    Rng rng(spec.rng_seed * 0x9e3779b9ULL + 1);
    for (int attempt = 0; attempt < 10; ++attempt) {
        double c = spec.annulus_center;
        double w = spec.annulus_width;
        std::vector<long> cells = center;
        if (spec.kind == SeedSpec::Kind::Random) {
            c = 1.05 + 0.45 * rng.uniform();
            w = 0.1 + 0.25 * rng.uniform();
            for (int d = 0; d < g.dim; ++d)
                cells[d] += rng.uniform_int(-g.samples / 8, g.samples / 8);
        } else if (attempt > 0) {
            c = spec.annulus_center + 0.05 * attempt;
            w = spec.annulus_width * (1.0 + 0.25 * attempt);
        }
        try {
            ScalarField packet = wave_packet(g, c, w, cells);
            return balance(prob, packet, packet);
        } catch (const NotInPositiveCone&) {
            continue;
        }
    }
    throw SeedOutsideCone("seed: no attempt landed in the positive cone after 10 tries");
}

Solution finish(const DualProblem& prob, DualPair state, int iters, Algorithm algo,
                bool converged, double residual) {
    PrimalPair primal = recover_primal(prob, state);
    const double en = energy(prob, state);
    return Solution{std::move(state), en, std::move(primal), iters, algo, converged, residual};
}

Solution solve_fixed_point(const DualProblem& prob, const SolverConfig& cfg) {
    const auto& e = prob.exponents();
    DualPair z = make_seed(prob, cfg.initial);
    double rr = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_iters; ++it) {
        DualGradient gr = gradient(prob, z);
        rr = relative_residual(prob, z, gr);
        if (rr <= cfg.tol_residual)
            return finish(prob, std::move(z), it, Algorithm::FixedPoint, true, rr);
        if (!cfg.sweep_phi_first) {
            ScalarField psi_n = signed_power(z.K_qp_phi, e.q - 1.0);
            ScalarField phi_n = signed_power(prob.apply_K_pq(psi_n), e.p - 1.0);
            z = balance(prob, psi_n, phi_n);
        } else {
            ScalarField phi_n = signed_power(prob.apply_K_pq(z.psi), e.p - 1.0);
            ScalarField psi_n = signed_power(prob.apply_K_qp(phi_n), e.q - 1.0);
            z = balance(prob, psi_n, phi_n);
        }
    }
    return finish(prob, std::move(z), cfg.max_iters, Algorithm::FixedPoint, false, rr);
}

Solution solve_projected_gradient(const DualProblem& prob, const SolverConfig& cfg) {
    const auto& e = prob.exponents();
    const Grid& g = prob.grid();
    const double hN = g.cell_volume();
    const double eq = 2.0 / e.q_dual;   // lift exponent for psi (in (1,2))
    const double ep = 2.0 / e.p_dual;

    DualPair z = make_seed(prob, cfg.initial);
    ScalarField eta = signed_power(z.psi, e.q_dual / 2.0);
    ScalarField zeta = signed_power(z.phi, e.p_dual / 2.0);
    double J = energy(prob, z);
    double step = 1.0;
    bool have_prev = false;
    std::vector<double> prev_eta, prev_zeta, prev_ge, prev_gz;
    double rr = std::numeric_limits<double>::infinity();

    for (int it = 0; it < cfg.max_iters; ++it) {
        ScalarField K_pq_psi = prob.apply_K_pq(z.psi);
        // z-space gradient components for the stopping residual
        ScalarField g_psi = pointwise(g, z.psi.size(), [&](std::size_t i) {
            return signed_pow(z.psi[i], e.q_dual - 1.0) - z.K_qp_phi[i];
        });
        ScalarField g_phi = pointwise(g, z.phi.size(), [&](std::size_t i) {
            return signed_pow(z.phi[i], e.p_dual - 1.0) - K_pq_psi[i];
        });
        rr = relative_residual(prob, z, DualGradient{g_psi, g_phi});
        if (rr <= cfg.tol_residual)
            return finish(prob, std::move(z), it, Algorithm::ProjectedGradient, true, rr);

        // half-density gradient: d/d eta of J(spow(eta, eq), .)
        std::vector<double> ge(eta.size()), gz(zeta.size());
        for (std::size_t i = 0; i < ge.size(); ++i)
            ge[i] = eq * (eta[i] - std::pow(std::abs(eta[i]), eq - 1.0) * z.K_qp_phi[i]);
        for (std::size_t i = 0; i < gz.size(); ++i)
            gz[i] = ep * (zeta[i] - std::pow(std::abs(zeta[i]), ep - 1.0) * K_pq_psi[i]);

        CompensatedSum slope_sum;
        for (double v : ge) slope_sum.add(v * v);
        for (double v : gz) slope_sum.add(v * v);
        const double slope = slope_sum.value() * hN;

        if (have_prev) {
            CompensatedSum num, den;
            for (std::size_t i = 0; i < ge.size(); ++i) {
                const double se = eta[i] - prev_eta[i];
                const double sz = zeta[i] - prev_zeta[i];
                num.add(se * se + sz * sz);
                den.add(se * (ge[i] - prev_ge[i]) + sz * (gz[i] - prev_gz[i]));
            }
            if (den.value() > 0.0 && num.value() > 0.0)
                step = std::clamp(num.value() / den.value(), 1e-10, 1e4);
        }
        prev_eta.assign(eta.values().begin(), eta.values().end());
        prev_zeta.assign(zeta.values().begin(), zeta.values().end());
        prev_ge = ge;
        prev_gz = gz;
        have_prev = true;

        const double j_slack = 1e-12 * std::abs(J);   // rounding floor near optimum
        bool accepted = false;
        double s = step;
        while (s >= 1e-14) {
            std::vector<double> en(eta.size()), zn(zeta.size());
            for (std::size_t i = 0; i < en.size(); ++i) en[i] = eta[i] - s * ge[i];
            for (std::size_t i = 0; i < zn.size(); ++i) zn[i] = zeta[i] - s * gz[i];
            ScalarField eta_t(g, std::move(en));
            ScalarField zeta_t(g, std::move(zn));
            ScalarField psi_t = signed_power(eta_t, eq);
            ScalarField phi_t = signed_power(zeta_t, ep);
            DualPair trial = lift(prob, std::move(psi_t), std::move(phi_t));
            if (trial.C > 0.0) {
                NehariProjection proj = nehari_project(prob, trial);
                const double Jt = energy(prob, proj.state);
                if (Jt <= J - cfg.armijo.slope * s * slope + j_slack) {
                    const double tq = std::pow(proj.t, e.q_dual / 2.0);
                    const double tp = std::pow(proj.t, e.p_dual / 2.0);
                    eta = pointwise(g, eta_t.size(), [&](std::size_t i) { return tq * eta_t[i]; });
                    zeta = pointwise(g, zeta_t.size(), [&](std::size_t i) { return tp * zeta_t[i]; });
                    z = std::move(proj.state);
                    J = Jt;
                    step = s;
                    accepted = true;
                    break;
                }
            }
            s *= cfg.armijo.shrink;
        }
        if (!accepted)
            throw NoDescentDirection("projected_gradient: Armijo failed at minimal step 1e-14 "
                                     "with relative residual " + std::to_string(rr));
    }
    return finish(prob, std::move(z), cfg.max_iters, Algorithm::ProjectedGradient, false, rr);
}

} // namespace

std::string algorithm_name(Algorithm a) {
    return a == Algorithm::ProjectedGradient ? "projected_gradient" : "fixed_point";
}

PrimalPair recover_primal(const DualProblem& prob, const DualPair& state) {
    if (!(state.psi.grid() == prob.grid()))
        throw GridMismatch("recover_primal: state not on the problem grid");
    const auto& e = prob.exponents();
    const Grid& g = prob.grid();

    ScalarField wu = pointwise(g, state.phi.size(), [&](std::size_t i) {
        return prob.p_power()[i] * state.phi[i];
    });
    ScalarField wv = pointwise(g, state.psi.size(), [&](std::size_t i) {
        return prob.q_power()[i] * state.psi[i];
    });
    ScalarField u = apply_resolvent(prob.plan(), wu);
    ScalarField v = apply_resolvent(prob.plan(), wv);

    ScalarField rhs_u = pointwise(g, v.size(), [&](std::size_t i) {
        return prob.P().base[i] * signed_pow(v[i], e.p - 1.0);
    });
    ScalarField rhs_v = pointwise(g, u.size(), [&](std::size_t i) {
        return prob.Q().base[i] * signed_pow(u[i], e.q - 1.0);
    });
    ScalarField hu = apply_helmholtz(g, u);
    ScalarField hv = apply_helmholtz(g, v);

    auto l2_diff = [&](const ScalarField& a, const ScalarField& b) {
        CompensatedSum s;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            s.add(d * d);
        }
        return std::sqrt(s.value() * g.cell_volume());
    };
    PrimalPair pp{std::move(u), std::move(v), 0.0, 0.0, 0.0, 0.0};
    pp.residual_u = l2_diff(hu, rhs_u);
    pp.residual_v = l2_diff(hv, rhs_v);
    const double nu = lp_norm(rhs_u, 2.0);
    const double nv = lp_norm(rhs_v, 2.0);
    pp.rel_residual_u = nu > 0.0 ? pp.residual_u / nu : 0.0;
    pp.rel_residual_v = nv > 0.0 ? pp.residual_v / nv : 0.0;
    return pp;
}

Solution solve_ground_state(const DualProblem& prob, const SolverConfig& cfg) {
    if (cfg.max_iters < 1 || !(cfg.tol_residual > 0.0))
        throw ConfigError("solve_ground_state: invalid solver config");
    return cfg.algorithm == Algorithm::FixedPoint ? solve_fixed_point(prob, cfg)
                                                  : solve_projected_gradient(prob, cfg);
}

Solution limit_ground_energy(double Pbar, double Qbar, const AdmissibleExponents& exps,
                             const Grid& grid, std::shared_ptr<const ResolventPlan> plan,
                             const SolverConfig& cfg) {
    if (!(Pbar > 0.0) || !(Qbar > 0.0))
        throw DomainError("limit_ground_energy: coefficient levels must be positive");
    CoefficientField P = make_coefficient(CoefficientSpec::constant(Pbar), grid);
    CoefficientField Q = make_coefficient(CoefficientSpec::constant(Qbar), grid);
    DualProblem prob(exps, std::move(P), std::move(Q), std::move(plan));
    return solve_ground_state(prob, cfg);
}

std::vector<Solution> dedup_solutions(const DualProblem& prob, const std::vector<Solution>& sols,
                                      double energy_tol, bool shift_search) {
    const auto& e = prob.exponents();
    std::vector<Solution> reps;
    for (const auto& s : sols) {
        bool is_new = true;
        for (const auto& r : reps) {
            if (std::abs(s.energy - r.energy) > energy_tol) continue;
            ScalarField cand = s.state.psi;
            if (shift_search) {
                // align peaks by lattice shift
                auto peak = [](const ScalarField& f) {
                    std::size_t best = 0;
                    double mx = -1.0;
                    for (std::size_t i = 0; i < f.size(); ++i)
                        if (std::abs(f[i]) > mx) { mx = std::abs(f[i]); best = i; }
                    return best;
                };
                std::array<int, 8> ia{}, ib{};
                s.state.psi.unflatten(peak(s.state.psi), ia);
                r.state.psi.unflatten(peak(r.state.psi), ib);
                std::vector<long> cells(prob.grid().dim);
                for (int d = 0; d < prob.grid().dim; ++d) cells[d] = ib[d] - ia[d];
                cand = shift(cand, cells);
            }
            const double qd = e.q_dual;
            CompensatedSum dplus, dminus, base;
            for (std::size_t i = 0; i < cand.size(); ++i) {
                dplus.add(std::pow(std::abs(cand[i] - r.state.psi[i]), qd));
                dminus.add(std::pow(std::abs(cand[i] + r.state.psi[i]), qd));
                base.add(std::pow(std::abs(r.state.psi[i]), qd));
            }
            const double dist = std::pow(std::min(dplus.value(), dminus.value()) / base.value(), 1.0 / qd);
            if (dist <= 1e-3) {
                is_new = false;
                break;
            }
        }
        if (is_new) reps.push_back(s);
    }
    return reps;
}

} // namespace helmdual
