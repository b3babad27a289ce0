#include "helmdual/concentration.hpp"
#include "helmdual/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace helmdual {

namespace {

ScalarField pointwise(const Grid& g, std::size_t n, auto&& fn) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return ScalarField(g, std::move(out));
}

std::vector<double> weighted_chi_moment(const ScalarField& f, double expo, double eps, double rho) {
    const Grid& g = f.grid();
    const int n = g.samples;
    CompensatedSum total;
    std::vector<CompensatedSum> mom(g.dim);
    double y[8];
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        const double w = std::pow(std::abs(f[flat]), expo);
        std::size_t rem = flat;
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            const int j = static_cast<int>(rem % n);
            rem /= n;
            y[d] = eps * g.coord(j);
            r2 += y[d] * y[d];
        }
        const double r = std::sqrt(r2);
        const double scale = r <= rho ? 1.0 : rho / r;
        total.add(w);
        for (int d = 0; d < g.dim; ++d) mom[d].add(scale * y[d] * w);
    }
    if (!(total.value() > 0.0))
        throw ZeroState("barycenter: zero state");
    std::vector<double> out(g.dim);
    for (int d = 0; d < g.dim; ++d) out[d] = mom[d].value() / total.value();
    return out;
}

double lp_distance_signed(const ScalarField& a, const ScalarField& b, double r, bool& flipped) {
    CompensatedSum plus, minus, base;
    for (std::size_t i = 0; i < a.size(); ++i) {
        plus.add(std::pow(std::abs(a[i] - b[i]), r));
        minus.add(std::pow(std::abs(a[i] + b[i]), r));
        base.add(std::pow(std::abs(b[i]), r));
    }
    flipped = minus.value() < plus.value();
    return std::pow(std::min(plus.value(), minus.value()) / base.value(), 1.0 / r);
}

/// C-infinity radial cutoff: 1 on [0, R/2], 0 on [R, inf).
double eta_cut(double t, double R) {
    if (t <= 0.5 * R) return 1.0;
    if (t >= R) return 0.0;
    const double u = (t - 0.5 * R) / (0.5 * R);
    const double fa = std::exp(-1.0 / (1.0 - u));
    const double fb = std::exp(-1.0 / u);
    return fa / (fa + fb);
}

} // namespace

Barycenters barycenter(const DualProblem& prob, const DualPair& state, double eps, double rho) {
    if (!(rho > 0.0))
        throw DomainError("barycenter: rho must be positive");
    const auto& e = prob.exponents();
    return Barycenters{weighted_chi_moment(state.psi, e.q_dual, eps, rho),
                       weighted_chi_moment(state.phi, e.p_dual, eps, rho)};
}

ScalarField frame_scaling_map(const ScalarField& u, double k, const AdmissibleExponents& exps,
                                bool second_component, bool invert) {
    if (!(k > 0.0))
        throw DomainError("frame_scaling_map: k must be positive");
    const double beta = second_component ? exps.beta2 : exps.beta1;
    const double amp = invert ? std::pow(k, beta) : std::pow(k, -beta);
    const Grid& g = u.grid();
    Grid mapped{g.dim, invert ? g.half_width * k : g.half_width / k, g.samples};
    std::vector<double> vals(u.values());
    for (double& v : vals) v *= amp;
    return ScalarField(mapped, std::move(vals));
}

std::pair<double, double> align_and_compare(const DualProblem& prob, const Solution& solution,
                                            const Solution& limit, double eps,
                                            const AdmissibleExponents& exps, double rho) {
    if (!solution.converged || !limit.converged)
        throw NotConverged("align_and_compare: both solutions must be converged");
    Barycenters b = barycenter(prob, solution.state, eps, rho);
    const Grid& g = prob.grid();
    std::vector<long> cells(g.dim);
    for (int d = 0; d < g.dim; ++d)
        cells[d] = -static_cast<long>(std::llround(b.psi[d] / (eps * g.spacing())));
    ScalarField u_aligned = shift(solution.primal.u, cells);
    ScalarField v_aligned = shift(solution.primal.v, cells);
    bool flip_u = false, flip_v = false;
    const double du = lp_distance_signed(u_aligned, limit.primal.u, exps.q, flip_u);
    const double dv = lp_distance_signed(v_aligned, limit.primal.v, exps.p, flip_v);
    return {du, dv};
}

ConcentrationReport run_sweep(const SweepConfig& cfg) {
    if (cfg.eps_list.empty())
        throw ConfigError("run_sweep: empty eps list");
    for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
        if (!(cfg.eps_list[i] > 0.0))
            throw ConfigError("run_sweep: eps values must be positive");
        if (i > 0 && !(cfg.eps_list[i] < cfg.eps_list[i - 1]))
            throw ConfigError("run_sweep: eps list must be strictly decreasing");
    }
    if (!(cfg.rho > 0.0))
        throw ConfigError("run_sweep: rho must be positive");

    const double delta = cfg.delta > 0.0 ? cfg.delta : default_delta(cfg.grid);
    auto plan = std::make_shared<const ResolventPlan>(cfg.grid, delta);

    // undilated coefficients: discrete sup levels and common-argmax check
    CoefficientField P1 = make_coefficient(cfg.P, cfg.grid);
    CoefficientField Q1 = make_coefficient(cfg.Q, cfg.grid);
    const double h = cfg.grid.spacing();
    bool common = false;
    for (const auto& a : P1.argmax_points) {
        for (const auto& b : Q1.argmax_points) {
            double r2 = 0.0;
            for (int d = 0; d < cfg.grid.dim; ++d) r2 += (a[d] - b[d]) * (a[d] - b[d]);
            if (std::sqrt(r2) <= h) {
                common = true;
                break;
            }
        }
        if (common) break;
    }

    ConcentrationReport rep;
    rep.common_max = common;
    rep.limit = std::make_shared<Solution>(
        limit_ground_energy(P1.sup_value, Q1.sup_value, cfg.exponents, cfg.grid, plan, cfg.solver));
    rep.c_M = rep.limit->energy;
    rep.limit_converged = rep.limit->converged;

    rep.entries.resize(cfg.eps_list.size());
    std::vector<std::shared_ptr<Solution>> best(cfg.eps_list.size());

    auto run_entry = [&](std::size_t idx) {
        const double eps = cfg.eps_list[idx];
        EpsRecord rec;
        rec.eps = eps;
        rec.converged = false;
        try {
            CoefficientField P = make_coefficient(cfg.P, cfg.grid, eps);
            CoefficientField Q = make_coefficient(cfg.Q, cfg.grid, eps);
            auto prob = std::make_shared<DualProblem>(cfg.exponents, std::move(P), std::move(Q), plan);
            std::vector<Solution> found;
            for (int k = 0; k < std::max(1, cfg.multistart); ++k) {
                SolverConfig sc = cfg.solver;
                if (k > 0) {
                    sc.initial.kind = SeedSpec::Kind::Random;
                    sc.initial.rng_seed = cfg.solver.initial.rng_seed * 1000003ULL +
                                          static_cast<std::uint64_t>(k);
                }
                try {
                    Solution s = solve_ground_state(*prob, sc);
                    if (s.converged) found.push_back(std::move(s));
                } catch (const Error&) {
                    // failed start; keep sweeping
                }
            }
            if (!found.empty()) {
                auto it = std::min_element(found.begin(), found.end(),
                                           [](const Solution& a, const Solution& b) {
                                               return a.energy < b.energy;
                                           });
                rec.converged = true;
                rec.c_eps = it->energy;
                rec.iterations = it->iterations;
                // the translation quotient is only meaningful when the
                // problem itself is translation invariant
                const bool shift_quotient =
                    cfg.P.kind == CoefficientSpec::Kind::Constant &&
                    cfg.Q.kind == CoefficientSpec::Kind::Constant;
                rec.distinct_solutions = static_cast<int>(
                    dedup_solutions(*prob, found, 1e-6 * std::abs(it->energy) + 1e-12,
                                    shift_quotient)
                        .size());
                Barycenters b = barycenter(*prob, it->state, eps, cfg.rho);
                rec.barycenter_psi = b.psi;
                rec.barycenter_phi = b.phi;
                if (rep.limit_converged) {
                    auto [du, dv] = align_and_compare(*prob, *it, *rep.limit, eps,
                                                      cfg.exponents, cfg.rho);
                    rec.profile_distance_u = du;
                    rec.profile_distance_v = dv;
                }
                best[idx] = std::make_shared<Solution>(std::move(*it));
            }
        } catch (const Error&) {
            rec.converged = false;
        }
        rep.entries[idx] = std::move(rec);
    };

    const int nthreads = std::max(1, cfg.threads);
    if (nthreads == 1) {
        for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) run_entry(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        std::mutex mx;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i;
                    {
                        std::lock_guard<std::mutex> lock(mx);
                        if (next >= cfg.eps_list.size()) return;
                        i = next++;
                    }
                    run_entry(i);
                }
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = cfg.eps_list.size(); i-- > 0;) {
        if (best[i]) {
            rep.finest = best[i];
            break;
        }
    }
    return rep;
}

double transplant_energy(const DualProblem& prob, const Solution& limit, double eps,
                         const std::vector<double>& x0, double cut_radius) {
    if (!limit.converged)
        throw NotConverged("transplant_energy: limit solution must be converged");
    const Grid& g = prob.grid();
    const int n = g.samples;
    // lattice shift realizing x -> x - x0/eps
    std::vector<long> cells(g.dim);
    for (int d = 0; d < g.dim; ++d)
        cells[d] = static_cast<long>(std::llround(x0[d] / (eps * g.spacing())));
    ScalarField U = shift(limit.state.psi, cells);
    ScalarField V = shift(limit.state.phi, cells);

    // coefficient compensation (Q(x0)/Q_eps(x))^{1/q} etc., with the smooth
    // radial cutoff eta(|eps x - x0|)
    const auto& e = prob.exponents();
    double x0v[8] = {0};
    for (int d = 0; d < g.dim && d < static_cast<int>(x0.size()); ++d) x0v[d] = x0[d];
    // coefficient values at the lattice point nearest to x0/eps
    std::size_t x0_flat = 0;
    {
        std::size_t stride = 1;
        for (int d = 0; d < g.dim; ++d) {
            long j = std::llround((x0v[d] / eps + g.half_width) / g.spacing());
            j = ((j % n) + n) % n;
            x0_flat += stride * static_cast<std::size_t>(j);
            stride *= n;
        }
    }
    const double Qx0 = prob.Q().base[x0_flat];
    const double Px0 = prob.P().base[x0_flat];

    std::vector<double> psi_t(U.size()), phi_t(V.size());
    for (std::size_t flat = 0; flat < U.size(); ++flat) {
        std::size_t rem = flat;
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            const int j = static_cast<int>(rem % n);
            rem /= n;
            const double y = eps * g.coord(j) - x0v[d];
            r2 += y * y;
        }
        const double cut = eta_cut(std::sqrt(r2), cut_radius);
        psi_t[flat] = std::pow(Qx0 / prob.Q().base[flat], 1.0 / e.q) * cut * U[flat];
        phi_t[flat] = std::pow(Px0 / prob.P().base[flat], 1.0 / e.p) * cut * V[flat];
    }
    DualPair z = lift(prob, ScalarField(g, std::move(psi_t)), ScalarField(g, std::move(phi_t)));
    NehariProjection proj = nehari_project(prob, z);
    return energy(prob, proj.state);
}

} // namespace helmdual
