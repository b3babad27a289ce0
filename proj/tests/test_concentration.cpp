#include "helmdual/concentration.hpp"
#include "helmdual/numeric.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace helmdual;
using oracles::kPi;

TEST_SUITE_BEGIN("concentration");

namespace {

struct Fixture {
    Grid grid = make_grid(3, 8.0 * kPi, 32);
    double delta = 1e-5;
    std::shared_ptr<const ResolventPlan> plan =
        std::make_shared<const ResolventPlan>(grid, delta);
    AdmissibleExponents exps = check_admissible(3, 5.0, 5.0);
    DualProblem prob{exps, make_coefficient(CoefficientSpec::constant(1.0), grid),
                     make_coefficient(CoefficientSpec::constant(1.0), grid), plan};

    SolverConfig solver() const {
        SolverConfig cfg;
        cfg.algorithm = Algorithm::FixedPoint;
        cfg.max_iters = 300;
        cfg.tol_residual = 1e-10;
        return cfg;
    }
};

} // namespace

TEST_CASE("barycenter of symmetric and displaced bumps") {
    Fixture fx;
    // centered even profile -> zero barycenter
    ScalarField even = oracles::radial_field(fx.grid, [](double r) { return std::exp(-r * r); });
    DualPair z = lift(fx.prob, even, even);
    Barycenters b = barycenter(fx.prob, z, 0.5, 5.0);
    for (int d = 0; d < 3; ++d) {
        CHECK(std::abs(b.psi[d]) <= 1e-10);
        CHECK(std::abs(b.phi[d]) <= 1e-10);
    }

    // bump centered at a lattice point x_c: beta = eps * x_c within 2h*eps
    const double eps = 0.25;
    std::vector<long> cells{3, -2, 1};
    ScalarField moved = shift(even, cells);
    DualPair zm = lift(fx.prob, moved, moved);
    Barycenters bm = barycenter(fx.prob, zm, eps, 5.0);
    const double h = fx.grid.spacing();
    for (int d = 0; d < 3; ++d)
        CHECK(std::abs(bm.psi[d] - eps * cells[d] * h) <= 2.0 * h * eps);

    // chi truncation bounds every component by rho
    Barycenters btr = barycenter(fx.prob, zm, eps, 0.3);
    for (int d = 0; d < 3; ++d) CHECK(std::abs(btr.psi[d]) <= 0.3 + 1e-12);

    DualPair zero = lift(fx.prob, constant_field(fx.grid, 0.0), constant_field(fx.grid, 0.0));
    CHECK_THROWS_AS(barycenter(fx.prob, zero, eps, 5.0), ZeroState);
}

TEST_CASE("barycenter equivariance under lattice shifts") {
    Fixture fx;
    ScalarField bump = oracles::radial_field(fx.grid, [](double r) { return std::exp(-r * r); });
    DualPair z0 = lift(fx.prob, bump, bump);
    const double eps = 0.125;
    std::vector<long> cells{2, 5, -4};
    DualPair z1 = lift(fx.prob, shift(bump, cells), shift(bump, cells));
    Barycenters a = barycenter(fx.prob, z0, eps, 6.0);
    Barycenters b = barycenter(fx.prob, z1, eps, 6.0);
    const double h = fx.grid.spacing();
    for (int d = 0; d < 3; ++d)
        CHECK(std::abs(b.psi[d] - (a.psi[d] + eps * cells[d] * h)) <= 2.0 * h * eps);
}

TEST_CASE("frame scaling map: amplitude, lattice, round trip") {
    Fixture fx;
    Rng rng(23);
    ScalarField u = oracles::random_trig(fx.grid, rng);

    ScalarField id = frame_scaling_map(u, 1.0, fx.exps);
    for (std::size_t i = 0; i < u.size(); i += 61) CHECK(id[i] == u[i]);

    const double k = 2.0;
    ScalarField mapped = frame_scaling_map(u, k, fx.exps);
    // -beta1 = 2/3 at p = q = 5: amplitude factor 2^{2/3}
    CHECK(mapped[100] == doctest::Approx(std::pow(2.0, 2.0 / 3.0) * u[100]).epsilon(1e-12));
    CHECK(mapped.grid().half_width == doctest::Approx(fx.grid.half_width / k));

    ScalarField back = frame_scaling_map(mapped, k, fx.exps, false, true);
    CHECK(back.grid().half_width == doctest::Approx(fx.grid.half_width));
    for (std::size_t i = 0; i < u.size(); i += 61)
        CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("align_and_compare: limit against itself and its shift") {
    Fixture fx;
    Solution limit = limit_ground_energy(1.0, 1.0, fx.exps, fx.grid, fx.plan, fx.solver());
    REQUIRE(limit.converged);
    auto [du, dv] = align_and_compare(fx.prob, limit, limit, 0.5, fx.exps, 5.0);
    CHECK(du <= 1e-12);
    CHECK(dv <= 1e-12);

    // shifted copy aligns back to zero distance
    Solution moved = limit;
    std::vector<long> cells{3, 0, -2};
    moved.state.psi = shift(limit.state.psi, cells);
    moved.state.phi = shift(limit.state.phi, cells);
    moved.state.K_qp_phi = shift(limit.state.K_qp_phi, cells);
    moved.primal.u = shift(limit.primal.u, cells);
    moved.primal.v = shift(limit.primal.v, cells);
    auto [du2, dv2] = align_and_compare(fx.prob, moved, limit, 0.5, fx.exps, 8.0);
    CHECK(du2 <= 1e-10);
    CHECK(dv2 <= 1e-10);

    Solution bad = limit;
    bad.converged = false;
    CHECK_THROWS_AS(align_and_compare(fx.prob, bad, limit, 0.5, fx.exps, 5.0), NotConverged);
}

TEST_CASE("constant-coefficient sweep: every eps reproduces the limit") {
    Fixture fx;
    SweepConfig sc;
    sc.eps_list = {1.0, 0.5};
    sc.P = CoefficientSpec::constant(1.0);
    sc.Q = CoefficientSpec::constant(1.0);
    sc.rho = 5.0;
    sc.grid = fx.grid;
    sc.delta = fx.delta;
    sc.exponents = fx.exps;
    sc.solver = fx.solver();
    ConcentrationReport rep = run_sweep(sc);
    REQUIRE(rep.limit_converged);
    for (const auto& r : rep.entries) {
        REQUIRE(r.converged);
        CHECK(std::abs(r.c_eps - rep.c_M) <= 1e-6 * std::abs(rep.c_M));
        CHECK(r.profile_distance_u <= 1e-4);
        CHECK(r.profile_distance_v <= 1e-4);
    }
}

TEST_CASE("gaussian benchmark sweep: monotonicity, comparison, concentration") {
    Fixture fx;
    SweepConfig sc;
    sc.eps_list = {1.0, 0.5, 0.25};
    sc.P = CoefficientSpec::floor_plus_gaussians(0.5, {{1.0, {0, 0, 0}, 1.0}});
    sc.Q = sc.P;
    sc.rho = 5.0;
    sc.grid = fx.grid;
    sc.delta = fx.delta;
    sc.exponents = fx.exps;
    sc.solver = fx.solver();
    ConcentrationReport rep = run_sweep(sc);
    REQUIRE(rep.limit_converged);
    CHECK(rep.common_max);

    const double h = fx.grid.spacing();
    double prev = 1e300;
    for (const auto& r : rep.entries) {
        REQUIRE(r.converged);
        CHECK(rep.c_M <= r.c_eps + 1e-6 * rep.c_M);      // limit lies below
        CHECK(r.c_eps <= prev + 1e-6 * std::abs(prev));  // decreasing along the sweep
        prev = r.c_eps;
    }
    const auto& finest = rep.entries.back();
    for (int d = 0; d < 3; ++d) {
        CHECK(std::abs(finest.barycenter_psi[d]) <= 2.0 * h);
        CHECK(std::abs(finest.barycenter_phi[d]) <= 2.0 * h);
    }
    CHECK(finest.profile_distance_u <= 0.05);
    CHECK(finest.profile_distance_v <= 0.05);
}

TEST_CASE("competing peaks: no common max is flagged and reported descriptively") {
    Fixture fx;
    SweepConfig sc;
    sc.eps_list = {0.5};
    // P peaked at +c, Q peaked at -c along axis 0
    sc.P = CoefficientSpec::floor_plus_gaussians(0.5, {{1.0, {2.0 * kPi, 0, 0}, 1.5}});
    sc.Q = CoefficientSpec::floor_plus_gaussians(0.5, {{1.0, {-2.0 * kPi, 0, 0}, 1.5}});
    sc.rho = 10.0;
    sc.grid = fx.grid;
    sc.delta = fx.delta;
    sc.exponents = fx.exps;
    sc.solver = fx.solver();
    ConcentrationReport rep = run_sweep(sc);
    CHECK(!rep.common_max);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].converged);
}

TEST_CASE("transplanted limit profile upper-bounds the ground energy") {
    Fixture fx;
    // gaussian benchmark at eps = 0.25
    const double eps = 0.25;
    CoefficientSpec spec = CoefficientSpec::floor_plus_gaussians(0.5, {{1.0, {0, 0, 0}, 1.0}});
    DualProblem prob(fx.exps, make_coefficient(spec, fx.grid, eps),
                     make_coefficient(spec, fx.grid, eps), fx.plan);
    Solution limit = limit_ground_energy(1.5, 1.5, fx.exps, fx.grid, fx.plan, fx.solver());
    REQUIRE(limit.converged);
    Solution ground = solve_ground_state(prob, fx.solver());
    REQUIRE(ground.converged);
    const double J_up = transplant_energy(prob, limit, eps, {0.0, 0.0, 0.0}, 6.0);
    CHECK(ground.energy <= J_up + 1e-9 * std::abs(J_up));
}

TEST_CASE("sweep config validation") {
    Fixture fx;
    SweepConfig sc;
    sc.P = CoefficientSpec::constant(1.0);
    sc.Q = sc.P;
    sc.grid = fx.grid;
    sc.exponents = fx.exps;
    sc.solver = fx.solver();
    sc.rho = 1.0;
    sc.eps_list = {};
    CHECK_THROWS_AS(run_sweep(sc), ConfigError);
    sc.eps_list = {0.5, 1.0};   // not decreasing
    CHECK_THROWS_AS(run_sweep(sc), ConfigError);
    sc.eps_list = {1.0, 0.5};
    sc.rho = 0.0;
    CHECK_THROWS_AS(run_sweep(sc), ConfigError);
}

TEST_SUITE_END();
