#include "helmdual/cli.hpp"
#include "helmdual/io.hpp"
#include "helmdual/kernel.hpp"
#include "helmdual/numeric.hpp"
#include "helmdual/version.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

namespace helmdual::cli {

using json = nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
    if (!j.is_object())
        throw ConfigError("config: " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    for (const auto& k : required)
        if (!j.contains(k))
            throw ConfigError("config: missing key '" + k + "' in " + where);
}

CoefficientSpec parse_coefficient(const json& j, const std::string& where) {
    require_keys(j, where, {"type", "value", "floor", "gaussians"}, {"type"});
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") {
        require_keys(j, where, {"type", "value"}, {"type", "value"});
        return CoefficientSpec::constant(j.at("value").get<double>());
    }
    if (type == "floor_plus_gaussians") {
        require_keys(j, where, {"type", "floor", "gaussians"}, {"type", "floor", "gaussians"});
        std::vector<GaussianBump> bumps;
        for (const auto& b : j.at("gaussians")) {
            require_keys(b, where + ".gaussians[]", {"amplitude", "center", "sigma"},
                         {"amplitude", "center", "sigma"});
            GaussianBump g;
            g.amplitude = b.at("amplitude").get<double>();
            g.sigma = b.at("sigma").get<double>();
            g.center = b.at("center").get<std::vector<double>>();
            bumps.push_back(std::move(g));
        }
        return CoefficientSpec::floor_plus_gaussians(j.at("floor").get<double>(), std::move(bumps));
    }
    throw ConfigError("config: unknown coefficient type '" + type + "' in " + where);
}

SolverConfig parse_solver(const json& j, std::uint64_t seed) {
    SolverConfig sc;
    sc.initial.rng_seed = seed;
    if (j.is_null()) return sc;
    require_keys(j, "solver",
                 {"algorithm", "max_iters", "tol_residual", "armijo", "initial", "sweep_phi_first"},
                 {});
    if (j.contains("algorithm")) {
        const std::string a = j.at("algorithm").get<std::string>();
        if (a == "projected_gradient") sc.algorithm = Algorithm::ProjectedGradient;
        else if (a == "fixed_point") sc.algorithm = Algorithm::FixedPoint;
        else throw ConfigError("config: unknown algorithm '" + a + "'");
    }
    if (j.contains("max_iters")) sc.max_iters = j.at("max_iters").get<int>();
    if (j.contains("tol_residual")) sc.tol_residual = j.at("tol_residual").get<double>();
    if (j.contains("sweep_phi_first")) sc.sweep_phi_first = j.at("sweep_phi_first").get<bool>();
    if (j.contains("armijo")) {
        require_keys(j.at("armijo"), "solver.armijo", {"shrink", "slope"}, {});
        if (j.at("armijo").contains("shrink")) sc.armijo.shrink = j.at("armijo").at("shrink").get<double>();
        if (j.at("armijo").contains("slope")) sc.armijo.slope = j.at("armijo").at("slope").get<double>();
    }
    if (j.contains("initial")) {
        const json& init = j.at("initial");
        require_keys(init, "solver.initial",
                     {"kind", "annulus_center", "annulus_width", "center_offset"}, {"kind"});
        const std::string k = init.at("kind").get<std::string>();
        if (k == "wave_packet") sc.initial.kind = SeedSpec::Kind::WavePacket;
        else if (k == "random") sc.initial.kind = SeedSpec::Kind::Random;
        else throw ConfigError("config: unknown seed kind '" + k + "'");
        if (init.contains("annulus_center"))
            sc.initial.annulus_center = init.at("annulus_center").get<double>();
        if (init.contains("annulus_width"))
            sc.initial.annulus_width = init.at("annulus_width").get<double>();
        if (init.contains("center_offset"))
            sc.initial.center_offset = init.at("center_offset").get<std::vector<long>>();
    }
    if (sc.max_iters < 1 || !(sc.tol_residual > 0.0))
        throw ConfigError("config: solver.max_iters must be >= 1 and tol_residual > 0");
    return sc;
}

} // namespace

RunConfig parse_config_json(const json& j) {
    require_keys(j, "top level",
                 {"schema_version", "mode", "dimension", "exponents", "grid", "resolvent",
                  "coefficients", "solver", "sweep", "output_dir", "seed", "threads"},
                 {"schema_version", "mode"});
    if (j.at("schema_version").get<int>() != 1)
        throw ConfigError("config: unsupported schema_version (expected 1)");

    RunConfig cfg;
    cfg.echo = j;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "solve") cfg.mode = RunConfig::Mode::Solve;
    else if (mode == "sweep") cfg.mode = RunConfig::Mode::Sweep;
    else if (mode == "selftest") cfg.mode = RunConfig::Mode::Selftest;
    else throw ConfigError("config: unknown mode '" + mode + "'");

    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();

    if (cfg.mode == RunConfig::Mode::Selftest) return cfg;

    for (const char* k : {"dimension", "exponents", "grid", "coefficients"})
        if (!j.contains(k))
            throw ConfigError(std::string("config: missing key '") + k + "' for mode " + mode);

    cfg.dimension = j.at("dimension").get<int>();
    require_keys(j.at("exponents"), "exponents", {"p", "q"}, {"p", "q"});
    cfg.p = j.at("exponents").at("p").get<double>();
    cfg.q = j.at("exponents").at("q").get<double>();
    try {
        check_admissible(cfg.dimension, cfg.p, cfg.q);
    } catch (const RegionViolation& rv) {
        throw ConfigError(std::string("config: inadmissible exponents (") + rv.code + "): " +
                          rv.what());
    }

    const json& gj = j.at("grid");
    require_keys(gj, "grid", {"half_width", "half_width_pi", "samples"}, {"samples"});
    double L = 0.0;
    if (gj.contains("half_width_pi")) L = gj.at("half_width_pi").get<double>() * kPi;
    else if (gj.contains("half_width")) L = gj.at("half_width").get<double>();
    else throw ConfigError("config: grid needs half_width or half_width_pi");
    cfg.grid = make_grid(cfg.dimension, L, gj.at("samples").get<int>());

    if (j.contains("resolvent")) {
        require_keys(j.at("resolvent"), "resolvent", {"delta"}, {});
        if (j.at("resolvent").contains("delta")) {
            const json& dj = j.at("resolvent").at("delta");
            if (dj.is_string()) {
                if (dj.get<std::string>() != "default")
                    throw ConfigError("config: resolvent.delta must be a number or \"default\"");
            } else {
                cfg.delta = dj.get<double>();
            }
        }
    }

    require_keys(j.at("coefficients"), "coefficients", {"P", "Q"}, {"P", "Q"});
    cfg.P = parse_coefficient(j.at("coefficients").at("P"), "coefficients.P");
    cfg.Q = parse_coefficient(j.at("coefficients").at("Q"), "coefficients.Q");

    cfg.solver = parse_solver(j.contains("solver") ? j.at("solver") : json(), cfg.seed);

    if (cfg.mode == RunConfig::Mode::Sweep) {
        if (!j.contains("sweep"))
            throw ConfigError("config: sweep mode requires a sweep section");
        const json& sj = j.at("sweep");
        require_keys(sj, "sweep", {"eps_list", "rho", "multistart"}, {"eps_list", "rho"});
        cfg.eps_list = sj.at("eps_list").get<std::vector<double>>();
        cfg.rho = sj.at("rho").get<double>();
        if (sj.contains("multistart")) cfg.multistart = sj.at("multistart").get<int>();
        if (cfg.multistart < 1)
            throw ConfigError("config: sweep.multistart must be >= 1");
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f)
        throw ConfigError("config: cannot open " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    return parse_config_json(j);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

json solution_scalars(const Solution& s) {
    return json{{"energy", s.energy},
                {"iterations", s.iterations},
                {"converged", s.converged},
                {"residual", s.residual},
                {"algorithm", algorithm_name(s.algorithm)},
                {"nehari_A", s.state.A},
                {"nehari_B", s.state.B},
                {"nehari_C", s.state.C},
                {"primal_residual_u", s.primal.residual_u},
                {"primal_residual_v", s.primal.residual_v},
                {"primal_rel_residual_u", s.primal.rel_residual_u},
                {"primal_rel_residual_v", s.primal.rel_residual_v}};
}

json file_entry(const std::filesystem::path& p) {
    return json{{"path", p.filename().string()},
                {"bytes", std::filesystem::file_size(p)},
                {"sha256", io::sha256_file(p)}};
}

int run_solve(const RunConfig& cfg, std::ostream& out) {
    const auto t0 = Clock::now();
    const double delta = cfg.delta > 0.0 ? cfg.delta : default_delta(cfg.grid);
    auto plan = std::make_shared<const ResolventPlan>(cfg.grid, delta);
    AdmissibleExponents exps = check_admissible(cfg.dimension, cfg.p, cfg.q);
    DualProblem prob(exps, make_coefficient(cfg.P, cfg.grid), make_coefficient(cfg.Q, cfg.grid),
                     plan);
    const double t_setup = seconds_since(t0);

    // run the configured algorithm and its counterpart (cross-validation)
    const auto t1 = Clock::now();
    Solution main = solve_ground_state(prob, cfg.solver);
    SolverConfig other_cfg = cfg.solver;
    other_cfg.algorithm = cfg.solver.algorithm == Algorithm::FixedPoint
                              ? Algorithm::ProjectedGradient
                              : Algorithm::FixedPoint;
    Solution other = solve_ground_state(prob, other_cfg);
    const double t_solve = seconds_since(t1);

    std::filesystem::create_directories(cfg.output_dir);
    std::vector<std::filesystem::path> files;
    auto dump = [&](const ScalarField& f, const std::string& name, const std::string& role) {
        const auto p = cfg.output_dir / name;
        io::dump_field(f, p, role);
        files.push_back(p);
        files.push_back(p.string() + ".json");
    };
    dump(main.state.psi, "psi.f64", "dual_psi");
    dump(main.state.phi, "phi.f64", "dual_phi");
    dump(main.primal.u, "u.f64", "primal_u");
    dump(main.primal.v, "v.f64", "primal_v");

    const double agree = std::abs(main.energy - other.energy) /
                         std::max(std::abs(main.energy), 1e-300);
    json results{{"solution", solution_scalars(main)},
                 {"cross_check", solution_scalars(other)},
                 {"cross_energy_rel_diff", agree},
                 {"delta", delta},
                 {"min_nonzero_offset", plan->min_nonzero_offset},
                 {"on_sphere_mode_count", plan->on_sphere_count}};

    json manifest{{"schema_version", 1},
                  {"config", cfg.echo},
                  {"library_version", version_string()},
                  {"timings", json{{"setup_s", t_setup}, {"solve_s", t_solve}}},
                  {"results", results}};
    json inv = json::array();
    for (const auto& p : files) inv.push_back(file_entry(p));
    manifest["files"] = inv;
    io::write_json_atomic(manifest, cfg.output_dir / "manifest.json");

    out << "solve: energy " << main.energy << " (" << algorithm_name(main.algorithm) << ", "
        << main.iterations << " iters, converged=" << main.converged << "), cross-check "
        << other.energy << " rel diff " << agree << "\n";
    return main.converged && other.converged ? 0 : 2;
}

int run_sweep_mode(const RunConfig& cfg, std::ostream& out) {
    const auto t0 = Clock::now();
    SweepConfig sc;
    sc.eps_list = cfg.eps_list;
    sc.P = cfg.P;
    sc.Q = cfg.Q;
    sc.rho = cfg.rho;
    sc.grid = cfg.grid;
    sc.delta = cfg.delta;
    sc.exponents = check_admissible(cfg.dimension, cfg.p, cfg.q);
    sc.solver = cfg.solver;
    sc.multistart = cfg.multistart;
    sc.threads = cfg.threads;

    ConcentrationReport rep = run_sweep(sc);
    const double t_sweep = seconds_since(t0);

    std::filesystem::create_directories(cfg.output_dir);
    std::vector<std::filesystem::path> files;
    auto add = [&](const std::filesystem::path& p) { files.push_back(p); };

    io::write_sweep_summary(rep, cfg.output_dir / "sweep_summary.csv");
    add(cfg.output_dir / "sweep_summary.csv");
    emit_plot_data(rep, cfg.output_dir);
    add(cfg.output_dir / "energy_vs_eps.csv");
    add(cfg.output_dir / "barycenter_vs_eps.csv");
    add(cfg.output_dir / "radial_profile.csv");
    if (rep.finest) {
        io::dump_field(rep.finest->primal.u, cfg.output_dir / "u_finest.f64", "primal_u");
        add(cfg.output_dir / "u_finest.f64");
        add(cfg.output_dir / "u_finest.f64.json");
    }
    if (rep.limit && rep.limit->converged) {
        io::dump_field(rep.limit->primal.u, cfg.output_dir / "u_limit.f64", "primal_u_limit");
        add(cfg.output_dir / "u_limit.f64");
        add(cfg.output_dir / "u_limit.f64.json");
    }

    json entries = json::array();
    bool all_conv = rep.limit_converged;
    for (const auto& r : rep.entries) {
        all_conv = all_conv && r.converged;
        entries.push_back(json{{"eps", r.eps},
                               {"c_eps", r.c_eps},
                               {"barycenter_psi", r.barycenter_psi},
                               {"barycenter_phi", r.barycenter_phi},
                               {"profile_distance_u", r.profile_distance_u},
                               {"profile_distance_v", r.profile_distance_v},
                               {"iterations", r.iterations},
                               {"converged", r.converged},
                               {"distinct_solutions", r.distinct_solutions}});
    }
    json results{{"c_M", rep.c_M},
                 {"limit_converged", rep.limit_converged},
                 {"common_max", rep.common_max},
                 {"entries", entries}};

    json manifest{{"schema_version", 1},
                  {"config", cfg.echo},
                  {"library_version", version_string()},
                  {"timings", json{{"sweep_s", t_sweep}}},
                  {"results", results}};
    json inv = json::array();
    for (const auto& p : files) inv.push_back(file_entry(p));
    manifest["files"] = inv;
    io::write_json_atomic(manifest, cfg.output_dir / "manifest.json");

    out << "sweep: c_M " << rep.c_M << ", " << rep.entries.size() << " entries";
    if (!rep.common_max) out << " [no-common-max]";
    out << "\n";
    for (const auto& r : rep.entries)
        out << "  eps " << r.eps << ": c_eps " << r.c_eps << " converged=" << r.converged << "\n";
    return all_conv ? 0 : 2;
}

} // namespace

void emit_plot_data(const ConcentrationReport& rep, const std::filesystem::path& output_dir) {
    std::filesystem::create_directories(output_dir);
    io::write_energy_csv(rep, output_dir / "energy_vs_eps.csv");
    io::write_barycenter_csv(rep, output_dir / "barycenter_vs_eps.csv");
    io::write_radial_profile_csv(rep, output_dir / "radial_profile.csv");
}

int run_config(const RunConfig& cfg, std::ostream& out) {
    switch (cfg.mode) {
        case RunConfig::Mode::Solve:
            return run_solve(cfg, out);
        case RunConfig::Mode::Sweep:
            return run_sweep_mode(cfg, out);
        case RunConfig::Mode::Selftest:
            return selftest(out, false) ? 0 : 2;
    }
    return 1;
}

int run(const std::filesystem::path& config_path, std::ostream& out,
        std::optional<std::filesystem::path> output_override, std::optional<int> threads_override) {
    RunConfig cfg;
    try {
        cfg = parse_config(config_path);
    } catch (const Error& e) {
        out << "config error: " << e.what() << "\n";
        return 1;
    }
    if (output_override) cfg.output_dir = *output_override;
    if (threads_override) cfg.threads = *threads_override;
    try {
        return run_config(cfg, out);
    } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace helmdual::cli
