#include "helmdual/cli.hpp"
#include "helmdual/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using helmdual::cli::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"helmdual: dual-variational spectral solver for nonlinear Helmholtz systems "
                 "of Hamiltonian type on periodic boxes"};
    app.set_version_flag("--version", helmdual::version_string());
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    int threads = 0;
    bool quick = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--output", output_dir, "output directory (overrides config)");
        sub->add_option("--threads", threads, "worker threads (overrides config and HDUAL_THREADS)");
    };
    CLI::App* solve = app.add_subcommand("solve", "single ground-state solve with cross-check");
    add_common(solve);
    CLI::App* sweep = app.add_subcommand("sweep", "eps-sweep concentration experiment");
    add_common(sweep);
    CLI::App* self = app.add_subcommand("selftest", "run the invariant battery");
    self->add_flag("--quick", quick, "smaller grids");

    CLI11_PARSE(app, argc, argv);

    if (self->parsed())
        return helmdual::cli::selftest(std::cout, quick) ? 0 : 2;

    RunConfig cfg;
    try {
        cfg = helmdual::cli::parse_config(config_path);
    } catch (const helmdual::Error& e) {
        std::cout << "config error: " << e.what() << "\n";
        return 1;
    }
    if (solve->parsed() && cfg.mode != RunConfig::Mode::Solve) {
        std::cout << "config error: subcommand 'solve' requires mode \"solve\"\n";
        return 1;
    }
    if (sweep->parsed() && cfg.mode != RunConfig::Mode::Sweep) {
        std::cout << "config error: subcommand 'sweep' requires mode \"sweep\"\n";
        return 1;
    }

    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (threads > 0) {
        cfg.threads = threads;
    } else if (const char* env = std::getenv("HDUAL_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) cfg.threads = t;
    }
    try {
        return helmdual::cli::run_config(cfg, std::cout);
    } catch (const helmdual::Error& e) {
        std::cout << "error: " << e.what() << "\n";
        return 1;
    }
}
