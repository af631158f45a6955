#include <CLI11.hpp>
#include <iostream>

#include "nsk/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nsklab: viscous-dispersive shock laboratory for the 1-D "
                 "Navier-Stokes-Korteweg system"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    long long seed = -1;
    int threads = 0;

    for (const char* name :
         {"endstates", "profile", "simulate", "contraction", "npi", "limit", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "path to a key = value config file")
            ->required();
        sub->add_option("--out", out_dir, "output directory (default: out)");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--threads", threads, "override the config worker count");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        nsk::RunConfig cfg = nsk::parse_config_file(config_path);
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (threads > 0) cfg.threads = threads;
        for (const auto& warnline : cfg.warnings) {
            std::cerr << "warning: " << warnline << "\n";
        }
        nsk::run_subcommand(sub, cfg, out_dir);
    } catch (const nsk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nsk::ConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 4;
    } catch (const nsk::DomainError& e) {
        std::cerr << "numerics error: " << e.what() << "\n";
        return 3;
    } catch (const nsk::NumericsError& e) {
        std::cerr << "numerics error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
