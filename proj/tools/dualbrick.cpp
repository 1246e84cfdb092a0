// dualbrick: run one experiment from a JSON config, or summarize saturated-state runs as a table.
//
// exit codes: 0 ok, 2 validation, 3 dimension guard, 4 numerical, 5 i/o, 1 anything else

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "dualbrick/errors.hpp"
#include "dualbrick/runner.hpp"

namespace {

int exit_code(dualbrick::ErrorKind k) {
    switch (k) {
        case dualbrick::ErrorKind::Validation: return 2;
        case dualbrick::ErrorKind::Guard: return 3;
        case dualbrick::ErrorKind::Numerical: return 4;
        case dualbrick::ErrorKind::Io: return 5;
    }
    return 1;
}

const char* category(dualbrick::ErrorKind k) {
    switch (k) {
        case dualbrick::ErrorKind::Validation: return "validation";
        case dualbrick::ErrorKind::Guard: return "guard";
        case dualbrick::ErrorKind::Numerical: return "numerical";
        case dualbrick::ErrorKind::Io: return "io";
    }
    return "error";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-unitary brickwork circuit experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
    std::string config;
    long long seed = -1;
    int workers = 0;
    std::string out;
    run->add_option("config", config, "config file")->required();
    run->add_option("--seed", seed, "override the base seed")->check(CLI::NonNegativeNumber);
    run->add_option("--workers", workers, "override the worker count")->check(CLI::PositiveNumber);
    run->add_option("--out", out, "override the output directory");

    auto* tab = app.add_subcommand("table1", "summarize saturated-state runs as a table");
    std::vector<std::string> runs;
    tab->add_option("runs", runs, "run directories or saturated.csv files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto cfg = dualbrick::load_config(config);
            if (seed >= 0) {
                cfg.seed = static_cast<std::uint64_t>(seed);
                cfg.raw["seed"] = seed;
            }
            if (workers > 0) cfg.workers = workers;
            if (!out.empty()) cfg.output = out;
            const auto sum = dualbrick::run_experiment(cfg);
            for (const auto& f : sum.files) std::cout << f << '\n';
        } else {
            const auto t = dualbrick::emit_table1(runs);
            std::cout << t.text;
            if (!t.missing.empty()) return 2;
        }
    } catch (const dualbrick::Error& e) {
        std::fprintf(stderr, "dualbrick: %s error: %s\n", category(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "dualbrick: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
