#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wicklab/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"wicklab: operator certificates on truncated Fock spaces "
                 "over quasi-free states"};

    std::string config;
    wicklab::scenario::RunOptions opts;
    bool list = false;

    if (const char* env = std::getenv("WICKLAB_OUT")) opts.out_dir = env;
    if (const char* env = std::getenv("WICKLAB_WORKERS"))
        opts.workers = std::atoi(env);

    app.add_option("config", config,
                   "scenario config file or bundled scenario name; omit to "
                   "run the whole bundled suite");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--seed", opts.seed, "probe seed");
    app.add_option("--workers", opts.workers, "concurrent scenarios");
    app.add_flag("--strict", opts.strict, "treat warnings as failures");
    app.add_flag("--quiet", opts.quiet, "suppress per-certificate lines");
    app.add_flag("--list-scenarios", list, "list bundled scenarios and exit");

    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const auto& name : wicklab::scenario::bundled_names())
            std::cout << name << "\n";
        return 0;
    }

    return wicklab::scenario::run_cli(config, opts);
}
