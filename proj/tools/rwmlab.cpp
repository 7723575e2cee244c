#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rwmlab/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Random-walk Metropolis scaling laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "JSON experiment config")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "seed override");
        sub->add_option("--threads", threads,
                        "worker threads (overrides config and RWMLAB_THREADS)");
    };
    CLI::App* run = app.add_subcommand("run", "execute an experiment");
    CLI::App* validate = app.add_subcommand("validate", "check a config without executing");
    add_common(run);
    add_common(validate);

    CLI11_PARSE(app, argc, argv);

    const rwmlab::CliOverrides overrides{out_dir, seed, threads};
    if (run->parsed())
        return rwmlab::run_experiment(config_path, overrides, std::cout, std::cerr);
    return rwmlab::validate_experiment(config_path, overrides, std::cout, std::cerr);
}
