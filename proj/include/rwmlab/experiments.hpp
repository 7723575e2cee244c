#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "rwmlab/target_model.hpp"

namespace rwmlab {

// Thrown for any configuration problem; `field` names the offending entry.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_, const std::string& what_)
        : std::runtime_error(field_ + ": " + what_), field(std::move(field_)) {}
};

struct CliOverrides {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

// Parses and fully validates the JSON config at `config_path`, then runs the
// requested experiment, writing CSV/JSON artifacts plus manifest.json into
// the output directory. Returns the process exit code:
//   0 ok, 1 configuration error, 2 numeric failure during execution.
int run_experiment(const std::string& config_path, const CliOverrides& overrides,
                   std::ostream& out, std::ostream& err);

// Parses and validates only; prints the resolved plan (model, ell grid,
// sample budgets). Exit 0 iff the config is runnable.
int validate_experiment(const std::string& config_path, const CliOverrides& overrides,
                        std::ostream& out, std::ostream& err);

}  // namespace rwmlab
