#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rwmlab/target_model.hpp"

namespace rwmlab {

// Proposal sd per coordinate: sigma_d^2 = ell^2 / (d - 1).
double proposal_sigma(double ell, int d);

struct ChainState {
    Vec x;
    double log_pi = 0.0;
};

ChainState make_state(const TargetModel& target, Vec x);

struct StepResult {
    bool accepted = false;
    double jump_sq = 0.0;
};

// One RWM transition: Y = x + sigma_d Z, accepted iff log u < dlog.
// A -inf proposal log-density is an automatic rejection.
StepResult step(ChainState& state, const TargetModel& target, double ell, Rng& rng);

struct RecordFlags {
    bool first_coord = false;
    int thin = 0;  // 0 disables state recording
};

struct ChainTrace {
    long accept_count = 0;
    long step_count = 0;
    double sum_jump_sq = 0.0;
    std::vector<double> first_coord_path;  // length step_count + 1 when enabled
    std::vector<Vec> thinned_states;
    std::uint64_t seed = 0;

    double acceptance_rate() const {
        return step_count > 0 ? static_cast<double>(accept_count) / step_count : 0.0;
    }
    double mean_jump_sq() const { return step_count > 0 ? sum_jump_sq / step_count : 0.0; }
};

struct InitSpec {
    enum class Kind { stationary, point } kind = Kind::stationary;
    Vec x;  // used when kind == point

    static InitSpec stationary() { return {}; }
    static InitSpec at(Vec x) { return {Kind::point, std::move(x)}; }
};

// Runs n_iter kernel steps; deterministic given the rng state.
ChainTrace run_chain(const TargetModel& target, double ell, long n_iter, const InitSpec& init,
                     const RecordFlags& record, Rng& rng);

}  // namespace rwmlab
