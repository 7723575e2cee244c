#include "rwmlab/rwm_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace rwmlab {

double proposal_sigma(double ell, int d) {
    if (ell <= 0.0) throw std::invalid_argument("proposal_sigma: ell must be positive");
    if (d < 2) throw std::invalid_argument("proposal_sigma: d >= 2 required");
    return ell / std::sqrt(static_cast<double>(d - 1));
}

ChainState make_state(const TargetModel& target, Vec x) {
    ChainState s{std::move(x), 0.0};
    s.log_pi = target.log_density(s.x);
    return s;
}

StepResult step(ChainState& state, const TargetModel& target, double ell, Rng& rng) {
    const int d = target.dim;
    const double sigma = proposal_sigma(ell, d);

    Vec y(d);
    double jump_sq = 0.0;
    for (int i = 0; i < d; ++i) {
        const double dz = sigma * draw_normal(rng);
        y[i] = state.x[i] + dz;
        jump_sq += dz * dz;
    }
    const double log_pi_y = target.log_density(y);
    const double dlog = log_pi_y - state.log_pi;

    // log u < dlog with u in (0,1]; no overflow however large |dlog| is.
    const double log_u = std::log(draw_uniform_pos(rng));
    if (std::isfinite(log_pi_y) && log_u < dlog) {
        state.x = std::move(y);
        state.log_pi = log_pi_y;
        return {true, jump_sq};
    }
    return {false, 0.0};
}

ChainTrace run_chain(const TargetModel& target, double ell, long n_iter, const InitSpec& init,
                     const RecordFlags& record, Rng& rng) {
    if (n_iter < 1) throw std::invalid_argument("run_chain: n_iter >= 1 required");

    ChainState state;
    if (init.kind == InitSpec::Kind::stationary) {
        auto sampler = target.make_stationary_sampler();
        state = make_state(target, sampler(rng));
    } else {
        if (static_cast<int>(init.x.size()) != target.dim)
            throw std::invalid_argument("run_chain: init point has wrong dimension");
        state = make_state(target, init.x);
    }
    if (!std::isfinite(state.log_pi))
        throw std::invalid_argument("run_chain: init point has log-density -inf");

    ChainTrace trace;
    if (record.first_coord) {
        trace.first_coord_path.reserve(n_iter + 1);
        trace.first_coord_path.push_back(state.x[0]);
    }
    if (record.thin > 0) trace.thinned_states.push_back(state.x);

    for (long t = 0; t < n_iter; ++t) {
        const StepResult r = step(state, target, ell, rng);
        ++trace.step_count;
        if (r.accepted) ++trace.accept_count;
        trace.sum_jump_sq += r.jump_sq;
        if (record.first_coord) trace.first_coord_path.push_back(state.x[0]);
        if (record.thin > 0 && (t + 1) % record.thin == 0)
            trace.thinned_states.push_back(state.x);
    }
    return trace;
}

}  // namespace rwmlab
