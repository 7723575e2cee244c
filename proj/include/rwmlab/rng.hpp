#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rwmlab {

using Rng = std::mt19937_64;

// Counter-based seeding: a (seed, stream) pair always yields the same
// generator, independent of which thread runs the task.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{seed, stream, std::uint64_t{0x9e3779b97f4a7c15ULL}};
    return Rng(seq);
}

// Stateless Box-Muller: exactly two uniforms per draw, so the stream
// position after a draw does not depend on hidden distribution state.
inline double draw_normal(Rng& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double u1 = dist(rng);
    while (u1 <= 0.0) u1 = dist(rng);
    const double u2 = dist(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Uniform on (0, 1]; zero is excluded so log(u) is always finite.
inline double draw_uniform_pos(Rng& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double u = dist(rng);
    while (u <= 0.0) u = dist(rng);
    return u;
}

}  // namespace rwmlab
