#pragma once

#include <cstdint>
#include <vector>

#include "rwmlab/target_model.hpp"

namespace rwmlab {

struct HierGaussHyper {
    double V = 1.0, W = 1.0;  // observation / group variances
    double a = 2.0, b = 1.0;  // inverse-gamma prior on A
};

// Observed n x n grid Y plus hyperparameters (the latter only used by the
// realistic model).
struct HierGaussData {
    int n = 0;
    std::vector<double> Y;  // row-major, Y[i*n + j]
    HierGaussHyper hyper;

    double y(int i, int j) const { return Y[static_cast<std::size_t>(i) * n + j]; }
};

// Fixed coordinate layout shared by every module: nu first, then (for the
// realistic model) A, then mu_1..mu_n, then theta in row-major order.
struct HierLayout {
    int n = 0;
    bool has_A = false;
    int dim() const { return n * n + n + 1 + (has_A ? 1 : 0); }
    int nu() const { return 0; }
    int A() const { return 1; }
    int mu(int j) const { return (has_A ? 2 : 1) + j; }
    int theta(int i, int j) const { return (has_A ? 2 : 1) + n + i * n + j; }
};

// Y_ij = c everywhere.
HierGaussData synth_data_constant(int n, double c);

// Forward-simulate the unit-variance hierarchy (nu fixed at 0, its prior is
// flat): mu_j ~ N(0,1), theta_ij ~ N(mu_j,1), Y_ij ~ N(theta_ij,1).
// Deterministic under a fixed seed.
HierGaussData synth_data_from_model(int n, std::uint64_t seed);

// Posterior of the all-Gaussian hierarchy (unit variances, flat prior on nu);
// exact conditionals drive the Gibbs-based stationary sampler.
TargetModel build_hier_gauss(const HierGaussData& data);

// Variant with variances V, W, random group-level variance A ~ IG(a,b),
// coordinate layout (nu, A, mu, theta). log-density is -inf for A <= 0.
TargetModel build_hier_gauss_realistic(const HierGaussData& data);

}  // namespace rwmlab
