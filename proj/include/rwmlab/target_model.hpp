#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rwmlab/rng.hpp"

namespace rwmlab {

using Vec = std::vector<double>;

enum class DerivativeMode { analytic, finite_difference };

// One potential of the factor-graph representation: the set of coordinate
// indices its log-potential couples.
struct Factor {
    std::vector<int> coords;
};

// A d-dimensional unnormalized log-density with derivative access, an
// exact-stationarity sampler, and the coordinate dependence structure.
//
// All callables are pure with respect to the model: safe to invoke from many
// threads. Samplers are stateful (they may carry a Gibbs chain), so each
// consumer asks for its own via make_stationary_sampler().
struct TargetModel {
    int dim = 0;
    std::string name;

    std::function<double(const Vec&)> log_density;
    std::function<Vec(const Vec&)> grad;
    std::function<double(const Vec&, int, int)> partial2;
    std::function<double(const Vec&, int, int, int)> partial3;

    // neighborhoods(i) = H_i, sorted, always containing i.
    std::function<std::vector<int>(int)> neighborhoods;

    // Factory for an exact (or exact-in-practice Gibbs) stationary sampler.
    std::function<std::function<Vec(Rng&)>()> make_stationary_sampler;

    // d/dx1 of log pi~ for the first coordinate, when the target has an
    // (asymptotically) independent first coordinate. Empty otherwise.
    std::function<double(double)> first_coord_score;

    // Factor list when the model was built from a known graph structure.
    std::vector<Factor> factors;

    DerivativeMode grad_mode = DerivativeMode::analytic;
    DerivativeMode partial2_mode = DerivativeMode::analytic;
    DerivativeMode partial3_mode = DerivativeMode::analytic;

    // Max neighborhood size l_d.
    int max_neighborhood() const;
};

// Roughness I_d(x) = (1/d) * sum_i (d log pi / dx_i)^2.
// Throws std::domain_error naming the first offending coordinate if the
// gradient is not finite.
double roughness(const TargetModel& target, const Vec& x);

// Central finite differences, step h = 1e-4 * (1 + |x_i|) for order 1 and
// cube-root-scaled steps for orders 2 and 3.
double fd_grad(const std::function<double(const Vec&)>& f, Vec x, int i);
double fd_partial2(const std::function<double(const Vec&)>& f, Vec x, int i, int j);
double fd_partial3(const std::function<double(const Vec&)>& f, Vec x, int i, int j, int k);

// Fill in missing derivative members by finite differences of log_density.
void install_fd_derivatives(TargetModel& target);

}  // namespace rwmlab
