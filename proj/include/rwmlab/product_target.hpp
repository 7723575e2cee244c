#pragma once

#include <string>

#include "rwmlab/target_model.hpp"

namespace rwmlab {

enum class Density1D { standard_normal, logistic, scale_mixture };

struct DensitySpec {
    Density1D family = Density1D::standard_normal;
    // Mixture parameters (component sds and weight of the first component).
    double s1 = 1.0, s2 = 1.0, w = 0.5;

    // Accepts "standard-normal", "logistic", "scale-mixture(s1,s2,w)".
    // Throws std::invalid_argument for anything else.
    static DensitySpec parse(const std::string& text);
    std::string to_string() const;
};

// One-dimensional density with analytic log-derivatives up to order 3 and an
// exact sampler; the building block for product targets.
struct Density1DImpl {
    std::function<double(double)> log_f;
    std::function<double(double)> dlog;    // (log f)'
    std::function<double(double)> d2log;   // (log f)''
    std::function<double(double)> d3log;   // (log f)'''
    std::function<double(Rng&)> sample;
};
Density1DImpl make_density(const DensitySpec& spec);

// pi^d(x) = prod_i f(x_i); neighborhoods(i) = {i}; exact i.i.d. sampler.
TargetModel build_iid_product(const DensitySpec& spec, int d);

// Constant log-density toy: every proposal is accepted. The "stationary
// sampler" draws standard normals purely to give callers finite points.
TargetModel build_flat_target(int d);

// Standard normal product plus c * sum_{i<j} x_i x_j, with neighborhoods
// still declared as {i}: an adversarial target whose undeclared dense
// coupling the A1 audit must catch. Points come from the declared
// (incorrect) product sampler.
TargetModel build_dense_coupling_toy(int d, double c = 1.0);

}  // namespace rwmlab
