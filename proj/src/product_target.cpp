#include "rwmlab/product_target.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rwmlab {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

// Gaussian density g(x) = phi(x/s)/s and its first three derivatives.
struct GaussComp {
    double s;
    double val(double x) const {
        return std::exp(-0.5 * x * x / (s * s)) / (2.5066282746310005024 * s);
    }
    double d1(double x) const { return -(x / (s * s)) * val(x); }
    double d2(double x) const { return (x * x / (s * s) - 1.0) / (s * s) * val(x); }
    double d3(double x) const {
        const double s2 = s * s;
        return (3.0 * x / (s2 * s2) - x * x * x / (s2 * s2 * s2)) * val(x);
    }
};

Density1DImpl make_standard_normal() {
    Density1DImpl d;
    d.log_f = [](double x) { return -0.5 * x * x - kLogSqrt2Pi; };
    d.dlog = [](double x) { return -x; };
    d.d2log = [](double) { return -1.0; };
    d.d3log = [](double) { return 0.0; };
    d.sample = [](Rng& rng) { return draw_normal(rng); };
    return d;
}

Density1DImpl make_logistic() {
    Density1DImpl d;
    // f(x) = e^{-x} / (1+e^{-x})^2
    d.log_f = [](double x) {
        const double ax = std::abs(x);
        return -ax - 2.0 * std::log1p(std::exp(-ax));
    };
    d.dlog = [](double x) { return -std::tanh(x / 2.0); };
    d.d2log = [](double x) {
        const double c = std::cosh(x / 2.0);
        return -0.5 / (c * c);
    };
    d.d3log = [](double x) {
        const double c = std::cosh(x / 2.0);
        return 0.5 * std::tanh(x / 2.0) / (c * c);
    };
    d.sample = [](Rng& rng) {
        const double u = draw_uniform_pos(rng);
        return std::log(u / (1.0 - u));
    };
    return d;
}

Density1DImpl make_scale_mixture(double s1, double s2, double w) {
    if (s1 <= 0.0 || s2 <= 0.0 || w < 0.0 || w > 1.0)
        throw std::invalid_argument("scale-mixture: need s1,s2 > 0 and w in [0,1]");
    const GaussComp a{s1}, b{s2};
    auto f0 = [a, b, w](double x) { return w * a.val(x) + (1.0 - w) * b.val(x); };
    auto f1 = [a, b, w](double x) { return w * a.d1(x) + (1.0 - w) * b.d1(x); };
    auto f2 = [a, b, w](double x) { return w * a.d2(x) + (1.0 - w) * b.d2(x); };
    auto f3 = [a, b, w](double x) { return w * a.d3(x) + (1.0 - w) * b.d3(x); };

    Density1DImpl d;
    d.log_f = [f0](double x) { return std::log(f0(x)); };
    d.dlog = [f0, f1](double x) { return f1(x) / f0(x); };
    d.d2log = [f0, f1, f2](double x) {
        const double r1 = f1(x) / f0(x);
        return f2(x) / f0(x) - r1 * r1;
    };
    d.d3log = [f0, f1, f2, f3](double x) {
        const double r1 = f1(x) / f0(x);
        const double r2 = f2(x) / f0(x);
        return f3(x) / f0(x) - 3.0 * r2 * r1 + 2.0 * r1 * r1 * r1;
    };
    d.sample = [s1, s2, w](Rng& rng) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double s = (u(rng) < w) ? s1 : s2;
        return s * draw_normal(rng);
    };
    return d;
}

}  // namespace

DensitySpec DensitySpec::parse(const std::string& text) {
    DensitySpec spec;
    if (text == "standard-normal") {
        spec.family = Density1D::standard_normal;
        return spec;
    }
    if (text == "logistic") {
        spec.family = Density1D::logistic;
        return spec;
    }
    double s1, s2, w;
    if (std::sscanf(text.c_str(), "scale-mixture(%lf,%lf,%lf)", &s1, &s2, &w) == 3) {
        spec.family = Density1D::scale_mixture;
        spec.s1 = s1;
        spec.s2 = s2;
        spec.w = w;
        return spec;
    }
    throw std::invalid_argument("unsupported density family: " + text);
}

std::string DensitySpec::to_string() const {
    switch (family) {
        case Density1D::standard_normal: return "standard-normal";
        case Density1D::logistic: return "logistic";
        case Density1D::scale_mixture: {
            char buf[80];
            std::snprintf(buf, sizeof(buf), "scale-mixture(%g,%g,%g)", s1, s2, w);
            return buf;
        }
    }
    return "?";
}

Density1DImpl make_density(const DensitySpec& spec) {
    switch (spec.family) {
        case Density1D::standard_normal: return make_standard_normal();
        case Density1D::logistic: return make_logistic();
        case Density1D::scale_mixture: return make_scale_mixture(spec.s1, spec.s2, spec.w);
    }
    throw std::invalid_argument("unsupported density family");
}

TargetModel build_iid_product(const DensitySpec& spec, int d) {
    if (d < 1) throw std::invalid_argument("build_iid_product: d >= 1 required");
    const Density1DImpl f = make_density(spec);

    TargetModel t;
    t.dim = d;
    t.name = "product/" + spec.to_string();
    t.log_density = [f, d](const Vec& x) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) acc += f.log_f(x[i]);
        return acc;
    };
    t.grad = [f, d](const Vec& x) {
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = f.dlog(x[i]);
        return g;
    };
    t.partial2 = [f](const Vec& x, int i, int j) {
        return i == j ? f.d2log(x[i]) : 0.0;
    };
    t.partial3 = [f](const Vec& x, int i, int j, int k) {
        return (i == j && j == k) ? f.d3log(x[i]) : 0.0;
    };
    t.neighborhoods = [](int i) { return std::vector<int>{i}; };
    t.make_stationary_sampler = [f, d]() {
        return std::function<Vec(Rng&)>([f, d](Rng& rng) {
            Vec x(d);
            for (int i = 0; i < d; ++i) x[i] = f.sample(rng);
            return x;
        });
    };
    t.first_coord_score = f.dlog;
    t.factors.reserve(d);
    for (int i = 0; i < d; ++i) t.factors.push_back({{i}});
    return t;
}

TargetModel build_flat_target(int d) {
    TargetModel t;
    t.dim = d;
    t.name = "flat";
    t.log_density = [](const Vec&) { return 0.0; };
    t.grad = [d](const Vec&) { return Vec(d, 0.0); };
    t.partial2 = [](const Vec&, int, int) { return 0.0; };
    t.partial3 = [](const Vec&, int, int, int) { return 0.0; };
    t.neighborhoods = [](int i) { return std::vector<int>{i}; };
    t.make_stationary_sampler = [d]() {
        return std::function<Vec(Rng&)>([d](Rng& rng) {
            Vec x(d);
            for (int i = 0; i < d; ++i) x[i] = draw_normal(rng);
            return x;
        });
    };
    return t;
}

TargetModel build_dense_coupling_toy(int d, double c) {
    TargetModel t = build_iid_product(DensitySpec{}, d);
    t.name = "dense-coupling-toy";
    auto base_log = t.log_density;
    t.log_density = [base_log, c, d](const Vec& x) {
        double cross = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) cross += x[i] * x[j];
        return base_log(x) + c * cross;
    };
    t.grad = [c, d](const Vec& x) {
        double sum = 0.0;
        for (double v : x) sum += v;
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = -x[i] + c * (sum - x[i]);
        return g;
    };
    t.partial2 = [c](const Vec&, int i, int j) { return i == j ? -1.0 : c; };
    t.partial3 = [](const Vec&, int, int, int) { return 0.0; };
    t.factors.clear();  // structure deliberately undeclared
    t.first_coord_score = nullptr;
    return t;
}

}  // namespace rwmlab
