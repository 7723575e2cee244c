#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace rwmlab {

// Standard normal CDF via the complementary error function.
// |error| < 1e-15 over the range used by the asymptotic formulas.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244008443621048);
}

inline double normal_pdf(double x) {
    return 0.3989422804014326779399460599344 * std::exp(-0.5 * x * x);
}

struct Summary {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

Summary summarize(std::span<const double> xs);

// q-quantile of a copy of xs (linear interpolation between order statistics).
double quantile(std::vector<double> xs, double q);

// Weighted least-squares quadratic fit y ~ a + b x + c x^2 with weights
// 1/se^2 (unit weights when all ses are zero). Returns {a, b, c}.
struct QuadFit {
    double a = 0.0, b = 0.0, c = 0.0;
    bool ok = false;
    double vertex() const { return -b / (2.0 * c); }
};
QuadFit fit_quadratic(std::span<const double> x, std::span<const double> y,
                      std::span<const double> se);

// Ordinary least squares slope/intercept for y ~ a + b x, with the
// standard error of the slope.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_se = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace rwmlab
