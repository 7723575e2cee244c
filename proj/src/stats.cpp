#include "rwmlab/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace rwmlab {

Summary summarize(std::span<const double> xs) {
    Summary s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double v : xs) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : xs) {
            const double d = v - s.mean;
            ss += d * d;
        }
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.se = s.sd / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

QuadFit fit_quadratic(std::span<const double> x, std::span<const double> y,
                      std::span<const double> se) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) return {};
    bool all_zero = true;
    for (std::size_t i = 0; i < se.size(); ++i)
        if (se[i] > 0.0) all_zero = false;

    // Normal equations for the 3-parameter model; center x for conditioning.
    double xbar = 0.0;
    for (double v : x) xbar += v;
    xbar /= static_cast<double>(n);

    double m[3][3] = {};
    double rhs[3] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (all_zero || se.empty()) ? 1.0 : 1.0 / (se[i] * se[i] + 1e-300);
        const double t = x[i] - xbar;
        const double basis[3] = {1.0, t, t * t};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += w * basis[r] * basis[c];
            rhs[r] += w * basis[r] * y[i];
        }
    }
    // Gaussian elimination with partial pivoting.
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[idx[r]][col]) > std::abs(m[idx[piv]][col])) piv = r;
        std::swap(idx[col], idx[piv]);
        if (std::abs(m[idx[col]][col]) < 1e-300) return {};
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[idx[r]][col] / m[idx[col]][col];
            for (int c = col; c < 3; ++c) m[idx[r]][c] -= f * m[idx[col]][c];
            rhs[idx[r]] -= f * rhs[idx[col]];
        }
    }
    double beta[3];
    for (int r = 2; r >= 0; --r) {
        double acc = rhs[idx[r]];
        for (int c = r + 1; c < 3; ++c) acc -= m[idx[r]][c] * beta[c];
        beta[r] = acc / m[idx[r]][r];
    }
    QuadFit f;
    // Undo the centering: y = b0 + b1 (x - xbar) + b2 (x - xbar)^2.
    f.c = beta[2];
    f.b = beta[1] - 2.0 * beta[2] * xbar;
    f.a = beta[0] - beta[1] * xbar + beta[2] * xbar * xbar;
    f.ok = std::isfinite(f.a) && std::isfinite(f.b) && std::isfinite(f.c);
    return f;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = ybar - f.slope * xbar;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        f.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

}  // namespace rwmlab
