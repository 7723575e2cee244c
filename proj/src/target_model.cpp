#include "rwmlab/target_model.hpp"

#include <cmath>
#include <stdexcept>

namespace rwmlab {

int TargetModel::max_neighborhood() const {
    int m = 0;
    for (int i = 0; i < dim; ++i)
        m = std::max(m, static_cast<int>(neighborhoods(i).size()));
    return m;
}

double roughness(const TargetModel& target, const Vec& x) {
    if (static_cast<int>(x.size()) != target.dim)
        throw std::invalid_argument("roughness: point has wrong dimension");
    const Vec g = target.grad(x);
    double acc = 0.0;
    for (int i = 0; i < target.dim; ++i) {
        if (!std::isfinite(g[i]))
            throw std::domain_error("roughness: non-finite gradient at coordinate " +
                                    std::to_string(i));
        acc += g[i] * g[i];
    }
    return acc / static_cast<double>(target.dim);
}

double fd_grad(const std::function<double(const Vec&)>& f, Vec x, int i) {
    const double h = 1e-4 * (1.0 + std::abs(x[i]));
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    return (fp - fm) / (2.0 * h);
}

double fd_partial2(const std::function<double(const Vec&)>& f, Vec x, int i, int j) {
    const double hi = 5e-4 * (1.0 + std::abs(x[i]));
    const double hj = 5e-4 * (1.0 + std::abs(x[j]));
    if (i == j) {
        const double xi = x[i];
        const double f0 = f(x);
        x[i] = xi + hi;
        const double fp = f(x);
        x[i] = xi - hi;
        const double fm = f(x);
        return (fp - 2.0 * f0 + fm) / (hi * hi);
    }
    const double xi = x[i], xj = x[j];
    x[i] = xi + hi; x[j] = xj + hj; const double fpp = f(x);
    x[i] = xi + hi; x[j] = xj - hj; const double fpm = f(x);
    x[i] = xi - hi; x[j] = xj + hj; const double fmp = f(x);
    x[i] = xi - hi; x[j] = xj - hj; const double fmm = f(x);
    return (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
}

double fd_partial3(const std::function<double(const Vec&)>& f, Vec x, int i, int j, int k) {
    // Outer central difference in x_k of the mixed second partial.
    const double hk = 2e-3 * (1.0 + std::abs(x[k]));
    const double xk = x[k];
    x[k] = xk + hk;
    const double p = fd_partial2(f, x, i, j);
    x[k] = xk - hk;
    const double m = fd_partial2(f, x, i, j);
    return (p - m) / (2.0 * hk);
}

void install_fd_derivatives(TargetModel& target) {
    const auto f = target.log_density;
    const int d = target.dim;
    if (!target.grad) {
        target.grad = [f, d](const Vec& x) {
            Vec g(d);
            for (int i = 0; i < d; ++i) g[i] = fd_grad(f, x, i);
            return g;
        };
        target.grad_mode = DerivativeMode::finite_difference;
    }
    if (!target.partial2) {
        target.partial2 = [f](const Vec& x, int i, int j) { return fd_partial2(f, x, i, j); };
        target.partial2_mode = DerivativeMode::finite_difference;
    }
    if (!target.partial3) {
        target.partial3 = [f](const Vec& x, int i, int j, int k) {
            return fd_partial3(f, x, i, j, k);
        };
        target.partial3_mode = DerivativeMode::finite_difference;
    }
}

}  // namespace rwmlab
