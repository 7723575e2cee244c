#include "rwmlab/hier_gauss.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace rwmlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kGibbsBurnin = 200;
constexpr int kGibbsThin = 5;

void check_data(const HierGaussData& data) {
    if (data.n < 2) throw std::invalid_argument("hier_gauss: n >= 2 required");
    if (static_cast<int>(data.Y.size()) != data.n * data.n)
        throw std::invalid_argument("hier_gauss: Y must be n x n");
    for (double v : data.Y)
        if (!std::isfinite(v)) throw std::invalid_argument("hier_gauss: Y has non-finite entry");
}

double sum_mu_dev_sq(const Vec& x, const HierLayout& lay) {
    double acc = 0.0;
    for (int j = 0; j < lay.n; ++j) {
        const double d = x[lay.mu(j)] - x[lay.nu()];
        acc += d * d;
    }
    return acc;
}

// One systematic Gibbs sweep for the unit-variance model (Example-style
// conditionals: theta, then mu, then nu).
void gibbs_sweep_basic(Vec& x, const HierGaussData& data, const HierLayout& lay, Rng& rng) {
    const int n = lay.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            x[lay.theta(i, j)] =
                0.5 * (x[lay.mu(j)] + data.y(i, j)) + std::sqrt(0.5) * draw_normal(rng);
    for (int j = 0; j < n; ++j) {
        double tsum = 0.0;
        for (int i = 0; i < n; ++i) tsum += x[lay.theta(i, j)];
        const double mean = (tsum + x[lay.nu()]) / (n + 1.0);
        x[lay.mu(j)] = mean + draw_normal(rng) / std::sqrt(n + 1.0);
    }
    double musum = 0.0;
    for (int j = 0; j < n; ++j) musum += x[lay.mu(j)];
    x[lay.nu()] = musum / n + draw_normal(rng) / std::sqrt(static_cast<double>(n));
}

// Sweep for the realistic model: theta, mu, nu, A.
void gibbs_sweep_realistic(Vec& x, const HierGaussData& data, const HierLayout& lay, Rng& rng) {
    const int n = lay.n;
    const auto& h = data.hyper;
    const double A = x[lay.A()];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double mean = (h.W * x[lay.mu(j)] + h.V * data.y(i, j)) / (h.W + h.V);
            const double var = h.V * h.W / (h.W + h.V);
            x[lay.theta(i, j)] = mean + std::sqrt(var) * draw_normal(rng);
        }
    for (int j = 0; j < n; ++j) {
        double tsum = 0.0;
        for (int i = 0; i < n; ++i) tsum += x[lay.theta(i, j)];
        const double mean = (A * tsum + h.V * x[lay.nu()]) / (n * A + h.V);
        const double var = A * h.V / (n * A + h.V);
        x[lay.mu(j)] = mean + std::sqrt(var) * draw_normal(rng);
    }
    double musum = 0.0;
    for (int j = 0; j < n; ++j) musum += x[lay.mu(j)];
    x[lay.nu()] = musum / n + std::sqrt(A / n) * draw_normal(rng);
    // A | {mu_j}, nu ~ IG(a + n/2, b + sum_j (mu_j - nu)^2 / 2)
    const double shape = h.a + 0.5 * n;
    const double scale = h.b + 0.5 * sum_mu_dev_sq(x, lay);
    std::gamma_distribution<double> gamma(shape, 1.0);
    x[lay.A()] = scale / gamma(rng);
}

Vec overdispersed_start(const HierGaussData& data, const HierLayout& lay, Rng& rng) {
    Vec x(lay.dim());
    x[lay.nu()] = 3.0 * draw_normal(rng);
    if (lay.has_A) x[lay.A()] = 1.0;
    for (int j = 0; j < lay.n; ++j) x[lay.mu(j)] = 3.0 * draw_normal(rng);
    for (int i = 0; i < lay.n; ++i)
        for (int j = 0; j < lay.n; ++j)
            x[lay.theta(i, j)] = data.y(i, j) + 3.0 * draw_normal(rng);
    return x;
}

template <typename Sweep>
std::function<Vec(Rng&)> make_gibbs_sampler(HierGaussData data, HierLayout lay, Sweep sweep) {
    struct State {
        Vec x;
        bool warm = false;
    };
    auto state = std::make_shared<State>();
    return [data = std::move(data), lay, sweep, state](Rng& rng) {
        if (!state->warm) {
            state->x = overdispersed_start(data, lay, rng);
            for (int s = 0; s < kGibbsBurnin; ++s) sweep(state->x, data, lay, rng);
            state->warm = true;
        } else {
            for (int s = 0; s < kGibbsThin; ++s) sweep(state->x, data, lay, rng);
        }
        return state->x;
    };
}

std::vector<Factor> basic_factors(const HierLayout& lay) {
    std::vector<Factor> fs;
    for (int j = 0; j < lay.n; ++j) fs.push_back({{lay.nu(), lay.mu(j)}});
    for (int i = 0; i < lay.n; ++i)
        for (int j = 0; j < lay.n; ++j) {
            fs.push_back({{lay.mu(j), lay.theta(i, j)}});
            fs.push_back({{lay.theta(i, j)}});  // likelihood term
        }
    return fs;
}

}  // namespace

HierGaussData synth_data_constant(int n, double c) {
    if (n < 1) throw std::invalid_argument("synth_data: n >= 1 required");
    HierGaussData d;
    d.n = n;
    d.Y.assign(static_cast<std::size_t>(n) * n, c);
    return d;
}

HierGaussData synth_data_from_model(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("synth_data: n >= 1 required");
    HierGaussData d;
    d.n = n;
    d.Y.resize(static_cast<std::size_t>(n) * n);
    Rng rng = make_rng(seed, /*stream=*/0xda7a);
    for (int j = 0; j < n; ++j) {
        const double mu = draw_normal(rng);
        for (int i = 0; i < n; ++i) {
            const double theta = mu + draw_normal(rng);
            d.Y[static_cast<std::size_t>(i) * n + j] = theta + draw_normal(rng);
        }
    }
    return d;
}

TargetModel build_hier_gauss(const HierGaussData& data) {
    check_data(data);
    const HierLayout lay{data.n, /*has_A=*/false};
    const int n = data.n;

    TargetModel t;
    t.dim = lay.dim();
    t.name = "hier-gauss";
    t.log_density = [data, lay, n](const Vec& x) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d1 = x[lay.mu(j)] - x[lay.nu()];
            acc -= 0.5 * d1 * d1;
            for (int i = 0; i < n; ++i) {
                const double d2 = x[lay.theta(i, j)] - x[lay.mu(j)];
                const double d3 = data.y(i, j) - x[lay.theta(i, j)];
                acc -= 0.5 * (d2 * d2 + d3 * d3);
            }
        }
        return acc;
    };
    t.grad = [data, lay, n](const Vec& x) {
        Vec g(lay.dim(), 0.0);
        double mu_dev_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double mu = x[lay.mu(j)];
            mu_dev_sum += mu - x[lay.nu()];
            double gmu = -(mu - x[lay.nu()]);
            for (int i = 0; i < n; ++i) {
                const double th = x[lay.theta(i, j)];
                gmu += th - mu;
                g[lay.theta(i, j)] = -(th - mu) + (data.y(i, j) - th);
            }
            g[lay.mu(j)] = gmu;
        }
        g[lay.nu()] = mu_dev_sum;
        return g;
    };
    t.partial2 = [lay, n](const Vec&, int i, int j) {
        if (i > j) std::swap(i, j);
        if (i == lay.nu())
            return j == lay.nu() ? -static_cast<double>(n)
                                 : (j <= lay.mu(n - 1) ? 1.0 : 0.0);
        if (i <= lay.mu(n - 1)) {  // i is a mu index
            if (i == j) return -(n + 1.0);
            if (j <= lay.mu(n - 1)) return 0.0;
            // j is theta(r, c); coupled iff its column matches i's group.
            const int c = (j - lay.theta(0, 0)) % n;
            return lay.mu(c) == i ? 1.0 : 0.0;
        }
        return i == j ? -2.0 : 0.0;  // theta block
    };
    t.partial3 = [](const Vec&, int, int, int) { return 0.0; };
    t.neighborhoods = [lay, n](int i) {
        std::vector<int> h;
        if (i == lay.nu()) {
            h.push_back(lay.nu());
            for (int j = 0; j < n; ++j) h.push_back(lay.mu(j));
        } else if (i <= lay.mu(n - 1)) {
            const int j = i - lay.mu(0);
            h.push_back(lay.nu());
            h.push_back(i);
            for (int r = 0; r < n; ++r) h.push_back(lay.theta(r, j));
        } else {
            const int c = (i - lay.theta(0, 0)) % n;
            h.push_back(lay.mu(c));
            h.push_back(i);
        }
        return h;
    };
    t.make_stationary_sampler = [data, lay]() {
        return make_gibbs_sampler(data, lay,
                                  [](Vec& x, const HierGaussData& d, const HierLayout& l,
                                     Rng& r) { gibbs_sweep_basic(x, d, l, r); });
    };
    t.factors = basic_factors(lay);
    return t;
}

TargetModel build_hier_gauss_realistic(const HierGaussData& data) {
    check_data(data);
    const auto& h = data.hyper;
    if (h.V <= 0.0 || h.W <= 0.0 || h.a <= 0.0 || h.b <= 0.0)
        throw std::invalid_argument("hier_gauss_realistic: V, W, a, b must be positive");
    const HierLayout lay{data.n, /*has_A=*/true};
    const int n = data.n;

    TargetModel t;
    t.dim = lay.dim();
    t.name = "hier-gauss-realistic";
    t.log_density = [data, lay, n, h](const Vec& x) {
        const double A = x[lay.A()];
        if (A <= 0.0) return kNegInf;
        double acc = -(h.a + 1.0 + 0.5 * n) * std::log(A) - h.b / A;
        acc -= 0.5 * sum_mu_dev_sq(x, lay) / A;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double d2 = x[lay.theta(i, j)] - x[lay.mu(j)];
                const double d3 = data.y(i, j) - x[lay.theta(i, j)];
                acc -= 0.5 * d2 * d2 / h.V + 0.5 * d3 * d3 / h.W;
            }
        return acc;
    };
    t.grad = [data, lay, n, h](const Vec& x) {
        const double A = x[lay.A()];
        Vec g(lay.dim(), 0.0);
        double mu_dev_sum = 0.0, mu_dev_sq = 0.0;
        for (int j = 0; j < n; ++j) {
            const double mu = x[lay.mu(j)];
            const double dev = mu - x[lay.nu()];
            mu_dev_sum += dev;
            mu_dev_sq += dev * dev;
            double gmu = -dev / A;
            for (int i = 0; i < n; ++i) {
                const double th = x[lay.theta(i, j)];
                gmu += (th - mu) / h.V;
                g[lay.theta(i, j)] = -(th - mu) / h.V + (data.y(i, j) - th) / h.W;
            }
            g[lay.mu(j)] = gmu;
        }
        g[lay.nu()] = mu_dev_sum / A;
        g[lay.A()] = -(h.a + 1.0 + 0.5 * n) / A + (h.b + 0.5 * mu_dev_sq) / (A * A);
        return g;
    };
    t.partial2 = [lay, n, h](const Vec& x, int i, int j) {
        const double A = x[lay.A()];
        if (i > j) std::swap(i, j);
        const int mu_lo = lay.mu(0), mu_hi = lay.mu(n - 1);
        if (i == lay.nu()) {
            if (j == lay.nu()) return -n / A;
            if (j == lay.A()) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += x[lay.mu(k)] - x[lay.nu()];
                return -s / (A * A);
            }
            return (j >= mu_lo && j <= mu_hi) ? 1.0 / A : 0.0;
        }
        if (i == lay.A()) {
            if (j == lay.A()) {
                double sq = sum_mu_dev_sq(x, lay);
                return (h.a + 1.0 + 0.5 * n) / (A * A) - 2.0 * (h.b + 0.5 * sq) / (A * A * A);
            }
            if (j >= mu_lo && j <= mu_hi)
                return (x[j] - x[lay.nu()]) / (A * A);
            return 0.0;
        }
        if (i >= mu_lo && i <= mu_hi) {
            if (i == j) return -1.0 / A - n / h.V;
            if (j <= mu_hi) return 0.0;
            const int c = (j - lay.theta(0, 0)) % n;
            return lay.mu(c) == i ? 1.0 / h.V : 0.0;
        }
        return i == j ? -1.0 / h.V - 1.0 / h.W : 0.0;
    };
    t.partial3 = [lay, n, h](const Vec& x, int i, int j, int k) {
        const double A = x[lay.A()];
        // Sort so that any A indices come first; only terms containing the
        // 1/A factors have nonzero third derivatives.
        int idx[3] = {i, j, k};
        std::sort(idx, idx + 3);
        const int a0 = idx[0], a1 = idx[1], a2 = idx[2];
        const int mu_lo = lay.mu(0), mu_hi = lay.mu(n - 1);
        auto is_mu = [&](int v) { return v >= mu_lo && v <= mu_hi; };
        const double A2 = A * A, A3 = A2 * A;
        if (a0 == lay.nu()) {
            if (a1 == lay.nu() && a2 == lay.nu()) return 0.0;
            if (a1 == lay.nu() && a2 == lay.A()) return n / A2;       // nu,nu,A
            if (a1 == lay.A() && a2 == lay.A()) {                     // nu,A,A
                double s = 0.0;
                for (int m = 0; m < n; ++m) s += x[lay.mu(m)] - x[lay.nu()];
                return 2.0 * s / A3;
            }
            if (a1 == lay.A() && is_mu(a2)) return -1.0 / A2;         // nu,A,mu
            return 0.0;
        }
        if (a0 == lay.A()) {
            if (a1 == lay.A() && a2 == lay.A())
                return -2.0 * (h.a + 1.0 + 0.5 * n) / A3 +
                       6.0 * (h.b + 0.5 * sum_mu_dev_sq(x, lay)) / (A2 * A2);
            if (a1 == lay.A() && is_mu(a2))
                return -2.0 * (x[a2] - x[lay.nu()]) / A3;             // A,A,mu
            if (is_mu(a1) && a1 == a2) return 1.0 / A2;               // A,mu,mu
            return 0.0;
        }
        return 0.0;
    };
    t.neighborhoods = [lay, n](int i) {
        std::vector<int> h;
        const int mu_lo = lay.mu(0), mu_hi = lay.mu(n - 1);
        if (i == lay.nu() || i == lay.A()) {
            h.push_back(lay.nu());
            h.push_back(lay.A());
            for (int j = 0; j < n; ++j) h.push_back(lay.mu(j));
        } else if (i >= mu_lo && i <= mu_hi) {
            const int j = i - mu_lo;
            h.push_back(lay.nu());
            h.push_back(lay.A());
            h.push_back(i);
            for (int r = 0; r < n; ++r) h.push_back(lay.theta(r, j));
        } else {
            const int c = (i - lay.theta(0, 0)) % n;
            h.push_back(lay.mu(c));
            h.push_back(i);
        }
        return h;
    };
    t.make_stationary_sampler = [data, lay]() {
        return make_gibbs_sampler(data, lay,
                                  [](Vec& x, const HierGaussData& d, const HierLayout& l,
                                     Rng& r) { gibbs_sweep_realistic(x, d, l, r); });
    };
    // Same factors as the basic model, plus the IG prior on A and the
    // 3-coordinate (nu, A, mu_j) group potentials.
    t.factors.push_back({{lay.A()}});
    for (int j = 0; j < n; ++j) t.factors.push_back({{lay.nu(), lay.A(), lay.mu(j)}});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            t.factors.push_back({{lay.mu(j), lay.theta(i, j)}});
            t.factors.push_back({{lay.theta(i, j)}});
        }
    return t;
}

}  // namespace rwmlab
