#include "rwmlab/diffusion_bench.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rwmlab/parallel.hpp"
#include "rwmlab/scaling_analysis.hpp"
#include "rwmlab/stats.hpp"

namespace rwmlab {

namespace {

// Grid-time -> step-index map for "nearest completed step" recording.
std::vector<long> sde_grid_indices(const std::vector<double>& grid, double dt, long n_steps) {
    std::vector<long> idx(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        long k = dt > 0.0 ? std::llround(grid[g] / dt) : 0;
        idx[g] = std::clamp(k, 0L, n_steps);
    }
    return idx;
}

double quantile_of_sorted(const std::vector<double>& s, double q) {
    const double pos = q * (static_cast<double>(s.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= s.size()) return s.back();
    const double t = pos - static_cast<double>(lo);
    return (1.0 - t) * s[lo] + t * s[lo + 1];
}

// Mean |a_(i) - b_(i)| over the exact coupling (equal sizes) or the
// mid-quantile coupling (unequal), plus a coupling-spread se.
std::pair<double, double> coupled_w1(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<double> diffs(n);
    if (a.size() == b.size()) {
        for (std::size_t i = 0; i < n; ++i) diffs[i] = std::abs(a[i] - b[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            diffs[i] = std::abs(quantile_of_sorted(a, q) - quantile_of_sorted(b, q));
        }
    }
    const Summary s = summarize(diffs);
    return {s.mean, s.se};
}

// Column of per-path values at one grid time.
std::vector<double> column(const PathEnsemble& ens, std::size_t t) {
    std::vector<double> col(ens.paths.size());
    for (std::size_t p = 0; p < ens.paths.size(); ++p) col[p] = ens.paths[p][t];
    return col;
}

}  // namespace

double speed_measure(double ell, double I_bar) {
    if (ell <= 0.0 || I_bar <= 0.0)
        throw std::invalid_argument("speed_measure: ell > 0 and I_bar > 0 required");
    return 2.0 * ell * ell * normal_cdf(-0.5 * ell * std::sqrt(I_bar));
}

PathEnsemble simulate_sde(const std::function<double(double)>& score, double h, double T,
                          double dt, const std::vector<double>& starts,
                          const std::vector<double>& grid, std::uint64_t seed, int threads) {
    if (!score) throw std::invalid_argument("simulate_sde: score required");
    if (h <= 0.0 || T < 0.0) throw std::invalid_argument("simulate_sde: h > 0, T >= 0 required");
    if (T > 0.0 && !(dt > 0.0 && dt <= T / 100.0))
        throw std::invalid_argument("simulate_sde: dt <= T/100 required");
    if (starts.empty()) throw std::invalid_argument("simulate_sde: no starting values");
    for (double t : grid)
        if (t < 0.0 || t > T + 1e-12)
            throw std::invalid_argument("simulate_sde: grid time outside [0, T]");

    const long n_steps = T > 0.0 ? static_cast<long>(std::ceil(T / dt - 1e-9)) : 0;
    const std::vector<long> rec = sde_grid_indices(grid, dt, n_steps);
    const double sqrt_hdt = std::sqrt(h * dt);

    PathEnsemble ens;
    ens.times = grid;
    ens.paths.assign(starts.size(), std::vector<double>(grid.size(), 0.0));
    {
        std::ostringstream os;
        os << "sde(h=" << h << ")";
        ens.origin = os.str();
    }
    ens.start = "per-path";

    std::string failure;
    parallel_for(static_cast<int>(starts.size()), threads, [&](int p) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(p) + 1);
        double u = starts[p];
        for (std::size_t g = 0; g < rec.size(); ++g)
            if (rec[g] == 0) ens.paths[p][g] = u;
        for (long k = 1; k <= n_steps; ++k) {
            const double drift = score(u);
            if (!std::isfinite(u) || !std::isfinite(drift) || std::abs(drift) > 1e6) {
                std::ostringstream os;
                os << "simulate_sde: path " << p << " aborted at step " << k
                   << " (u=" << u << ", score=" << drift << ")";
                failure = os.str();  // benign race: any path's diagnostic will do
                return;
            }
            u += 0.5 * h * drift * dt + sqrt_hdt * draw_normal(rng);
            for (std::size_t g = 0; g < rec.size(); ++g)
                if (rec[g] == k) ens.paths[p][g] = u;
        }
    });
    if (!failure.empty()) throw std::runtime_error(failure);
    return ens;
}

PathEnsemble simulate_sde(const std::function<double(double)>& score, double h, double T,
                          double dt, int n_paths, const Start1D& start,
                          const std::vector<double>& grid, std::uint64_t seed, int threads) {
    if (n_paths < 1) throw std::invalid_argument("simulate_sde: n_paths >= 1 required");
    std::vector<double> starts(n_paths);
    if (start.kind == Start1D::Kind::point) {
        std::fill(starts.begin(), starts.end(), start.x);
    } else {
        if (!start.draw) throw std::invalid_argument("simulate_sde: sampler start without draw");
        Rng rng = make_rng(seed, 0x57a7);
        for (auto& s : starts) s = start.draw(rng);
    }
    PathEnsemble ens = simulate_sde(score, h, T, dt, starts, grid, seed, threads);
    ens.start = start.kind == Start1D::Kind::point
                    ? "point " + std::to_string(start.x)
                    : std::string("stationary");
    return ens;
}

PathEnsemble extract_sped_path(const ChainTrace& trace, int d, double T,
                               const std::vector<double>& grid) {
    const auto needed = static_cast<std::size_t>(std::ceil(d * T - 1e-9)) + 1;
    if (trace.first_coord_path.size() < needed)
        throw std::invalid_argument("extract_sped_path: first_coord_path has " +
                                    std::to_string(trace.first_coord_path.size()) +
                                    " entries, need >= " + std::to_string(needed));
    PathEnsemble ens;
    ens.times = grid;
    ens.paths.emplace_back(grid.size());
    ens.origin = "chain(d=" + std::to_string(d) + ")";
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (grid[g] < 0.0 || grid[g] > T + 1e-12)
            throw std::invalid_argument("extract_sped_path: grid time outside [0, T]");
        const auto idx = static_cast<std::size_t>(std::floor(d * grid[g] + 1e-9));
        ens.paths[0][g] = trace.first_coord_path[idx];
    }
    return ens;
}

W1Pair w1_distance(std::vector<double> a, std::vector<double> b, double clamp) {
    if (a.empty() || b.empty()) throw std::invalid_argument("w1_distance: empty sample set");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    W1Pair out;
    out.plain = coupled_w1(a, b).first;
    for (auto& v : a) v = std::clamp(v, -clamp, clamp);
    for (auto& v : b) v = std::clamp(v, -clamp, clamp);
    out.bounded = coupled_w1(a, b).first;
    return out;
}

std::vector<W1Report> diffusion_compare(const std::function<TargetModel(int)>& family,
                                        const DiffusionCompareConfig& cfg) {
    if (!family) throw std::invalid_argument("diffusion_compare: family required");
    if (cfg.d_list.empty()) throw std::invalid_argument("diffusion_compare: empty d_list");
    if (cfg.n_paths < 2) throw std::invalid_argument("diffusion_compare: n_paths >= 2 required");
    std::vector<double> grid = cfg.grid;
    if (grid.empty())
        grid = {0.25 * cfg.T, 0.5 * cfg.T, 0.75 * cfg.T, cfg.T};

    std::vector<W1Report> reports;
    for (int d : cfg.d_list) {
        const TargetModel model = family(d);
        if (!model.first_coord_score)
            throw std::invalid_argument("diffusion_compare: target lacks first_coord_score");

        Rng rng = make_rng(cfg.seed, 0xd1f * static_cast<std::uint64_t>(d));
        const RoughnessStats rough = roughness_stats(model, cfg.n_roughness, rng);
        const double h = speed_measure(cfg.ell, rough.mean);
        const double dt = cfg.dt > 0.0 ? cfg.dt : std::min(1e-3, 0.01 / h);

        // Chain starting states; fixed start pins coordinate 1 of one typical
        // state, matching the conditional-on-x statement of the limit.
        auto sampler = model.make_stationary_sampler();
        std::vector<Vec> chain_starts(cfg.n_paths);
        std::vector<double> sde_starts(cfg.n_paths);
        if (cfg.fixed_start) {
            Vec x = sampler(rng);
            x[0] = cfg.start_x;
            for (int p = 0; p < cfg.n_paths; ++p) {
                chain_starts[p] = x;
                sde_starts[p] = cfg.start_x;
            }
        } else {
            for (int p = 0; p < cfg.n_paths; ++p) {
                chain_starts[p] = sampler(rng);
                sde_starts[p] = chain_starts[p][0];
            }
        }

        const long n_iter = std::max<long>(1, static_cast<long>(std::ceil(d * cfg.T - 1e-9)));
        PathEnsemble chain_ens;
        chain_ens.times = grid;
        chain_ens.paths.assign(cfg.n_paths, {});
        chain_ens.origin = "chain(d=" + std::to_string(d) + ")";
        parallel_for(cfg.n_paths, cfg.threads, [&](int p) {
            Rng r = make_rng(cfg.seed, 0xc0a1 + static_cast<std::uint64_t>(d) * 1000003 +
                                           static_cast<std::uint64_t>(p));
            ChainTrace trace = run_chain(model, cfg.ell, n_iter,
                                         InitSpec::at(chain_starts[p]),
                                         {.first_coord = true, .thin = 0}, r);
            chain_ens.paths[p] = extract_sped_path(trace, d, cfg.T, grid).paths[0];
        });

        PathEnsemble sde_ens =
            cfg.T > 0.0
                ? simulate_sde(model.first_coord_score, h, cfg.T, dt, sde_starts, grid,
                               cfg.seed + 0x5de, cfg.threads)
                : [&] {
                      PathEnsemble e;
                      e.times = grid;
                      e.paths.assign(cfg.n_paths,
                                     std::vector<double>(grid.size(), sde_starts[0]));
                      for (int p = 0; p < cfg.n_paths; ++p)
                          std::fill(e.paths[p].begin(), e.paths[p].end(), sde_starts[p]);
                      return e;
                  }();

        W1Report rep;
        rep.d = d;
        rep.times = grid;
        rep.clamp_bound = cfg.clamp;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            std::vector<double> a = column(chain_ens, g);
            std::vector<double> b = column(sde_ens, g);
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            const auto [plain, se] = coupled_w1(a, b);
            for (auto& v : a) v = std::clamp(v, -cfg.clamp, cfg.clamp);
            for (auto& v : b) v = std::clamp(v, -cfg.clamp, cfg.clamp);
            rep.distances.push_back(plain);
            rep.bounded.push_back(coupled_w1(a, b).first);
            rep.se.push_back(se);
            rep.max_distance = std::max(rep.max_distance, plain);
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

IactEstimate iact(const std::vector<double>& series) {
    const auto n = static_cast<long>(series.size());
    if (n < 10) throw std::invalid_argument("iact: series too short");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    const long window = n / 3;
    auto gamma = [&](long k) {
        double acc = 0.0;
        for (long t = 0; t + k < n; ++t) acc += (series[t] - mean) * (series[t + k] - mean);
        return acc / static_cast<double>(n);
    };

    const double g0 = gamma(0);
    IactEstimate est;
    est.window = window;
    if (g0 <= 0.0) {  // constant series
        est.tau = 1.0;
        est.converged = true;
        return est;
    }
    // Sum of paired autocovariances while the pairs stay positive.
    double pair_sum = 0.0;
    long k = 0;
    while (k + 1 <= window) {
        const double pair = gamma(k) + gamma(k + 1);
        if (pair <= 0.0) {
            est.converged = true;
            break;
        }
        pair_sum += pair;
        est.truncation_lag = k + 1;
        k += 2;
    }
    est.tau = std::max(1.0, 2.0 * pair_sum / g0 - 1.0);
    return est;
}

ComplexityScanReport complexity_scan(const std::function<TargetModel(int)>& family,
                                     const ComplexityConfig& cfg) {
    if (!family || !cfg.ell_rule)
        throw std::invalid_argument("complexity_scan: family and ell_rule required");
    if (cfg.d_list.size() < 4)
        throw std::invalid_argument("complexity_scan: >= 4 dimension entries required");

    // The span precondition applies to the realized dimensions: families may
    // be parameterized by a size index (e.g. group count) rather than d.
    std::vector<TargetModel> models;
    models.reserve(cfg.d_list.size());
    for (int s : cfg.d_list) models.push_back(family(s));
    int dim_lo = models.front().dim, dim_hi = models.front().dim;
    for (const auto& m : models) {
        dim_lo = std::min(dim_lo, m.dim);
        dim_hi = std::max(dim_hi, m.dim);
    }
    if (static_cast<double>(dim_hi) < 8.0 * static_cast<double>(dim_lo))
        throw std::invalid_argument("complexity_scan: dimensions must span >= 8x range");

    ComplexityScanReport report;
    report.metric = cfg.metric;
    report.entries.resize(cfg.d_list.size());

    for (std::size_t e = 0; e < cfg.d_list.size(); ++e) {
        const TargetModel& model = models[e];
        const int d = model.dim;
        const double ell = cfg.ell_rule(cfg.d_list[e]);
        ComplexityEntry& entry = report.entries[e];
        entry.d = d;

        if (cfg.metric == ComplexityMetric::iact) {
            const long n_iter = std::max(cfg.min_iters, cfg.iters_per_d * d);
            std::vector<double> taus(cfg.replicates);
            std::vector<IactEstimate> ests(cfg.replicates);
            parallel_for(cfg.replicates, cfg.threads, [&](int r) {
                Rng rng = make_rng(cfg.seed, 0x7a0 + static_cast<std::uint64_t>(d) * 131 +
                                                 static_cast<std::uint64_t>(r));
                ChainTrace trace = run_chain(model, ell, n_iter, InitSpec::stationary(),
                                             {.first_coord = true, .thin = 0}, rng);
                ests[r] = iact(trace.first_coord_path);
                taus[r] = ests[r].tau;
            });
            entry.value = summarize(taus).mean;
            for (const auto& est : ests) {
                entry.flagged = entry.flagged || !est.converged;
                entry.window = std::max(entry.window, est.window);
                entry.truncation_lag = std::max(entry.truncation_lag, est.truncation_lag);
            }
        } else {
            Rng rng = make_rng(cfg.seed, 0x371 + static_cast<std::uint64_t>(d));
            auto sampler = model.make_stationary_sampler();
            std::vector<double> ref(cfg.n_ref);
            for (auto& v : ref) v = sampler(rng)[0];

            const long cap = cfg.max_iter_factor * d;
            const long stride = std::max<long>(1, d / 5);
            std::vector<double> iters(cfg.n_starts);
            for (int s = 0; s < cfg.n_starts; ++s) {
                const Vec start = sampler(rng);
                std::vector<std::vector<double>> paths(cfg.n_chains);
                parallel_for(cfg.n_chains, cfg.threads, [&](int c) {
                    Rng r = make_rng(cfg.seed, 0x91 + static_cast<std::uint64_t>(d) * 4099 +
                                                   static_cast<std::uint64_t>(s) * 257 +
                                                   static_cast<std::uint64_t>(c));
                    paths[c] = run_chain(model, ell, cap, InitSpec::at(start),
                                         {.first_coord = true, .thin = 0}, r)
                                   .first_coord_path;
                });
                long hit = -1;
                for (long k = stride; k <= cap; k += stride) {
                    std::vector<double> marg(cfg.n_chains);
                    for (int c = 0; c < cfg.n_chains; ++c) marg[c] = paths[c][k];
                    if (w1_distance(std::move(marg), ref, 5.0).bounded < cfg.eps) {
                        hit = k;
                        break;
                    }
                }
                if (hit < 0) {
                    entry.flagged = true;
                    hit = cap;
                }
                iters[s] = static_cast<double>(hit);
            }
            entry.value = summarize(iters).mean;
        }
    }

    std::vector<double> lx, ly;
    for (const auto& entry : report.entries) {
        lx.push_back(std::log(static_cast<double>(entry.d)));
        ly.push_back(std::log(entry.value));
    }
    const LineFit fit = fit_line(lx, ly);
    report.slope = fit.slope;
    report.slope_se = fit.slope_se;
    return report;
}

}  // namespace rwmlab
