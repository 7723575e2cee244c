#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rwmlab/target_model.hpp"

namespace rwmlab {

struct EsjdEstimate {
    double ell = 0.0;
    double esjd_mean = 0.0;
    double esjd_se = 0.0;
    double accept_mean = 0.0;
    double accept_se = 0.0;
    int n_outer = 0;
    int n_inner = 0;
};

struct RoughnessStats {
    std::vector<double> samples;  // I_d at stationary draws
    double mean = 0.0;            // estimate of I-bar_d
    double sd = 0.0;
    double mean_sqrt = 0.0;       // estimate of E sqrt(I_d)
    double cv = 0.0;              // sd / mean
};

struct EsjdCurve {
    std::vector<EsjdEstimate> points;  // strictly increasing in ell
    double ell_hat = 0.0;              // smoothed argmax
    double esjd_at_opt = 0.0;
    double accept_at_opt = 0.0;
    double accept_se_at_opt = 0.0;
    bool at_boundary = false;          // argmax pinned to the scanned bracket
};

// Nested estimator of Definition-style ESJD: outer stationary draws X,
// inner proposals Y ~ N(X, sigma_d^2 I); averages |Y-X|^2 min(1, pi(Y)/pi(X))
// and min(1, pi(Y)/pi(X)). Standard errors come from the outer-level spread.
EsjdEstimate estimate_esjd(const TargetModel& target, double ell, int n_outer, int n_inner,
                           Rng& rng);

// a(ell) = 2 E[Phi(-ell sqrt(I)/2)] over the roughness samples.
double asymptotic_accept(double ell, const RoughnessStats& rough);

// (d/(d-1)) ell^2 a(ell).
double asymptotic_esjd(double ell, int d, const RoughnessStats& rough);

RoughnessStats roughness_stats(const TargetModel& target, int n_samples, Rng& rng);
RoughnessStats make_roughness_stats(std::vector<double> samples);

struct OptimizeResult {
    double ell_hat = 0.0;
    double value = 0.0;
    bool at_boundary = false;
};

// Geometric grid scan of `budget` points over [lo, hi], then quadratic
// refinement around the best points, fitted to value +/- se. Works for both
// Monte-Carlo and deterministic evaluators (se == 0).
OptimizeResult optimize_ell(const std::function<std::pair<double, double>(double)>& evaluator,
                            double lo, double hi, int budget);

// Geometric ell grid; default bracket [0.2, 6] / sqrt(mean roughness).
std::vector<double> ell_grid(double lo, double hi, int n_points);
std::pair<double, double> default_bracket(const RoughnessStats& rough);

// Evaluates estimate_esjd at each grid point (per-point RNG streams keyed by
// grid index, so results are independent of scheduling) and locates ell_hat
// by a quadratic fit through the top grid points.
EsjdCurve sweep_esjd(const TargetModel& target, const std::vector<double>& grid, int n_outer,
                     int n_inner, std::uint64_t seed, int threads = 1);

// Same smoothing/argmax logic applied to an existing set of points.
void finalize_curve(EsjdCurve& curve);

struct BoundReport {
    double accept_at_opt = 0.0;
    double threshold = 0.0;  // 0.234 + slack
    bool holds = false;
    bool insufficient_scan = false;
    std::string note;
};

// Checks accept_at_opt <= 0.234 + (2 accept_se at the optimum + 0.005).
BoundReport check_upper_bound(const EsjdCurve& curve);

}  // namespace rwmlab
