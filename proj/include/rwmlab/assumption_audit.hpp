#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwmlab/scaling_analysis.hpp"
#include "rwmlab/target_model.hpp"

namespace rwmlab {

enum class AuditVerdict { pass, flag, not_applicable };

std::string to_string(AuditVerdict v);

struct AuditRecord {
    std::string check_id;
    AuditVerdict verdict = AuditVerdict::not_applicable;
    // Named statistics with the thresholds they were judged against.
    struct Stat {
        std::string name;
        double value = 0.0;
        double threshold = 0.0;  // NaN when informational only
    };
    std::vector<Stat> stats;
    std::size_t sample_size = 0;
    std::string note;
};

// Roughness band covering fraction q of the samples; points whose I_d falls
// inside are treated as "typical" and all sup-style audits restrict to them.
struct TypicalSetSpec {
    double lo = 0.0, hi = 0.0;
    double q = 0.99;
    bool low_power = false;  // fewer than 100 samples behind the band
    bool contains(double roughness_value) const {
        return roughness_value >= lo && roughness_value <= hi;
    }
};

struct AuditReport {
    std::vector<AuditRecord> records;
    TypicalSetSpec typical_set;
};

struct GraphMetrics {
    int l_d = 0;              // max neighbor count (excluding the coordinate itself)
    int m_d = 0;              // max factors a coordinate belongs to
    int max_clique_card = 0;  // max |C_k|
    long triangle_count = 0;  // 3-cliques induced by factors of cardinality >= 3
    bool known = false;
};

struct AuditConfig {
    double eps_far = 1e-8;       // "zero" threshold for non-neighbor couplings
    double cv_threshold = 0.15;  // A5 concentration proxy
    double a6_threshold = 0.1;
    double alpha = 0.4;          // A4 growth exponent, in (0, 1/2)
    std::uint64_t seed = 1;      // pair subsampling
    int far_pair_budget = 10000;
};

TypicalSetSpec empirical_typical_set(const RoughnessStats& rough, double q = 0.99);

// Restricts stationary points to the typical band. Callers usually draw the
// points and the RoughnessStats from the same sampler sweep.
std::vector<Vec> filter_typical(const TargetModel& target, const std::vector<Vec>& points,
                                const TypicalSetSpec& spec);

// A1: mixed second partials vanish off-neighborhood and stay o(sqrt(d/l_d))
// on-neighborhood. All near pairs scanned; far pairs subsampled.
AuditRecord audit_A1(const TargetModel& target, const std::vector<Vec>& points,
                     const AuditConfig& cfg = {});

// A3: third-partial growth, including the 3-clique sum when the factor
// structure is known.
AuditRecord audit_A3(const TargetModel& target, const std::vector<Vec>& points,
                     const AuditConfig& cfg = {});

// A4 + A5: roughness positivity margin, concentration (cv), and gradient
// sup growth against d^alpha.
AuditRecord audit_A4_A5(const TargetModel& target, const RoughnessStats& rough,
                        const std::vector<Vec>& points, const AuditConfig& cfg = {});

// Appendix-style stationarity diagnostic: R + S should average to zero under
// pi. Reports mean, sd, and the fifth absolute moment (the moment proxy for
// the strengthened smoothness conditions).
AuditRecord rs_diagnostic(const TargetModel& target, const std::vector<Vec>& points,
                          int coordinate = 0);
// The raw per-point statistic, exposed for the coordinate-invariance check.
double rs_statistic(const TargetModel& target, const Vec& x, int coordinate);

GraphMetrics graph_metrics(const TargetModel& target);

// A6: sup |d/dx1 log pi(x1 | x_-1) - (log pi~)'(x1)| over sampled points.
// The score of pi~ is analytic for product targets; callers may pass a
// Gaussian fit otherwise.
AuditRecord audit_A6(const TargetModel& target, const std::vector<Vec>& points,
                     const std::function<double(double)>& marginal_score,
                     const AuditConfig& cfg = {});

// Runs the full battery against a target, drawing its own stationary sample.
AuditReport run_audit(const TargetModel& target, int n_samples, std::uint64_t seed,
                      const AuditConfig& cfg = {});

}  // namespace rwmlab
