#include "rwmlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rwmlab/assumption_audit.hpp"
#include "rwmlab/diffusion_bench.hpp"
#include "rwmlab/hier_gauss.hpp"
#include "rwmlab/io.hpp"
#include "rwmlab/product_target.hpp"
#include "rwmlab/rwm_kernel.hpp"
#include "rwmlab/scaling_analysis.hpp"

namespace rwmlab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config access with field-path diagnostics.

const json& need(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError(path + "." + key, "missing required field");
    return j.at(key);
}

double num_field(const json& j, const std::string& key, const std::string& path, double def) {
    if (!j.is_object() || !j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
    return v.get<double>();
}

double num_field(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
    return v.get<double>();
}

long int_field(const json& j, const std::string& key, const std::string& path, long def) {
    const double v = num_field(j, key, path, static_cast<double>(def));
    if (v != std::floor(v)) throw ConfigError(path + "." + key, "expected an integer");
    return static_cast<long>(v);
}

std::string str_field(const json& j, const std::string& key, const std::string& path,
                      const std::string& def) {
    if (!j.is_object() || !j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

void check(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

// ---------------------------------------------------------------------------
// Model specification.

struct ModelSpec {
    std::string family;  // product | flat | dense-coupling | hier-gauss | hier-gauss-realistic
    DensitySpec density;
    int d = 0;            // product-style families
    int n = 0;            // hierarchy group count
    double coupling = 1.0;
    std::string data_source = "synthetic";  // synthetic | constant | file | inline
    std::uint64_t data_seed = 7;
    double data_constant = 0.0;
    std::string data_file;
    std::vector<double> data_inline;  // row-major n x n
    HierGaussHyper hyper;
};

bool is_hier(const ModelSpec& s) {
    return s.family == "hier-gauss" || s.family == "hier-gauss-realistic";
}

ModelSpec parse_model(const json& cfg) {
    const json& m = need(cfg, "model", "config");
    ModelSpec spec;
    spec.family = str_field(m, "family", "model", "");
    check(!spec.family.empty(), "model.family", "missing required field");

    if (spec.family == "product" || spec.family == "flat" || spec.family == "dense-coupling") {
        spec.d = static_cast<int>(int_field(m, "d", "model", 0));
        check(spec.d >= 2, "model.d", "dimension must be >= 2 (proposal scale needs d - 1 > 0)");
        if (spec.family == "product") {
            const std::string dens = str_field(m, "density", "model", "standard-normal");
            try {
                spec.density = DensitySpec::parse(dens);
            } catch (const std::exception& e) {
                throw ConfigError("model.density", e.what());
            }
        }
        if (spec.family == "dense-coupling")
            spec.coupling = num_field(m, "coupling", "model", 1.0);
    } else if (is_hier(spec)) {
        spec.n = static_cast<int>(int_field(m, "n", "model", 0));
        check(spec.n >= 2, "model.n", "group count must be >= 2");
        if (m.contains("data")) {
            const json& data = m.at("data");
            spec.data_source = str_field(data, "source", "model.data", "synthetic");
            spec.data_seed = static_cast<std::uint64_t>(
                int_field(data, "seed", "model.data", static_cast<long>(spec.data_seed)));
            spec.data_constant = num_field(data, "value", "model.data", 0.0);
            spec.data_file = str_field(data, "path", "model.data", "");
            check(spec.data_source == "synthetic" || spec.data_source == "constant" ||
                      spec.data_source == "file" || spec.data_source == "inline",
                  "model.data.source", "expected synthetic | constant | file | inline");
            if (spec.data_source == "inline") {
                const json& vals = need(data, "values", "model.data");
                check(vals.is_array(), "model.data.values", "expected an n x n array");
                for (const auto& row : vals) {
                    check(row.is_array(), "model.data.values", "expected an n x n array");
                    for (const auto& v : row)
                        spec.data_inline.push_back(v.get<double>());
                }
                check(spec.data_inline.size() ==
                          static_cast<std::size_t>(spec.n) * spec.n,
                      "model.data.values",
                      "expected " + std::to_string(spec.n * spec.n) + " values");
            }
            if (spec.data_source == "file") {
                check(!spec.data_file.empty(), "model.data.path", "missing required field");
                check(fs::exists(spec.data_file), "model.data.path",
                      "file not found: " + spec.data_file);
            }
        }
        spec.hyper.V = num_field(m, "V", "model", 1.0);
        spec.hyper.W = num_field(m, "W", "model", 1.0);
        spec.hyper.a = num_field(m, "a", "model", 2.0);
        spec.hyper.b = num_field(m, "b", "model", 1.0);
        check(spec.hyper.V > 0 && spec.hyper.W > 0 && spec.hyper.a > 0 && spec.hyper.b > 0,
              "model.V/W/a/b", "variance hyperparameters must be positive");
    } else {
        throw ConfigError("model.family",
                          "unknown family '" + spec.family +
                              "' (expected product | flat | dense-coupling | hier-gauss | "
                              "hier-gauss-realistic)");
    }
    return spec;
}

HierGaussData load_hier_data(const ModelSpec& spec) {
    if (spec.data_source == "synthetic") return synth_data_from_model(spec.n, spec.data_seed);
    if (spec.data_source == "constant") return synth_data_constant(spec.n, spec.data_constant);
    if (spec.data_source == "inline") {
        HierGaussData data;
        data.n = spec.n;
        data.Y = spec.data_inline;
        return data;
    }
    // CSV: n rows of n comma-separated values.
    HierGaussData data;
    data.n = spec.n;
    std::ifstream in(spec.data_file);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) data.Y.push_back(std::stod(cell));
    }
    check(data.Y.size() == static_cast<std::size_t>(spec.n) * spec.n, "model.data.path",
          "expected " + std::to_string(spec.n * spec.n) + " values, got " +
              std::to_string(data.Y.size()));
    return data;
}

TargetModel build_model(const ModelSpec& spec) {
    if (spec.family == "product") return build_iid_product(spec.density, spec.d);
    if (spec.family == "flat") return build_flat_target(spec.d);
    if (spec.family == "dense-coupling") return build_dense_coupling_toy(spec.d, spec.coupling);
    HierGaussData data = load_hier_data(spec);
    data.hyper = spec.hyper;
    return spec.family == "hier-gauss" ? build_hier_gauss(data)
                                       : build_hier_gauss_realistic(data);
}

// size = d for product-style families, group count n for hierarchies.
std::function<TargetModel(int)> make_family(const ModelSpec& spec) {
    return [spec](int size) {
        ModelSpec s = spec;
        if (is_hier(s))
            s.n = size;
        else
            s.d = size;
        return build_model(s);
    };
}

// ---------------------------------------------------------------------------
// Resolved experiment plan.

struct Plan {
    std::string experiment;
    ModelSpec model;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "results";
    json raw;

    // sweep-ell / reproduce-4-1
    int n_outer = 2000, n_inner = 50, grid_points = 24, rough_samples = 2000;
    double grid_lo = 0.0, grid_hi = 0.0;  // 0 => resolved from roughness
    std::vector<double> grid_values;

    // audit
    int audit_samples = 2000;
    AuditConfig audit_cfg;

    // diffusion-compare / complexity-scan
    double ell = 2.38;
    std::vector<int> size_list;
    double T = 1.0;
    std::vector<double> time_grid;
    int n_paths = 5000;
    bool fixed_start = false;
    double start_x = 0.0;
    double clamp = 5.0;
    double dt = 0.0;
    std::string metric = "iact";
    long iters_per_d = 400;
    int replicates = 4;
};

int env_threads() {
    if (const char* env = std::getenv("RWMLAB_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

Plan parse_plan(const std::string& config_path, const CliOverrides& overrides) {
    check(fs::exists(config_path), "config", "file not found: " + config_path);
    json cfg;
    try {
        cfg = json::parse(read_text(config_path));
    } catch (const std::exception& e) {
        throw ConfigError("config", std::string("JSON parse failure: ") + e.what());
    }

    Plan plan;
    plan.raw = cfg;
    plan.experiment = str_field(cfg, "experiment", "config", "");
    check(!plan.experiment.empty(), "experiment", "missing required field");
    const bool known = plan.experiment == "sweep-ell" || plan.experiment == "audit" ||
                       plan.experiment == "diffusion-compare" ||
                       plan.experiment == "complexity-scan" ||
                       plan.experiment == "reproduce-4-1";
    check(known, "experiment",
          "unknown experiment '" + plan.experiment +
              "' (expected sweep-ell | audit | diffusion-compare | complexity-scan | "
              "reproduce-4-1)");

    plan.seed = overrides.seed.value_or(
        static_cast<std::uint64_t>(int_field(cfg, "seed", "config", 1)));
    plan.threads = overrides.threads.value_or(
        static_cast<int>(int_field(cfg, "threads", "config", env_threads())));
    check(plan.threads >= 1, "threads", "must be >= 1");
    plan.out_dir = overrides.out_dir.value_or(str_field(cfg, "out_dir", "config", "results"));

    if (plan.experiment == "reproduce-4-1") {
        // Fixed pipeline over the all-Gaussian hierarchy; only sizes and
        // budgets are configurable.
        plan.model.family = "hier-gauss";
        plan.model.n = static_cast<int>(int_field(cfg, "n", "config", 15));
        check(plan.model.n >= 2, "n", "group count must be >= 2");
        plan.model.data_seed =
            static_cast<std::uint64_t>(int_field(cfg, "data_seed", "config", 7));
        plan.audit_samples = static_cast<int>(int_field(cfg, "audit_samples", "config", 5000));
    } else {
        plan.model = parse_model(cfg);
    }

    const json sweep = cfg.contains("sweep") ? cfg.at("sweep") : json::object();
    plan.n_outer = static_cast<int>(int_field(sweep, "n_outer", "sweep", plan.n_outer));
    plan.n_inner = static_cast<int>(int_field(sweep, "n_inner", "sweep", plan.n_inner));
    plan.grid_points = static_cast<int>(int_field(sweep, "grid_points", "sweep",
                                                  plan.grid_points));
    plan.rough_samples = static_cast<int>(int_field(sweep, "rough_samples", "sweep",
                                                    plan.rough_samples));
    plan.grid_lo = num_field(sweep, "grid_lo", "sweep", 0.0);
    plan.grid_hi = num_field(sweep, "grid_hi", "sweep", 0.0);
    if (sweep.contains("values")) {
        for (const auto& v : sweep.at("values")) plan.grid_values.push_back(v.get<double>());
        check(plan.grid_values.size() >= 3, "sweep.values", "need >= 3 grid values");
        for (std::size_t i = 0; i < plan.grid_values.size(); ++i)
            check(plan.grid_values[i] > 0 &&
                      (i == 0 || plan.grid_values[i] > plan.grid_values[i - 1]),
                  "sweep.values", "grid must be positive and strictly increasing");
    }
    check(plan.n_outer >= 1 && plan.n_inner >= 1, "sweep.n_outer/n_inner", "must be >= 1");
    check(plan.grid_points >= 3, "sweep.grid_points", "must be >= 3");
    check(plan.rough_samples >= 2, "sweep.rough_samples", "must be >= 2");
    check((plan.grid_lo == 0.0 && plan.grid_hi == 0.0) ||
              (plan.grid_lo > 0.0 && plan.grid_hi > plan.grid_lo),
          "sweep.grid_lo/grid_hi", "need 0 < lo < hi (or omit both for the automatic bracket)");

    if (cfg.contains("audit")) {
        const json& a = cfg.at("audit");
        plan.audit_samples = static_cast<int>(int_field(a, "n_samples", "audit",
                                                        plan.audit_samples));
        plan.audit_cfg.eps_far = num_field(a, "eps_far", "audit", plan.audit_cfg.eps_far);
        plan.audit_cfg.cv_threshold =
            num_field(a, "cv_threshold", "audit", plan.audit_cfg.cv_threshold);
        plan.audit_cfg.a6_threshold =
            num_field(a, "a6_threshold", "audit", plan.audit_cfg.a6_threshold);
        plan.audit_cfg.alpha = num_field(a, "alpha", "audit", plan.audit_cfg.alpha);
        check(plan.audit_cfg.alpha > 0.0 && plan.audit_cfg.alpha < 0.5, "audit.alpha",
              "must lie in (0, 1/2)");
    }
    check(plan.audit_samples >= 2, "audit.n_samples", "must be >= 2");
    plan.audit_cfg.seed = plan.seed;

    const char* scan_key = plan.experiment == "complexity-scan" ? "complexity" : "diffusion";
    if (cfg.contains(scan_key)) {
        const json& s = cfg.at(scan_key);
        plan.ell = num_field(s, "ell", scan_key, plan.ell);
        plan.T = num_field(s, "T", scan_key, plan.T);
        plan.n_paths = static_cast<int>(int_field(s, "n_paths", scan_key, plan.n_paths));
        plan.fixed_start = s.value("fixed_start", plan.fixed_start);
        plan.start_x = num_field(s, "start_x", scan_key, plan.start_x);
        plan.clamp = num_field(s, "clamp", scan_key, plan.clamp);
        plan.dt = num_field(s, "dt", scan_key, plan.dt);
        plan.metric = str_field(s, "metric", scan_key, plan.metric);
        plan.iters_per_d = int_field(s, "iters_per_d", scan_key, plan.iters_per_d);
        plan.replicates = static_cast<int>(int_field(s, "replicates", scan_key,
                                                     plan.replicates));
        if (s.contains("size_list"))
            for (const auto& v : s.at("size_list")) plan.size_list.push_back(v.get<int>());
        if (s.contains("grid"))
            for (const auto& v : s.at("grid")) plan.time_grid.push_back(v.get<double>());
    }
    check(plan.ell > 0.0, std::string(scan_key) + ".ell", "must be > 0");

    if (plan.experiment == "diffusion-compare") {
        check(!plan.size_list.empty(), "diffusion.size_list", "missing required field");
        check(plan.model.family == "product", "model.family",
              "diffusion-compare needs the analytic first-coordinate score of a product target");
        check(plan.T >= 0.0, "diffusion.T", "must be >= 0");
        check(plan.n_paths >= 2, "diffusion.n_paths", "must be >= 2");
        for (double t : plan.time_grid)
            check(t >= 0.0 && t <= plan.T, "diffusion.grid", "times must lie in [0, T]");
    }
    if (plan.experiment == "complexity-scan") {
        check(plan.size_list.size() >= 4, "complexity.size_list", "need >= 4 entries");
        check(plan.metric == "iact" || plan.metric == "w1-threshold", "complexity.metric",
              "expected iact | w1-threshold");
        check(plan.replicates >= 1, "complexity.replicates", "must be >= 1");
        check(plan.iters_per_d >= 1, "complexity.iters_per_d", "must be >= 1");
        check(!is_hier(plan.model) || plan.model.data_source == "synthetic" ||
                  plan.model.data_source == "constant",
              "model.data.source", "family scans need synthetic or constant data");
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Execution.

std::pair<double, double> resolve_bracket(const Plan& plan, const TargetModel& model,
                                          RoughnessStats& rough_out) {
    Rng rng = make_rng(plan.seed, 0x5eed);
    rough_out = roughness_stats(model, plan.rough_samples, rng);
    if (plan.grid_lo > 0.0) return {plan.grid_lo, plan.grid_hi};
    return default_bracket(rough_out);
}

json record_to_json(const AuditRecord& rec) {
    json stats = json::array();
    for (const auto& s : rec.stats) {
        json e{{"name", s.name}, {"value", s.value}};
        if (std::isfinite(s.threshold)) e["threshold"] = s.threshold;
        stats.push_back(e);
    }
    return {{"check", rec.check_id},
            {"verdict", to_string(rec.verdict)},
            {"sample_size", rec.sample_size},
            {"note", rec.note},
            {"stats", stats}};
}

struct Artifacts {
    std::vector<std::string> names;
    json csv_columns = json::object();

    void csv(const fs::path& dir, const std::string& name, const CsvTable& table) {
        write_csv((dir / name).string(), table);
        names.push_back(name);
        csv_columns[name] = table.header;
    }
    void summary(const fs::path& dir, const json& j) {
        write_text((dir / "summary.json").string(), j.dump(2) + "\n");
        names.push_back("summary.json");
    }
};

void run_sweep(const Plan& plan, const fs::path& out, Artifacts& art, json& summary) {
    const TargetModel model = build_model(plan.model);
    RoughnessStats rough;
    const auto [lo, hi] = resolve_bracket(plan, model, rough);
    const std::vector<double> grid =
        plan.grid_values.empty() ? ell_grid(lo, hi, plan.grid_points) : plan.grid_values;

    const EsjdCurve curve =
        sweep_esjd(model, grid, plan.n_outer, plan.n_inner, plan.seed, plan.threads);
    const BoundReport bound = check_upper_bound(curve);

    CsvTable table;
    table.header = {"ell",       "esjd_mean", "esjd_se",        "accept_mean",
                    "accept_se", "asymptotic_esjd", "asymptotic_accept"};
    for (const auto& p : curve.points)
        table.rows.push_back({p.ell, p.esjd_mean, p.esjd_se, p.accept_mean, p.accept_se,
                              asymptotic_esjd(p.ell, model.dim, rough),
                              asymptotic_accept(p.ell, rough)});
    art.csv(out, "esjd_curve.csv", table);

    summary["model"] = model.name;
    summary["d"] = model.dim;
    summary["ell_hat"] = curve.ell_hat;
    summary["esjd_at_opt"] = curve.esjd_at_opt;
    summary["accept_at_opt"] = curve.accept_at_opt;
    summary["accept_se_at_opt"] = curve.accept_se_at_opt;
    summary["at_boundary"] = curve.at_boundary;
    summary["bound"] = {{"holds", bound.holds},
                        {"threshold", bound.threshold},
                        {"insufficient_scan", bound.insufficient_scan},
                        {"note", bound.note}};
    summary["roughness"] = {{"mean", rough.mean},
                            {"sd", rough.sd},
                            {"cv", rough.cv},
                            {"mean_sqrt", rough.mean_sqrt},
                            {"n", rough.samples.size()}};
    summary["theory"] = {{"ell_hat", 2.38 / rough.mean_sqrt},
                         {"speed", 1.3 / (rough.mean_sqrt * rough.mean_sqrt)}};
}

void run_audit_experiment(const Plan& plan, const fs::path& out, Artifacts& art,
                          json& summary) {
    const TargetModel model = build_model(plan.model);
    const AuditReport report = run_audit(model, plan.audit_samples, plan.seed, plan.audit_cfg);
    const GraphMetrics gm = graph_metrics(model);

    json records = json::array();
    for (const auto& rec : report.records) records.push_back(record_to_json(rec));
    json audit_json{{"model", model.name},
                    {"d", model.dim},
                    {"n_samples", plan.audit_samples},
                    {"typical_set",
                     {{"lo", report.typical_set.lo},
                      {"hi", report.typical_set.hi},
                      {"q", report.typical_set.q},
                      {"low_power", report.typical_set.low_power}}},
                    {"graph",
                     {{"known", gm.known},
                      {"l_d", gm.l_d},
                      {"m_d", gm.m_d},
                      {"max_clique_card", gm.max_clique_card},
                      {"triangle_count", gm.triangle_count}}},
                    {"records", records}};
    write_text((out / "audit.json").string(), audit_json.dump(2) + "\n");
    art.names.push_back("audit.json");
    summary = audit_json;
}

void run_diffusion(const Plan& plan, const fs::path& out, Artifacts& art, json& summary) {
    DiffusionCompareConfig cfg;
    cfg.ell = plan.ell;
    cfg.d_list = plan.size_list;
    cfg.T = plan.T;
    cfg.grid = plan.time_grid;
    cfg.n_paths = plan.n_paths;
    cfg.dt = plan.dt;
    cfg.clamp = plan.clamp;
    cfg.fixed_start = plan.fixed_start;
    cfg.start_x = plan.start_x;
    cfg.seed = plan.seed;
    cfg.threads = plan.threads;

    const auto reports = diffusion_compare(make_family(plan.model), cfg);
    json per_d = json::array();
    for (const auto& rep : reports) {
        CsvTable table;
        table.header = {"t", "w1_plain", "w1_bounded", "se"};
        for (std::size_t g = 0; g < rep.times.size(); ++g)
            table.rows.push_back({rep.times[g], rep.distances[g], rep.bounded[g], rep.se[g]});
        art.csv(out, "w1_d" + std::to_string(rep.d) + ".csv", table);
        per_d.push_back({{"d", rep.d},
                         {"max_distance", rep.max_distance},
                         {"clamp_bound", rep.clamp_bound}});
    }
    summary["ell"] = plan.ell;
    summary["fixed_start"] = plan.fixed_start;
    summary["per_d"] = per_d;
    if (reports.size() >= 2)
        summary["trend_non_increasing"] =
            reports.back().max_distance <= reports.front().max_distance + 0.02;
}

void run_complexity(const Plan& plan, const fs::path& out, Artifacts& art, json& summary) {
    ComplexityConfig cfg;
    cfg.metric = plan.metric == "iact" ? ComplexityMetric::iact : ComplexityMetric::w1_threshold;
    cfg.d_list = plan.size_list;
    cfg.ell_rule = [ell = plan.ell](int) { return ell; };
    cfg.iters_per_d = plan.iters_per_d;
    cfg.replicates = plan.replicates;
    cfg.seed = plan.seed;
    cfg.threads = plan.threads;

    const ComplexityScanReport report = complexity_scan(make_family(plan.model), cfg);
    CsvTable table;
    table.header = {"d", "value", "flagged", "window", "truncation_lag"};
    json entries = json::array();
    for (const auto& e : report.entries) {
        table.rows.push_back({static_cast<double>(e.d), e.value, e.flagged ? 1.0 : 0.0,
                              static_cast<double>(e.window),
                              static_cast<double>(e.truncation_lag)});
        entries.push_back({{"d", e.d}, {"value", e.value}, {"flagged", e.flagged}});
    }
    art.csv(out, "complexity.csv", table);
    summary["metric"] = plan.metric;
    summary["slope"] = report.slope;
    summary["slope_se"] = report.slope_se;
    summary["slope_ci"] = {report.slope - 2.0 * report.slope_se,
                           report.slope + 2.0 * report.slope_se};
    summary["entries"] = entries;
}

void run_reproduce_41(const Plan& plan, const fs::path& out, Artifacts& art, json& summary) {
    run_sweep(plan, out, art, summary);
    const TargetModel model = build_model(plan.model);
    Rng rng = make_rng(plan.seed, 0x41);
    auto sampler = model.make_stationary_sampler();
    std::vector<Vec> points(plan.audit_samples);
    for (auto& p : points) p = sampler(rng);
    const AuditRecord rs = rs_diagnostic(model, points);
    summary["n"] = plan.model.n;
    summary["rs"] = record_to_json(rs);
}

void write_manifest(const Plan& plan, const fs::path& out, const Artifacts& art,
                    double wall_s) {
    json entry{{"experiment", plan.experiment},
               {"config_hash", fnv1a_hex(plan.raw.dump())},
               {"seed", plan.seed},
               {"threads", plan.threads},
               {"versions", {{"rwmlab", "1.0.0"}, {"cxx_standard", __cplusplus}}},
               {"wall_time_s", wall_s},
               {"artifacts", art.names},
               {"csv_columns", art.csv_columns}};
    const fs::path path = out / "manifest.json";
    json manifest = json::array();
    if (fs::exists(path)) {
        try {
            manifest = json::parse(read_text(path.string()));
        } catch (...) {
            manifest = json::array();
        }
        if (!manifest.is_array()) manifest = json::array({manifest});
    }
    manifest.push_back(entry);
    write_text(path.string(), manifest.dump(2) + "\n");
}

void describe_plan(const Plan& plan, std::ostream& out) {
    out << "experiment: " << plan.experiment << "\n";
    if (plan.experiment == "reproduce-4-1")
        out << "model: hier-gauss n=" << plan.model.n
            << " (d=" << plan.model.n * plan.model.n + plan.model.n + 1 << ")\n";
    else
        out << "model: " << build_model(plan.model).name << "\n";
    out << "seed: " << plan.seed << "  threads: " << plan.threads << "\n";
    out << "out_dir: " << plan.out_dir << "\n";

    if (plan.experiment == "sweep-ell" || plan.experiment == "reproduce-4-1") {
        out << "budget: n_outer=" << plan.n_outer << " n_inner=" << plan.n_inner
            << " rough_samples=" << plan.rough_samples << "\n";
        std::vector<double> grid = plan.grid_values;
        if (grid.empty()) {
            double lo = plan.grid_lo, hi = plan.grid_hi;
            if (lo == 0.0) {
                const TargetModel model = build_model(plan.model);
                Rng rng = make_rng(plan.seed, 0x5eed);
                const RoughnessStats probe = roughness_stats(model, 200, rng);
                std::tie(lo, hi) = default_bracket(probe);
                out << "bracket: resolved from 200-sample roughness probe\n";
            }
            grid = ell_grid(lo, hi, plan.grid_points);
        }
        out << "ell grid (" << grid.size() << "):";
        for (double g : grid) out << " " << g;
        out << "\n";
    } else if (plan.experiment == "audit") {
        out << "budget: n_samples=" << plan.audit_samples << "\n";
    } else if (plan.experiment == "diffusion-compare") {
        out << "budget: n_paths=" << plan.n_paths << " T=" << plan.T << " ell=" << plan.ell
            << "\nsizes:";
        for (int s : plan.size_list) out << " " << s;
        out << "\n";
    } else if (plan.experiment == "complexity-scan") {
        out << "metric: " << plan.metric << "  ell=" << plan.ell
            << "  iters_per_d=" << plan.iters_per_d << "\nsizes:";
        for (int s : plan.size_list) out << " " << s;
        out << "\n";
    }
}

}  // namespace

int run_experiment(const std::string& config_path, const CliOverrides& overrides,
                   std::ostream& out, std::ostream& err) {
    Plan plan;
    try {
        plan = parse_plan(config_path, overrides);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        const fs::path dir(plan.out_dir);
        fs::create_directories(dir);
        const auto t0 = std::chrono::steady_clock::now();
        Artifacts art;
        json summary = json::object();
        if (plan.experiment == "sweep-ell")
            run_sweep(plan, dir, art, summary);
        else if (plan.experiment == "audit")
            run_audit_experiment(plan, dir, art, summary);
        else if (plan.experiment == "diffusion-compare")
            run_diffusion(plan, dir, art, summary);
        else if (plan.experiment == "complexity-scan")
            run_complexity(plan, dir, art, summary);
        else
            run_reproduce_41(plan, dir, art, summary);
        art.summary(dir, summary);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(plan, dir, art, wall);
        out << plan.experiment << ": wrote " << art.names.size() << " artifacts to "
            << plan.out_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "numeric failure in " << plan.experiment << ": " << e.what() << "\n";
        return 2;
    }
}

int validate_experiment(const std::string& config_path, const CliOverrides& overrides,
                        std::ostream& out, std::ostream& err) {
    try {
        const Plan plan = parse_plan(config_path, overrides);
        describe_plan(plan, out);
        out << "config ok\n";
        return 0;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rwmlab
