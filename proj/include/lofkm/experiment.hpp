#ifndef LOFKM_EXPERIMENT_HPP
#define LOFKM_EXPERIMENT_HPP

#include <cmath>
#include <limits>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lofkm/core.hpp"
#include "lofkm/kmeans.hpp"
#include "lofkm/lcd.hpp"
#include "lofkm/metrics.hpp"

#include "json.hpp"

namespace lofkm {

struct ExperimentConfig {
    std::string data_path;
    std::string dataset_name; // defaults to the file stem

    enum class LabelMode { LastColumn, None, Explicit };
    LabelMode label_mode = LabelMode::LastColumn;
    ColumnRef label_ref;

    Norm normalization = Norm::None;
    std::optional<std::size_t> k; // default: number of distinct labels
    std::vector<std::size_t> t_values{3, 4, 5};
    std::size_t restarts = 100;
    std::uint64_t seed = 42;
    bool run_km = true;
    bool run_lofkm = true;
    std::size_t max_iters = 300;
    double stability_threshold = 0.0;
    // Benchmark default: prototypes sampled from the interior of the data's
    // bounding box. Sampling prototype space (rather than data objects) lets
    // sparse prototypes collapse into small or empty clusters, which is what
    // the published protocol's cluster-level numbers reflect.
    InitMode init = InitMode::Box;
    double init_scale = 0.6;
    std::size_t workers = 0; // 0 = hardware concurrency

    void validate() const {
        if (t_values.empty()) throw std::invalid_argument("config: need at least one t");
        for (std::size_t t : t_values)
            if (t < 1) throw std::invalid_argument("config: t values must be >= 1");
        if (restarts < 1) throw std::invalid_argument("config: restarts must be >= 1");
        if (k && *k < 1) throw std::invalid_argument("config: k must be >= 1");
        if (!run_km && !run_lofkm) throw std::invalid_argument("config: no methods selected");
    }
};

/// Restart-averaged metrics for one (method, t) cell.
struct MethodMetrics {
    double avg_lcd = 0.0;
    double max_lcd = 0.0;
    double silhouette = 0.0;
    double purity = 0.0;
};

struct ExperimentReport {
    std::string dataset;
    std::size_t n = 0, d = 0, k = 0, restarts = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> t_values;

    struct Row {
        std::string method;
        std::vector<MethodMetrics> per_t; // aligned with t_values
    };
    std::vector<Row> rows;

    /// Positive = LOFKM better. LCD uses (KM - LOFKM)/KM (lower is better);
    /// silhouette/purity use (LOFKM - KM)/KM (higher is better).
    struct Improvement {
        double avg_lcd_pct = 0.0;
        double max_lcd_pct = 0.0;
        double sil_pct = 0.0;
        double pur_pct = 0.0;
    };
    std::vector<Improvement> improvements; // aligned with t_values; empty unless both methods ran

    nlohmann::json to_json() const;
    std::string to_tsv() const;
};

namespace detail {

inline std::size_t csv_field_count(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line))
        if (!trim(line).empty()) return split_csv_line(line).size();
    throw std::runtime_error("'" + path + "' is empty");
}

inline std::string file_stem(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

inline std::string fixed4(double v) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace detail

inline Dataset load_experiment_dataset(const ExperimentConfig& config) {
    std::optional<ColumnRef> label;
    switch (config.label_mode) {
    case ExperimentConfig::LabelMode::None:
        break;
    case ExperimentConfig::LabelMode::Explicit:
        label = config.label_ref;
        break;
    case ExperimentConfig::LabelMode::LastColumn:
        label = ColumnRef{detail::csv_field_count(config.data_path) - 1};
        break;
    }
    return normalize(load_csv(config.data_path, label), config.normalization);
}

/// Full benchmark protocol: run the selected methods over paired seeded
/// restarts and average AvgLCD/MaxLCD (per t) plus silhouette and purity.
/// The KM clustering does not depend on t, so it is run once per restart
/// and scored against every t.
inline ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Dataset ds = load_experiment_dataset(config);

    std::size_t k;
    if (config.k) {
        k = *config.k;
    } else {
        if (!ds.has_labels())
            throw std::runtime_error("run_experiment: no labels to derive K from; pass k");
        k = ds.num_distinct_labels();
    }
    if (k > ds.n) throw std::runtime_error("run_experiment: K exceeds number of objects");

    LloydParams params;
    params.k = k;
    params.max_iters = config.max_iters;
    params.stability_threshold = config.stability_threshold;
    params.seed = config.seed;
    params.restarts = config.restarts;
    params.init = config.init;
    params.init_scale = config.init_scale;

    const std::size_t nt = config.t_values.size();
    const bool labelled = ds.has_labels();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    auto sil_hook = [k](const Dataset& d, const Clustering& c) {
        return k < 2 ? std::numeric_limits<double>::quiet_NaN() : silhouette(d, c);
    };
    auto pur_hook = [labelled](const Dataset& d, const Clustering& c) {
        return labelled ? purity(c, d.labels) : std::numeric_limits<double>::quiet_NaN();
    };

    ExperimentReport report;
    report.dataset = config.dataset_name.empty() ? detail::file_stem(config.data_path)
                                                 : config.dataset_name;
    report.n = ds.n;
    report.d = ds.d;
    report.k = k;
    report.restarts = config.restarts;
    report.seed = config.seed;
    report.t_values = config.t_values;

    std::vector<MethodMetrics> km_cells(nt), lofkm_cells(nt);

    if (config.run_km) {
        std::vector<MetricHook> hooks;
        for (std::size_t t : config.t_values) {
            hooks.emplace_back("avg_lcd_t" + std::to_string(t),
                               [t](const Dataset& d, const Clustering& c) {
                                   return lcd_dataset(d, c, t).avg_lcd;
                               });
            hooks.emplace_back("max_lcd_t" + std::to_string(t),
                               [t](const Dataset& d, const Clustering& c) {
                                   return lcd_dataset(d, c, t).max_lcd;
                               });
        }
        hooks.emplace_back("silhouette", sil_hook);
        hooks.emplace_back("purity", pur_hook);

        auto means = multi_restart(
            ds, [](const Dataset& d, const LloydParams& p) { return run_kmeans(d, p); }, params,
            hooks, config.workers);
        for (std::size_t ti = 0; ti < nt; ++ti) {
            km_cells[ti].avg_lcd = means[2 * ti].second;
            km_cells[ti].max_lcd = means[2 * ti + 1].second;
            km_cells[ti].silhouette = means[2 * nt].second;
            km_cells[ti].purity = means[2 * nt + 1].second;
        }
        report.rows.push_back({"KM", km_cells});
    }

    if (config.run_lofkm) {
        for (std::size_t ti = 0; ti < nt; ++ti) {
            const std::size_t t = config.t_values[ti];
            const WeightVector weights = lof_weights(ds, t); // decoupled from the Lloyd runs
            std::vector<MetricHook> hooks{
                {"avg_lcd",
                 [t](const Dataset& d, const Clustering& c) { return lcd_dataset(d, c, t).avg_lcd; }},
                {"max_lcd",
                 [t](const Dataset& d, const Clustering& c) { return lcd_dataset(d, c, t).max_lcd; }},
                {"silhouette", sil_hook},
                {"purity", pur_hook},
            };
            auto means = multi_restart(
                ds,
                [&weights](const Dataset& d, const LloydParams& p) {
                    return run_lloyd(d, weights, p);
                },
                params, hooks, config.workers);
            lofkm_cells[ti] = {means[0].second, means[1].second, means[2].second, means[3].second};
        }
        report.rows.push_back({"LOFKM", lofkm_cells});
    }

    if (config.run_km && config.run_lofkm) {
        for (std::size_t ti = 0; ti < nt; ++ti) {
            ExperimentReport::Improvement imp;
            const auto& km = km_cells[ti];
            const auto& lk = lofkm_cells[ti];
            imp.avg_lcd_pct = km.avg_lcd == 0.0 ? nan : (km.avg_lcd - lk.avg_lcd) / km.avg_lcd * 100.0;
            imp.max_lcd_pct = km.max_lcd == 0.0 ? nan : (km.max_lcd - lk.max_lcd) / km.max_lcd * 100.0;
            imp.sil_pct =
                km.silhouette == 0.0 ? nan : (lk.silhouette - km.silhouette) / km.silhouette * 100.0;
            imp.pur_pct = km.purity == 0.0 ? nan : (lk.purity - km.purity) / km.purity * 100.0;
            report.improvements.push_back(imp);
        }
    }
    return report;
}

inline nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["dataset"] = dataset;
    j["n"] = n;
    j["d"] = d;
    j["k"] = k;
    j["restarts"] = restarts;
    j["seed"] = seed;
    j["t_values"] = t_values;
    j["methods"] = nlohmann::json::object();
    for (const auto& row : rows) {
        nlohmann::json per_t = nlohmann::json::object();
        for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
            const auto& m = row.per_t[ti];
            per_t[std::to_string(t_values[ti])] = {{"avg_lcd", m.avg_lcd},
                                                   {"max_lcd", m.max_lcd},
                                                   {"silhouette", m.silhouette},
                                                   {"purity", m.purity}};
        }
        j["methods"][row.method] = per_t;
    }
    if (!improvements.empty()) {
        nlohmann::json per_t = nlohmann::json::object();
        for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
            const auto& imp = improvements[ti];
            per_t[std::to_string(t_values[ti])] = {{"avg_lcd_pct", imp.avg_lcd_pct},
                                                   {"max_lcd_pct", imp.max_lcd_pct},
                                                   {"sil_pct", imp.sil_pct},
                                                   {"pur_pct", imp.pur_pct}};
        }
        j["improvement"] = per_t;
    }
    return j;
}

inline std::string ExperimentReport::to_tsv() const {
    std::ostringstream out;
    out << "dataset\tmethod";
    const char* metrics[] = {"avg_lcd", "max_lcd", "sil", "pur"};
    for (const char* m : metrics)
        for (std::size_t t : t_values)
            out << '\t' << m << "_t" << t;
    out << '\n';
    for (const auto& row : rows) {
        out << dataset << '\t' << row.method;
        for (std::size_t ti = 0; ti < t_values.size(); ++ti)
            out << '\t' << detail::fixed4(row.per_t[ti].avg_lcd);
        for (std::size_t ti = 0; ti < t_values.size(); ++ti)
            out << '\t' << detail::fixed4(row.per_t[ti].max_lcd);
        for (std::size_t ti = 0; ti < t_values.size(); ++ti)
            out << '\t' << detail::fixed4(row.per_t[ti].silhouette);
        for (std::size_t ti = 0; ti < t_values.size(); ++ti)
            out << '\t' << detail::fixed4(row.per_t[ti].purity);
        out << '\n';
    }
    if (!improvements.empty()) {
        out << dataset << "\tchange_pct";
        for (std::size_t ti = 0; ti < t_values.size(); ++ti)
            out << '\t' << detail::fixed4(improvements[ti].avg_lcd_pct);
        for (std::size_t ti = 0; ti < t_values.size(); ++ti)
            out << '\t' << detail::fixed4(improvements[ti].max_lcd_pct);
        for (std::size_t ti = 0; ti < t_values.size(); ++ti)
            out << '\t' << detail::fixed4(improvements[ti].sil_pct);
        for (std::size_t ti = 0; ti < t_values.size(); ++ti)
            out << '\t' << detail::fixed4(improvements[ti].pur_pct);
        out << '\n';
    }
    return out.str();
}

} // namespace lofkm

#endif // LOFKM_EXPERIMENT_HPP
