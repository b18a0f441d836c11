#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>

#include "lofkm/experiment.hpp"
#include "oracles.hpp"

using namespace lofkm;

namespace {

// Two gaussian-ish blobs with labels, written to a temp CSV.
std::string write_blobs_csv() {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    std::string path = "experiment_blobs.csv";
    std::ofstream out(path);
    out << "x,y,cls\n";
    for (int i = 0; i < 30; ++i)
        out << jitter(rng) << ',' << jitter(rng) << ",L\n";
    for (int i = 0; i < 30; ++i)
        out << 8.0 + jitter(rng) << ',' << 8.0 + jitter(rng) << ",R\n";
    return path;
}

// Same blobs without the label column.
std::string write_unlabelled_csv() {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    std::string path = "experiment_blobs_plain.csv";
    std::ofstream out(path);
    out << "x,y\n";
    for (int i = 0; i < 30; ++i)
        out << jitter(rng) << ',' << jitter(rng) << '\n';
    for (int i = 0; i < 30; ++i)
        out << 8.0 + jitter(rng) << ',' << 8.0 + jitter(rng) << '\n';
    return path;
}

ExperimentConfig small_config(const std::string& path) {
    ExperimentConfig config;
    config.data_path = path;
    config.t_values = {3, 4};
    config.restarts = 5;
    config.seed = 99;
    config.workers = 1;
    return config;
}

} // namespace

TEST_CASE("config validation") {
    ExperimentConfig config;
    config.t_values.clear();
    CHECK_THROWS(config.validate());
    config.t_values = {0};
    CHECK_THROWS(config.validate());
    config.t_values = {3};
    config.restarts = 0;
    CHECK_THROWS(config.validate());
    config.restarts = 1;
    config.run_km = config.run_lofkm = false;
    CHECK_THROWS(config.validate());
    config.run_km = true;
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("load_experiment_dataset resolves the last column as labels") {
    auto path = write_blobs_csv();
    auto config = small_config(path);
    auto ds = load_experiment_dataset(config);
    CHECK(ds.n == 60);
    CHECK(ds.d == 2);
    CHECK(ds.num_distinct_labels() == 2);

    std::remove(path.c_str());

    auto plain_path = write_unlabelled_csv();
    auto plain_config = small_config(plain_path);
    plain_config.label_mode = ExperimentConfig::LabelMode::None;
    auto unlabelled = load_experiment_dataset(plain_config);
    CHECK_FALSE(unlabelled.has_labels());
    CHECK(unlabelled.d == 2);
    std::remove(plain_path.c_str());
}

TEST_CASE("end-to-end experiment on separable blobs") {
    auto path = write_blobs_csv();
    auto config = small_config(path);
    auto report = run_experiment(config);
    std::remove(path.c_str());

    CHECK(report.k == 2); // derived from the two labels
    CHECK(report.n == 60);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].method == "KM");
    CHECK(report.rows[1].method == "LOFKM");
    REQUIRE(report.rows[0].per_t.size() == 2);
    REQUIRE(report.improvements.size() == 2);
    for (const auto& row : report.rows)
        for (const auto& cell : row.per_t) {
            CHECK(cell.avg_lcd >= 0.0);
            CHECK(cell.avg_lcd <= cell.max_lcd + 1e-12);
            // separable blobs: clustering should be clean every restart
            CHECK(cell.purity == doctest::Approx(1.0));
            CHECK(cell.silhouette > 0.9);
        }

    // improvement percentages recompute from the stored cells
    for (std::size_t ti = 0; ti < 2; ++ti) {
        const auto& km = report.rows[0].per_t[ti];
        const auto& lk = report.rows[1].per_t[ti];
        if (km.avg_lcd != 0.0)
            CHECK(report.improvements[ti].avg_lcd_pct ==
                  doctest::Approx((km.avg_lcd - lk.avg_lcd) / km.avg_lcd * 100.0));
        if (km.silhouette != 0.0)
            CHECK(report.improvements[ti].sil_pct ==
                  doctest::Approx((lk.silhouette - km.silhouette) / km.silhouette * 100.0));
    }
}

TEST_CASE("reports are identical regardless of worker count") {
    auto path = write_blobs_csv();
    auto config = small_config(path);
    config.workers = 1;
    auto a = run_experiment(config);
    config.workers = 4;
    auto b = run_experiment(config);
    config.workers = 0; // hardware concurrency
    auto c = run_experiment(config);
    std::remove(path.c_str());
    CHECK(a.to_tsv() == b.to_tsv());
    CHECK(a.to_tsv() == c.to_tsv());
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("json report round-trips the numbers") {
    auto path = write_blobs_csv();
    auto config = small_config(path);
    config.run_lofkm = false;
    auto report = run_experiment(config);
    std::remove(path.c_str());

    auto j = report.to_json();
    CHECK(j["dataset"] == "experiment_blobs");
    CHECK(j["k"] == 2);
    CHECK(j["methods"].contains("KM"));
    CHECK_FALSE(j["methods"].contains("LOFKM"));
    CHECK_FALSE(j.contains("improvement")); // only one method ran
    const auto& cell = j["methods"]["KM"]["3"];
    CHECK(cell["avg_lcd"].get<double>() ==
          doctest::Approx(report.rows[0].per_t[0].avg_lcd));
    CHECK(cell["purity"].get<double>() ==
          doctest::Approx(report.rows[0].per_t[0].purity));
}

TEST_CASE("tsv layout") {
    auto path = write_blobs_csv();
    auto config = small_config(path);
    auto report = run_experiment(config);
    std::remove(path.c_str());

    const std::string tsv = report.to_tsv();
    std::istringstream in(tsv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4); // header, KM, LOFKM, change_pct
    CHECK(lines[0] ==
          "dataset\tmethod\tavg_lcd_t3\tavg_lcd_t4\tmax_lcd_t3\tmax_lcd_t4"
          "\tsil_t3\tsil_t4\tpur_t3\tpur_t4");
    CHECK(lines[1].rfind("experiment_blobs\tKM\t", 0) == 0);
    CHECK(lines[2].rfind("experiment_blobs\tLOFKM\t", 0) == 0);
    CHECK(lines[3].rfind("experiment_blobs\tchange_pct\t", 0) == 0);
    for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(std::count(lines[i].begin(), lines[i].end(), '\t') == 9);
}

TEST_CASE("explicit k overrides the label count") {
    auto path = write_blobs_csv();
    auto config = small_config(path);
    config.k = 3;
    config.t_values = {3};
    config.restarts = 2;
    auto report = run_experiment(config);
    std::remove(path.c_str());
    CHECK(report.k == 3);
}

TEST_CASE("unlabelled data without k is rejected") {
    auto path = write_unlabelled_csv();
    auto config = small_config(path);
    config.label_mode = ExperimentConfig::LabelMode::None;
    CHECK_THROWS(run_experiment(config));
    config.k = 2;
    auto report = run_experiment(config); // silhouette/LCD fine, purity is nan
    std::remove(path.c_str());
    CHECK(std::isnan(report.rows[0].per_t[0].purity));
    CHECK(report.rows[0].per_t[0].silhouette > 0.0);
}
