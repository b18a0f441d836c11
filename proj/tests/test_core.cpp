#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>

#include "lofkm/core.hpp"
#include "oracles.hpp"

using namespace lofkm;

namespace {

std::string write_temp(const std::string& contents) {
    static int counter = 0;
    std::string path = "core_test_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path);
    out << contents;
    return path;
}

} // namespace

TEST_CASE("distance basics") {
    std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
    CHECK(distance(a, a) == 0.0);
    CHECK(distance(a, b, Metric::Euclidean) == doctest::Approx(5.0));
    CHECK(distance(a, b, Metric::SquaredEuclidean) == doctest::Approx(25.0));
    std::vector<double> c{1.0};
    CHECK_THROWS(distance(a, c));
}

TEST_CASE("euclidean metric axioms on random pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<double> x(4), y(4), z(4);
        for (int i = 0; i < 4; ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
            z[i] = u(rng);
        }
        const double dxy = distance(x, y);
        CHECK(dxy >= 0.0);
        CHECK(dxy == doctest::Approx(distance(y, x)).epsilon(1e-12));
        CHECK(dxy <= distance(x, z) + distance(z, y) + 1e-9);
    }
}

TEST_CASE("load_csv parses the yeast-style layout") {
    auto path = write_temp("f1,f2,class\n0.5,0.1,A\n0.2,0.3,B\n0.2,0.4,A\n");
    auto ds = load_csv(path, ColumnRef{std::size_t{2}});
    CHECK(ds.n == 3);
    CHECK(ds.d == 2);
    CHECK(ds.labels == std::vector<std::string>{"A", "B", "A"});
    CHECK(ds.attribute_names == std::vector<std::string>{"f1", "f2"});
    CHECK(ds.num_distinct_labels() == 2);
    std::remove(path.c_str());
}

TEST_CASE("load_csv label column by name") {
    auto path = write_temp("x,y,cls\n1,2,P\n3,4,Q\n");
    auto ds = load_csv(path, ColumnRef{std::string{"cls"}});
    CHECK(ds.d == 2);
    CHECK(ds.labels[1] == "Q");
    CHECK_THROWS(load_csv(path, ColumnRef{std::string{"nope"}}));
    std::remove(path.c_str());
}

TEST_CASE("load_csv single row with label") {
    auto path = write_temp("1.0,2.0,A\n");
    auto ds = load_csv(path, ColumnRef{std::size_t{2}});
    CHECK(ds.n == 1);
    CHECK(ds.d == 2);
    CHECK(ds.labels == std::vector<std::string>{"A"});
    std::remove(path.c_str());
}

TEST_CASE("load_csv error cases") {
    auto bad = write_temp("x,y\n1,oops\n");
    CHECK_THROWS_WITH_AS(load_csv(bad), doctest::Contains("row 1, column 2"),
                         std::runtime_error);
    std::remove(bad.c_str());

    auto ragged = write_temp("1,2\n3,4,5\n");
    CHECK_THROWS_WITH_AS(load_csv(ragged), doctest::Contains("ragged"), std::runtime_error);
    std::remove(ragged.c_str());

    auto empty = write_temp("");
    CHECK_THROWS(load_csv(empty));
    std::remove(empty.c_str());

    CHECK_THROWS(load_csv("no_such_file_anywhere.csv"));
}

TEST_CASE("load_csv after write_csv is identity") {
    std::mt19937_64 rng(11);
    auto ds = oracles::random_dataset(rng, 20, 3);
    auto path = write_temp("");
    write_csv(ds, path);
    auto back = load_csv(path);
    REQUIRE(back.n == ds.n);
    REQUIRE(back.d == ds.d);
    for (std::size_t i = 0; i < ds.values.size(); ++i)
        CHECK(back.values[i] == ds.values[i]);
    std::remove(path.c_str());
}

TEST_CASE("normalize none is the identity") {
    std::mt19937_64 rng(3);
    auto ds = oracles::random_dataset(rng, 15, 4);
    auto out = normalize(ds, Norm::None);
    CHECK(out.values == ds.values);
}

TEST_CASE("normalize minmax endpoints") {
    Dataset ds(2, 1, {0.0, 10.0});
    auto out = normalize(ds, Norm::MinMax);
    CHECK(out.values[0] == doctest::Approx(0.0));
    CHECK(out.values[1] == doctest::Approx(1.0));

    Dataset flat(3, 1, {5.0, 5.0, 5.0});
    auto fout = normalize(flat, Norm::MinMax);
    for (double v : fout.values) CHECK(v == 0.0);
}

TEST_CASE("normalize zscore gives mean 0, stddev 1") {
    Dataset ds(3, 1, {1.0, 2.0, 3.0});
    auto out = normalize(ds, Norm::ZScore);
    // z = (x - 2) / sqrt(2/3)
    const double sd = std::sqrt(2.0 / 3.0);
    CHECK(out.values[0] == doctest::Approx(-1.0 / sd));
    CHECK(out.values[1] == doctest::Approx(0.0));
    CHECK(out.values[2] == doctest::Approx(1.0 / sd));
    double mean = 0.0, var = 0.0;
    for (double v : out.values) mean += v;
    mean /= 3.0;
    for (double v : out.values) var += (v - mean) * (v - mean);
    var /= 3.0;
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);

    // constant attribute passes through
    Dataset flat(3, 1, {4.0, 4.0, 4.0});
    auto fout = normalize(flat, Norm::ZScore);
    CHECK(fout.values == flat.values);
}

TEST_CASE("dataset invariants") {
    CHECK_THROWS(Dataset(0, 1, {}));
    CHECK_THROWS(Dataset(1, 1, {std::numeric_limits<double>::quiet_NaN()}));
    CHECK_THROWS(Dataset(2, 1, {1.0, 2.0}, {"only-one"}));
}
