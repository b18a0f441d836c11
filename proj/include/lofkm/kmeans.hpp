#ifndef LOFKM_KMEANS_HPP
#define LOFKM_KMEANS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lofkm/core.hpp"
#include "lofkm/lof.hpp"

namespace lofkm {

/// A hard partition of the dataset into k clusters plus their prototypes.
struct Clustering {
    std::size_t k = 0;
    std::vector<std::size_t> assignments; // size n, values in [0, k)
    std::vector<double> centroids;        // row-major, k * d
    std::size_t iterations_run = 0;
    bool converged = false;

    std::span<const double> centroid(std::size_t c, std::size_t d) const {
        return {centroids.data() + c * d, d};
    }

    std::vector<std::vector<std::size_t>> members() const {
        std::vector<std::vector<std::size_t>> by_cluster(k);
        for (std::size_t i = 0; i < assignments.size(); ++i)
            by_cluster[assignments[i]].push_back(i);
        return by_cluster;
    }
};

/// Prototype initialization scheme.
///  - Forgy: k distinct objects drawn uniformly at random.
///  - Box: k points drawn uniformly from the axis-aligned box centred on the
///    per-attribute means, spanning `init_scale` of the data's extent on each
///    side (1.0 = the full bounding box).
enum class InitMode { Forgy, Box };

struct LloydParams {
    std::size_t k = 2;
    std::size_t max_iters = 300;
    double stability_threshold = 0.0; // fraction of objects allowed to change
    std::uint64_t seed = 42;
    std::size_t restarts = 1;
    InitMode init = InitMode::Forgy;
    double init_scale = 1.0; // Box only

    void validate() const {
        if (k < 1) throw std::invalid_argument("LloydParams: k must be >= 1");
        if (max_iters < 1) throw std::invalid_argument("LloydParams: max_iters must be >= 1");
        if (stability_threshold < 0.0 || stability_threshold >= 1.0)
            throw std::invalid_argument("LloydParams: stability_threshold must be in [0,1)");
        if (!(init_scale > 0.0) || !std::isfinite(init_scale))
            throw std::invalid_argument("LloydParams: init_scale must be positive and finite");
    }
};

/// Weighted sum of squared euclidean distances to assigned centroids.
inline double objective(const Dataset& ds, const Clustering& clustering, const WeightVector& w) {
    double total = 0.0;
    for (std::size_t i = 0; i < ds.n; ++i)
        total += w[i] * squared_euclidean(ds.row(i), clustering.centroid(clustering.assignments[i], ds.d));
    return total;
}

/// Nearest-centroid assignment under squared euclidean distance; ties go to
/// the lowest cluster index. Weights play no role here.
inline std::vector<std::size_t> assign(const Dataset& ds, const std::vector<double>& centroids) {
    if (centroids.empty() || centroids.size() % ds.d != 0)
        throw std::invalid_argument("assign: bad centroid matrix");
    const std::size_t k = centroids.size() / ds.d;
    std::vector<std::size_t> out(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i) {
        const auto xi = ds.row(i);
        std::size_t best = 0;
        double best_d = squared_euclidean(xi, {centroids.data(), ds.d});
        for (std::size_t c = 1; c < k; ++c) {
            const double dd = squared_euclidean(xi, {centroids.data() + c * ds.d, ds.d});
            if (dd < best_d) {
                best_d = dd;
                best = c;
            }
        }
        out[i] = best;
    }
    return out;
}

/// Weighted-mean centroid update. A cluster left empty is re-seeded at the
/// object with the largest weighted squared distance to its own centroid;
/// distinct objects are used when several clusters are empty at once.
inline std::vector<double> update_centroids(const Dataset& ds,
                                            const std::vector<std::size_t>& assignments,
                                            const WeightVector& w, std::size_t k) {
    std::vector<double> centroids(k * ds.d, 0.0);
    std::vector<double> weight_sum(k, 0.0);
    for (std::size_t i = 0; i < ds.n; ++i) {
        const std::size_t c = assignments[i];
        weight_sum[c] += w[i];
        const auto xi = ds.row(i);
        for (std::size_t a = 0; a < ds.d; ++a)
            centroids[c * ds.d + a] += w[i] * xi[a];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (weight_sum[c] > 0.0)
            for (std::size_t a = 0; a < ds.d; ++a)
                centroids[c * ds.d + a] /= weight_sum[c];

    std::vector<bool> taken(ds.n, false);
    for (std::size_t c = 0; c < k; ++c) {
        if (weight_sum[c] > 0.0) continue;
        std::size_t far = 0;
        double far_cost = -1.0;
        for (std::size_t i = 0; i < ds.n; ++i) {
            if (taken[i]) continue;
            const std::size_t home = assignments[i];
            const double cost =
                w[i] * squared_euclidean(ds.row(i), {centroids.data() + home * ds.d, ds.d});
            if (cost > far_cost) {
                far_cost = cost;
                far = i;
            }
        }
        taken[far] = true;
        const auto xi = ds.row(far);
        for (std::size_t a = 0; a < ds.d; ++a)
            centroids[c * ds.d + a] = xi[a];
    }
    return centroids;
}

/// One recorded Lloyd iteration: assignments, the centroids updated from
/// them, and the objective of that pair.
struct LloydTrace {
    struct Step {
        std::vector<std::size_t> assignments;
        std::vector<double> centroids;
        double objective = 0.0;
    };
    std::vector<double> initial_centroids;
    std::vector<Step> steps;
};

namespace detail {

// Forgy initialization: k distinct objects drawn by partial Fisher-Yates.
inline std::vector<double> forgy_init(const Dataset& ds, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(ds.n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<double> centroids(k * ds.d);
    for (std::size_t c = 0; c < k; ++c) {
        std::uniform_int_distribution<std::size_t> pick(c, ds.n - 1);
        std::swap(idx[c], idx[pick(rng)]);
        const auto xi = ds.row(idx[c]);
        std::copy(xi.begin(), xi.end(), centroids.begin() + c * ds.d);
    }
    return centroids;
}

// Uniform draw from the scaled bounding box around the attribute means.
inline std::vector<double> box_init(const Dataset& ds, std::size_t k, double scale,
                                    std::mt19937_64& rng) {
    std::vector<double> lo(ds.d), hi(ds.d);
    for (std::size_t a = 0; a < ds.d; ++a) {
        double mn = ds.values[a], mx = ds.values[a], sum = 0.0;
        for (std::size_t i = 0; i < ds.n; ++i) {
            const double v = ds.values[i * ds.d + a];
            mn = std::min(mn, v);
            mx = std::max(mx, v);
            sum += v;
        }
        const double mean = sum / static_cast<double>(ds.n);
        lo[a] = mean + scale * (mn - mean);
        hi[a] = mean + scale * (mx - mean);
    }
    std::vector<double> centroids(k * ds.d);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t a = 0; a < ds.d; ++a) {
            std::uniform_real_distribution<double> u(lo[a], hi[a]);
            centroids[c * ds.d + a] = u(rng);
        }
    return centroids;
}

inline std::vector<double> init_centroids(const Dataset& ds, const LloydParams& params,
                                          std::mt19937_64& rng) {
    switch (params.init) {
    case InitMode::Box:
        return box_init(ds, params.k, params.init_scale, rng);
    case InitMode::Forgy:
        break;
    }
    return forgy_init(ds, params.k, rng);
}

} // namespace detail

/// Weighted Lloyd iteration: alternate assignment and weighted centroid
/// updates until the fraction of objects changing cluster drops to the
/// stability threshold or the iteration cap is hit.
inline Clustering run_lloyd(const Dataset& ds, const WeightVector& w, const LloydParams& params,
                            LloydTrace* trace = nullptr) {
    params.validate();
    if (params.k > ds.n)
        throw std::invalid_argument("run_lloyd: k exceeds number of objects");
    if (w.size() != ds.n)
        throw std::invalid_argument("run_lloyd: weight vector size mismatch");
    for (double wi : w)
        if (!(wi >= 1.0) || !std::isfinite(wi))
            throw std::invalid_argument("run_lloyd: weights must be finite and >= 1");

    std::mt19937_64 rng(params.seed);
    std::vector<double> centroids = detail::init_centroids(ds, params, rng);
    if (trace) {
        trace->initial_centroids = centroids;
        trace->steps.clear();
    }

    Clustering result;
    result.k = params.k;
    std::vector<std::size_t> prev;
    for (std::size_t iter = 1; iter <= params.max_iters; ++iter) {
        auto a = assign(ds, centroids);
        double changed = 1.0;
        if (!prev.empty()) {
            std::size_t diff = 0;
            for (std::size_t i = 0; i < ds.n; ++i)
                if (a[i] != prev[i]) ++diff;
            changed = static_cast<double>(diff) / static_cast<double>(ds.n);
        }
        centroids = update_centroids(ds, a, w, params.k);
        result.iterations_run = iter;
        result.assignments = a;
        result.centroids = centroids;
        if (trace) {
            double obj = 0.0;
            for (std::size_t i = 0; i < ds.n; ++i)
                obj += w[i] * squared_euclidean(ds.row(i), {centroids.data() + a[i] * ds.d, ds.d});
            trace->steps.push_back({a, centroids, obj});
        }
        if (changed <= params.stability_threshold) {
            result.converged = true;
            break;
        }
        prev = std::move(a);
    }
    return result;
}

inline Clustering run_kmeans(const Dataset& ds, const LloydParams& params,
                             LloydTrace* trace = nullptr) {
    return run_lloyd(ds, uniform_weights(ds.n), params, trace);
}

/// LOFKM: LOF-derived weights with neighborhood size t, then weighted Lloyd.
inline Clustering run_lofkm(const Dataset& ds, std::size_t t, const LloydParams& params,
                            LloydTrace* trace = nullptr) {
    return run_lloyd(ds, lof_weights(ds, t), params, trace);
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Seed for restart r derived from the master seed; methods compared under
/// the same master seed share the whole sequence (paired restarts).
inline std::uint64_t restart_seed(std::uint64_t master_seed, std::size_t restart) {
    return detail::splitmix64(master_seed + 0x51ed2701ULL * (restart + 1));
}

using MetricHook = std::pair<std::string, std::function<double(const Dataset&, const Clustering&)>>;

/// Runs `restarts` independently seeded clusterings and returns the mean of
/// each hook metric. Restarts fan out across threads; aggregation order is
/// fixed by restart index, so results do not depend on the worker count.
inline std::vector<std::pair<std::string, double>>
multi_restart(const Dataset& ds,
              const std::function<Clustering(const Dataset&, const LloydParams&)>& method,
              const LloydParams& params, const std::vector<MetricHook>& hooks,
              std::size_t workers = 0) {
    if (params.restarts < 1)
        throw std::invalid_argument("multi_restart: restarts must be >= 1");
    if (workers == 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        workers = hc == 0 ? 1 : hc;
    }
    workers = std::min<std::size_t>(workers, params.restarts);

    std::vector<std::vector<double>> per_restart(params.restarts,
                                                 std::vector<double>(hooks.size(), 0.0));
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            LloydParams p = params;
            p.seed = restart_seed(params.seed, r);
            const Clustering clustering = method(ds, p);
            for (std::size_t h = 0; h < hooks.size(); ++h)
                per_restart[r][h] = hooks[h].second(ds, clustering);
        }
    };

    if (workers <= 1) {
        run_range(0, params.restarts);
    } else {
        std::vector<std::future<void>> futures;
        const std::size_t chunk = (params.restarts + workers - 1) / workers;
        for (std::size_t b = 0; b < params.restarts; b += chunk)
            futures.push_back(std::async(std::launch::async, run_range, b,
                                         std::min(b + chunk, params.restarts)));
        for (auto& f : futures) f.get();
    }

    std::vector<std::pair<std::string, double>> means;
    means.reserve(hooks.size());
    for (std::size_t h = 0; h < hooks.size(); ++h) {
        double sum = 0.0;
        for (std::size_t r = 0; r < params.restarts; ++r)
            sum += per_restart[r][h];
        means.emplace_back(hooks[h].first, sum / static_cast<double>(params.restarts));
    }
    return means;
}

} // namespace lofkm

#endif // LOFKM_KMEANS_HPP
