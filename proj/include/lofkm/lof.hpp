#ifndef LOFKM_LOF_HPP
#define LOFKM_LOF_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lofkm/core.hpp"

namespace lofkm {

struct Neighbor {
    std::size_t index;
    double distance;
};

/// k-distance neighborhood of a query object. Includes every object within
/// the k-distance, so ties can push the size above k.
struct NeighborList {
    std::size_t query = 0;
    double k_distance = 0.0;
    std::vector<Neighbor> neighbors; // sorted by (distance, index)
};

using WeightVector = std::vector<double>;

inline WeightVector uniform_weights(std::size_t n) {
    return WeightVector(n, 1.0);
}

namespace detail {

inline void check_k(const Dataset& ds, std::size_t k) {
    if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
    if (k >= ds.n) throw std::invalid_argument("knn: k must be < n");
}

// Distances from object i to every other object, sorted ascending.
inline std::vector<Neighbor> sorted_distance_row(const Dataset& ds, std::size_t i) {
    std::vector<Neighbor> row;
    row.reserve(ds.n - 1);
    const auto xi = ds.row(i);
    for (std::size_t j = 0; j < ds.n; ++j) {
        if (j == i) continue;
        row.push_back({j, std::sqrt(squared_euclidean(xi, ds.row(j)))});
    }
    std::sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
    });
    return row;
}

} // namespace detail

/// All objects within the k-distance of i (ties included), excluding i itself.
inline NeighborList knn(const Dataset& ds, std::size_t i, std::size_t k) {
    detail::check_k(ds, k);
    auto row = detail::sorted_distance_row(ds, i);
    const double kdist = row[k - 1].distance;
    NeighborList out;
    out.query = i;
    out.k_distance = kdist;
    for (const auto& nb : row) {
        if (nb.distance > kdist) break;
        out.neighbors.push_back(nb);
    }
    return out;
}

/// Batch LOF computation over the whole dataset. Neighborhoods and
/// k-distances are computed once and shared; read-only afterwards.
class LofContext {
public:
    LofContext(const Dataset& ds, std::size_t k) : k_(k) {
        detail::check_k(ds, k);
        const std::size_t n = ds.n;
        lists_.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            lists_.push_back(knn(ds, i, k));
        lrd_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (const auto& nb : lists_[i].neighbors)
                sum += std::max(lists_[nb.index].k_distance, nb.distance);
            lrd_[i] = sum == 0.0 ? std::numeric_limits<double>::infinity()
                                 : static_cast<double>(lists_[i].neighbors.size()) / sum;
        }
    }

    std::size_t k() const { return k_; }
    const NeighborList& neighbors(std::size_t i) const { return lists_[i]; }
    double lrd(std::size_t i) const { return lrd_[i]; }

    double lof(std::size_t i) const {
        const auto& nbs = lists_[i].neighbors;
        if (std::isinf(lrd_[i])) {
            for (const auto& nb : nbs)
                if (!std::isinf(lrd_[nb.index])) return 0.0;
            return 1.0;
        }
        double sum = 0.0;
        for (const auto& nb : nbs)
            sum += lrd_[nb.index] / lrd_[i];
        return sum / static_cast<double>(nbs.size());
    }

private:
    std::size_t k_;
    std::vector<NeighborList> lists_;
    std::vector<double> lrd_;
};

/// Local reachability density of object i: |N_k(i)| divided by the summed
/// reachability distances to its neighbors; +inf when every neighbor
/// coincides with i.
inline double lrd(const Dataset& ds, std::size_t i, std::size_t k) {
    detail::check_k(ds, k);
    const auto list = knn(ds, i, k);
    double sum = 0.0;
    for (const auto& nb : list.neighbors) {
        const double kdist_j = knn(ds, nb.index, k).k_distance;
        sum += std::max(kdist_j, nb.distance);
    }
    return sum == 0.0 ? std::numeric_limits<double>::infinity()
                      : static_cast<double>(list.neighbors.size()) / sum;
}

/// Local Outlier Factor of object i: mean ratio of neighbor lrd to own lrd.
/// With an infinite own lrd the result is 1.0 when all neighbor lrds are
/// infinite too, and 0.0 otherwise.
inline double lof(const Dataset& ds, std::size_t i, std::size_t k) {
    LofContext ctx(ds, k);
    return ctx.lof(i);
}

/// Per-object clustering weights: the LOF score bounded below by 1.0.
inline WeightVector lof_weights(const Dataset& ds, std::size_t k) {
    LofContext ctx(ds, k);
    WeightVector w(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i)
        w[i] = std::max(1.0, ctx.lof(i));
    return w;
}

} // namespace lofkm

#endif // LOFKM_LOF_HPP
