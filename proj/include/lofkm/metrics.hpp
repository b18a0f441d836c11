#ifndef LOFKM_METRICS_HPP
#define LOFKM_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lofkm/core.hpp"
#include "lofkm/kmeans.hpp"

namespace lofkm {

struct QualityReport {
    double silhouette = 0.0; // in [-1, 1]
    double purity = 0.0;     // in (0, 1]
};

/// Mean silhouette coefficient under euclidean distance. Objects in
/// singleton clusters score 0, as do objects with a == b == 0.
inline double silhouette(const Dataset& ds, const Clustering& clustering) {
    const auto members = clustering.members();
    std::size_t non_empty = 0;
    for (const auto& m : members)
        if (!m.empty()) ++non_empty;
    if (non_empty < 2)
        throw std::invalid_argument("silhouette: needs at least two non-empty clusters");

    std::vector<std::size_t> sizes(clustering.k);
    for (std::size_t c = 0; c < clustering.k; ++c) sizes[c] = members[c].size();

    double total = 0.0;
    std::vector<double> dist_sum(clustering.k);
    for (std::size_t i = 0; i < ds.n; ++i) {
        std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
        const auto xi = ds.row(i);
        for (std::size_t j = 0; j < ds.n; ++j) {
            if (j == i) continue;
            dist_sum[clustering.assignments[j]] += std::sqrt(squared_euclidean(xi, ds.row(j)));
        }
        const std::size_t own = clustering.assignments[i];
        if (sizes[own] <= 1) continue; // singleton: coefficient 0
        const double a = dist_sum[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < clustering.k; ++c) {
            if (c == own || sizes[c] == 0) continue;
            b = std::min(b, dist_sum[c] / static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        total += denom == 0.0 ? 0.0 : (b - a) / denom;
    }
    return total / static_cast<double>(ds.n);
}

/// Fraction of objects covered by the majority label of their cluster.
inline double purity(const Clustering& clustering, const std::vector<std::string>& labels) {
    const std::size_t n = clustering.assignments.size();
    if (labels.size() != n || n == 0)
        throw std::invalid_argument("purity: labels missing or size mismatch");
    std::vector<std::map<std::string, std::size_t>> counts(clustering.k);
    for (std::size_t i = 0; i < n; ++i)
        ++counts[clustering.assignments[i]][labels[i]];
    std::size_t covered = 0;
    for (const auto& cluster_counts : counts) {
        std::size_t best = 0;
        for (const auto& [label, c] : cluster_counts) best = std::max(best, c);
        covered += best;
    }
    return static_cast<double>(covered) / static_cast<double>(n);
}

} // namespace lofkm

#endif // LOFKM_METRICS_HPP
