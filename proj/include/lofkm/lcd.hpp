#ifndef LOFKM_LCD_HPP
#define LOFKM_LCD_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "lofkm/core.hpp"
#include "lofkm/kmeans.hpp"
#include "lofkm/lof.hpp"

#include "json.hpp"

namespace lofkm {

/// The up-to-t nearest cluster members lying between an object and its
/// cluster prototype, per the two-sided distance eligibility check.
struct EligibleNeighborSet {
    std::size_t object = 0;
    std::size_t t = 0;
    std::vector<Neighbor> members; // sorted by (distance to object, index), size <= t
};

/// Eligible neighbors of X towards centroid C: cluster members s with
/// dist(s,C) <= dist(X,C) and dist(X,s) < dist(X,C), keeping the t nearest
/// to X. An object coincident with its centroid gets an empty set.
inline EligibleNeighborSet eligible_neighbors(const Dataset& ds, std::size_t x,
                                              std::span<const double> centroid,
                                              std::span<const std::size_t> members,
                                              std::size_t t) {
    if (t < 1) throw std::invalid_argument("eligible_neighbors: t must be >= 1");
    EligibleNeighborSet out;
    out.object = x;
    out.t = t;
    const auto xv = ds.row(x);
    const double dxc = distance(xv, centroid);
    if (dxc == 0.0) return out;
    for (std::size_t s : members) {
        if (s == x) continue;
        const auto sv = ds.row(s);
        if (distance(sv, centroid) > dxc) continue;
        const double dxs = distance(xv, sv);
        if (dxs >= dxc) continue;
        out.members.push_back({s, dxs});
    }
    std::sort(out.members.begin(), out.members.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
    });
    if (out.members.size() > t) out.members.resize(t);
    return out;
}

/// Excess of the path X -> s -> C over the direct X -> C distance, as a
/// fraction of the latter. Zero iff s sits on the segment from X to C.
inline double dev(std::span<const double> x, std::span<const double> c,
                  std::span<const double> s) {
    const double dxc = distance(x, c);
    return (distance(c, s) + distance(s, x)) / dxc - 1.0;
}

/// dist(X,s) as a fraction of the X -> s -> C path length; in [0,1].
inline double nd(std::span<const double> x, std::span<const double> c,
                 std::span<const double> s) {
    return distance(x, s) / (distance(c, s) + distance(s, x));
}

inline double lcd_triple(std::span<const double> x, std::span<const double> c,
                         std::span<const double> s) {
    return dev(x, c, s) * nd(x, c, s);
}

/// Disagreement of X with cluster prototype C summed over the eligible
/// neighbor set; 0 when the set is empty.
inline double lcd_object(const Dataset& ds, std::size_t x, std::span<const double> centroid,
                         std::span<const std::size_t> members, std::size_t t) {
    const auto elig = eligible_neighbors(ds, x, centroid, members, t);
    double sum = 0.0;
    for (const auto& nb : elig.members)
        sum += lcd_triple(ds.row(x), centroid, ds.row(nb.index));
    return sum;
}

/// Worst per-object disagreement within one cluster; 0 for empty clusters.
inline double lcd_cluster(const Dataset& ds, std::span<const double> centroid,
                          std::span<const std::size_t> members, std::size_t t) {
    double worst = 0.0;
    for (std::size_t x : members)
        worst = std::max(worst, lcd_object(ds, x, centroid, members, t));
    return worst;
}

struct LcdReport {
    std::size_t t = 0;
    std::vector<double> per_object;  // LCD of each object vs. its assigned cluster
    std::vector<double> per_cluster; // max over the cluster's objects
    double max_lcd = 0.0;            // max over clusters
    double avg_lcd = 0.0;            // mean over clusters (empty ones count as 0)

    nlohmann::json to_json() const {
        return {{"t", t}, {"per_cluster", per_cluster}, {"max_lcd", max_lcd}, {"avg_lcd", avg_lcd}};
    }
};

/// LCD of a full clustering: each object scored only against its assigned
/// cluster, aggregated to per-cluster maxima and the MaxLCD/AvgLCD summary.
inline LcdReport lcd_dataset(const Dataset& ds, const Clustering& clustering, std::size_t t) {
    if (clustering.k == 0 || clustering.assignments.size() != ds.n)
        throw std::invalid_argument("lcd_dataset: no clustering");
    LcdReport report;
    report.t = t;
    report.per_object.resize(ds.n, 0.0);
    report.per_cluster.assign(clustering.k, 0.0);
    const auto members = clustering.members();
    for (std::size_t c = 0; c < clustering.k; ++c) {
        const auto centroid = clustering.centroid(c, ds.d);
        for (std::size_t x : members[c]) {
            const double v = lcd_object(ds, x, centroid, members[c], t);
            report.per_object[x] = v;
            report.per_cluster[c] = std::max(report.per_cluster[c], v);
        }
    }
    report.max_lcd = *std::max_element(report.per_cluster.begin(), report.per_cluster.end());
    double sum = 0.0;
    for (double v : report.per_cluster) sum += v;
    report.avg_lcd = sum / static_cast<double>(clustering.k);
    return report;
}

} // namespace lofkm

#endif // LOFKM_LCD_HPP
