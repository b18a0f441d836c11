#ifndef LOFKM_CORE_HPP
#define LOFKM_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lofkm {

/// Immutable collection of n points with d numeric attributes each,
/// optionally carrying an external class label per point.
struct Dataset {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> values;               // row-major, n * d
    std::vector<std::string> labels;          // empty, or size n
    std::vector<std::string> attribute_names; // empty, or size d

    Dataset() = default;

    Dataset(std::size_t n_, std::size_t d_, std::vector<double> values_,
            std::vector<std::string> labels_ = {},
            std::vector<std::string> attribute_names_ = {})
        : n(n_), d(d_), values(std::move(values_)), labels(std::move(labels_)),
          attribute_names(std::move(attribute_names_)) {
        if (n < 1 || d < 1)
            throw std::invalid_argument("Dataset: need n >= 1 and d >= 1");
        if (values.size() != n * d)
            throw std::invalid_argument("Dataset: values size mismatch");
        if (!labels.empty() && labels.size() != n)
            throw std::invalid_argument("Dataset: labels size mismatch");
        if (!attribute_names.empty() && attribute_names.size() != d)
            throw std::invalid_argument("Dataset: attribute_names size mismatch");
        for (double v : values)
            if (!std::isfinite(v))
                throw std::invalid_argument("Dataset: non-finite value");
    }

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * d, d};
    }

    bool has_labels() const { return !labels.empty(); }

    std::size_t num_distinct_labels() const {
        std::vector<std::string> u(labels);
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        return u.size();
    }
};

enum class Metric { Euclidean, SquaredEuclidean };

inline double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

inline double distance(std::span<const double> a, std::span<const double> b,
                       Metric metric = Metric::Euclidean) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    const double s = squared_euclidean(a, b);
    return metric == Metric::Euclidean ? std::sqrt(s) : s;
}

/// Column selected either by 0-based index or by header name.
using ColumnRef = std::variant<std::size_t, std::string>;

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
    const char* b = s.c_str();
    char* end = nullptr;
    out = std::strtod(b, &end);
    if (end == b) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0' && std::isfinite(out);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace detail

/// Reads a comma-separated file with an optional single header row.
/// The first row is treated as a header iff any of its non-label fields
/// fails to parse as a finite number. A name-based label column requires
/// a header row.
inline Dataset load_csv(const std::string& path,
                        std::optional<ColumnRef> label_column = std::nullopt) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_csv: cannot open '" + path + "'");

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        rows.push_back(detail::split_csv_line(line));
    }
    if (rows.empty())
        throw std::runtime_error("load_csv: '" + path + "' is empty");

    const std::size_t arity = rows[0].size();
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].size() != arity)
            throw std::runtime_error("load_csv: ragged row " + std::to_string(r + 1) +
                                     " (expected " + std::to_string(arity) + " fields, got " +
                                     std::to_string(rows[r].size()) + ")");

    // Resolve the label column index, if any.
    std::optional<std::size_t> label_idx;
    bool need_header = false;
    if (label_column) {
        if (std::holds_alternative<std::size_t>(*label_column)) {
            label_idx = std::get<std::size_t>(*label_column);
            if (*label_idx >= arity)
                throw std::runtime_error("load_csv: label column index out of range");
        } else {
            need_header = true;
        }
    }

    // Header detection: header iff any non-label field of the first row
    // fails numeric parse. Name-based label columns force a header.
    bool has_header = need_header;
    if (!has_header) {
        double tmp;
        for (std::size_t c = 0; c < arity; ++c) {
            if (label_idx && c == *label_idx) continue;
            if (!detail::parse_double(detail::trim(rows[0][c]), tmp)) {
                has_header = true;
                break;
            }
        }
    }

    std::vector<std::string> names;
    if (has_header) {
        for (auto& f : rows[0]) names.push_back(detail::trim(f));
        if (need_header) {
            const auto& want = std::get<std::string>(*label_column);
            auto it = std::find(names.begin(), names.end(), want);
            if (it == names.end())
                throw std::runtime_error("load_csv: label column '" + want + "' not found");
            label_idx = static_cast<std::size_t>(it - names.begin());
        }
    } else if (need_header) {
        throw std::runtime_error("load_csv: label column by name requires a header row");
    }

    if (label_idx && arity < 2)
        throw std::runtime_error("load_csv: no feature columns besides the label");

    const std::size_t first_data = has_header ? 1 : 0;
    const std::size_t n = rows.size() - first_data;
    if (n == 0)
        throw std::runtime_error("load_csv: '" + path + "' has a header but no data rows");
    const std::size_t d = label_idx ? arity - 1 : arity;

    std::vector<double> values;
    values.reserve(n * d);
    std::vector<std::string> labels;
    if (label_idx) labels.reserve(n);

    for (std::size_t r = first_data; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < arity; ++c) {
            const std::string field = detail::trim(rows[r][c]);
            if (label_idx && c == *label_idx) {
                labels.push_back(field);
                continue;
            }
            double v;
            if (!detail::parse_double(field, v))
                throw std::runtime_error("load_csv: parse error at row " +
                                         std::to_string(r - first_data + 1) + ", column " +
                                         std::to_string(c + 1) + ": '" + field + "'");
            values.push_back(v);
        }
    }

    std::vector<std::string> attr_names;
    if (has_header) {
        for (std::size_t c = 0; c < arity; ++c)
            if (!(label_idx && c == *label_idx)) attr_names.push_back(names[c]);
    }
    return Dataset(n, d, std::move(values), std::move(labels), std::move(attr_names));
}

inline void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_csv: cannot open '" + path + "'");
    out.precision(17);
    const bool header = !ds.attribute_names.empty();
    if (header) {
        for (std::size_t c = 0; c < ds.d; ++c) {
            if (c) out << ',';
            out << ds.attribute_names[c];
        }
        if (ds.has_labels()) out << ",label";
        out << '\n';
    }
    for (std::size_t i = 0; i < ds.n; ++i) {
        for (std::size_t c = 0; c < ds.d; ++c) {
            if (c) out << ',';
            out << ds.values[i * ds.d + c];
        }
        if (ds.has_labels()) out << ',' << ds.labels[i];
        out << '\n';
    }
}

enum class Norm { None, ZScore, MinMax };

/// Per-attribute feature scaling. Degenerate (constant) attributes pass
/// through unchanged under zscore and map to 0 under minmax.
inline Dataset normalize(const Dataset& ds, Norm mode) {
    if (mode == Norm::None) return ds;
    std::vector<double> out(ds.values);
    for (std::size_t c = 0; c < ds.d; ++c) {
        if (mode == Norm::ZScore) {
            double mean = 0.0;
            for (std::size_t i = 0; i < ds.n; ++i) mean += ds.values[i * ds.d + c];
            mean /= static_cast<double>(ds.n);
            double var = 0.0;
            for (std::size_t i = 0; i < ds.n; ++i) {
                const double diff = ds.values[i * ds.d + c] - mean;
                var += diff * diff;
            }
            var /= static_cast<double>(ds.n);
            const double sd = std::sqrt(var);
            if (sd == 0.0) continue;
            for (std::size_t i = 0; i < ds.n; ++i)
                out[i * ds.d + c] = (ds.values[i * ds.d + c] - mean) / sd;
        } else {
            double lo = ds.values[c], hi = ds.values[c];
            for (std::size_t i = 0; i < ds.n; ++i) {
                lo = std::min(lo, ds.values[i * ds.d + c]);
                hi = std::max(hi, ds.values[i * ds.d + c]);
            }
            const double range = hi - lo;
            for (std::size_t i = 0; i < ds.n; ++i)
                out[i * ds.d + c] = range == 0.0 ? 0.0 : (ds.values[i * ds.d + c] - lo) / range;
        }
    }
    return Dataset(ds.n, ds.d, std::move(out), ds.labels, ds.attribute_names);
}

} // namespace lofkm

#endif // LOFKM_CORE_HPP
