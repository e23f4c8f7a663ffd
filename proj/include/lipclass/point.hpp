#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lipclass/errors.hpp"

namespace lipclass {

using DenseVector = std::vector<double>;

using Planar = std::array<double, 2>;

/// Multiset of k points in the unit square. Duplicates are kept.
struct PlanarMultiset {
    std::vector<Planar> items;

    PlanarMultiset() = default;
    explicit PlanarMultiset(std::vector<Planar> pts) : items(std::move(pts)) {
        if (items.empty()) throw input_error("planar multiset must contain at least one point");
        for (const auto& p : items) {
            if (!(p[0] >= 0.0 && p[0] <= 1.0 && p[1] >= 0.0 && p[1] <= 1.0))
                throw input_error("planar multiset coordinates must lie in [0,1]^2");
        }
    }

    std::size_t size() const { return items.size(); }
    friend bool operator==(const PlanarMultiset&, const PlanarMultiset&) = default;
};

/// Sparse time series: (index, value) pairs with strictly increasing indices
/// and no zero values. Zero entries passed to the constructor are dropped.
struct SparseSeries {
    struct Entry {
        std::size_t index;
        double value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };
    std::vector<Entry> entries;

    SparseSeries() = default;
    explicit SparseSeries(const std::vector<Entry>& raw) {
        entries.reserve(raw.size());
        for (const auto& e : raw) {
            if (!entries.empty() && e.index <= entries.back().index)
                throw input_error("sparse series indices must be strictly increasing");
            if (e.value != 0.0) entries.push_back(e);
        }
    }

    /// Densified length-m vector. Throws if an index is out of range.
    std::vector<double> dense(std::size_t m) const {
        std::vector<double> out(m, 0.0);
        for (const auto& e : entries) {
            if (e.index >= m)
                throw input_error("series index " + std::to_string(e.index) +
                                  " out of range for length " + std::to_string(m));
            out[e.index] = e.value;
        }
        return out;
    }

    friend bool operator==(const SparseSeries&, const SparseSeries&) = default;
};

using Point = std::variant<DenseVector, PlanarMultiset, SparseSeries>;

enum class PayloadKind { vector, multiset, series };

inline PayloadKind payload_kind(const Point& p) {
    return static_cast<PayloadKind>(p.index());
}

inline const char* payload_name(PayloadKind k) {
    switch (k) {
    case PayloadKind::vector: return "vector";
    case PayloadKind::multiset: return "multiset";
    case PayloadKind::series: return "series";
    }
    return "?";
}

/// n labelled points sharing one payload variant. `series_length` carries m
/// for series payloads, which sparse storage cannot recover on its own.
struct LabeledDataset {
    std::vector<Point> points;
    std::vector<int> labels;
    std::size_t series_length = 0;

    std::size_t size() const { return points.size(); }

    void validate() const {
        if (points.size() != labels.size())
            throw input_error("points and labels differ in length");
        if (points.empty()) throw input_error("dataset is empty");
        const auto kind = payload_kind(points.front());
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (labels[i] != 1 && labels[i] != -1)
                throw input_error("label of record " + std::to_string(i) + " is not +1 or -1");
            if (payload_kind(points[i]) != kind)
                throw input_error("record " + std::to_string(i) + " uses a different payload variant");
        }
    }

    std::vector<std::size_t> ids_with_label(int label) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) out.push_back(i);
        return out;
    }
};

} // namespace lipclass
