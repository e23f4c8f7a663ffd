#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lipclass/assignment.hpp"
#include "lipclass/errors.hpp"
#include "lipclass/point.hpp"

namespace lipclass {

/// Minkowski distance for p in {1, 2}.
inline double lp_distance(std::span<const double> a, std::span<const double> b, int p) {
    if (a.size() != b.size())
        throw input_error("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
    if (p != 1 && p != 2) throw config_error("lp_distance supports p = 1 or p = 2");
    double acc = 0.0;
    if (p == 1) {
        for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
        return acc;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

enum class BaseDistance { l1, l2 };

inline double planar_distance(const Planar& a, const Planar& b, BaseDistance base) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return base == BaseDistance::l1 ? std::abs(dx) + std::abs(dy) : std::hypot(dx, dy);
}

/// Earthmover distance between two equal-size multisets under an arbitrary
/// ground metric: (1/k) * min over bijections of the summed ground cost.
template <class T, class Ground>
double emd_distance(std::span<const T> s, std::span<const T> t, Ground&& ground) {
    if (s.size() != t.size())
        throw input_error("EMD operands differ in size: " + std::to_string(s.size()) + " vs " +
                          std::to_string(t.size()));
    if (s.empty()) throw input_error("EMD operands must be nonempty");
    const auto k = s.size();
    auto fit = min_cost_assignment(k, [&](std::size_t i, std::size_t j) { return ground(s[i], t[j]); });
    return fit.cost / static_cast<double>(k);
}

inline double emd_distance(const PlanarMultiset& s, const PlanarMultiset& t, BaseDistance base) {
    return emd_distance(std::span<const Planar>(s.items), std::span<const Planar>(t.items),
                        [base](const Planar& a, const Planar& b) { return planar_distance(a, b, base); });
}

/// ERP with zero-valued gaps over the densified length-m series. Standard
/// quadratic dynamic program with a rolling row.
inline double erp_distance(std::span<const double> r, std::span<const double> s) {
    const std::size_t n = r.size(), m = s.size();
    std::vector<double> prev(m + 1), cur(m + 1);
    prev[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + std::abs(s[j - 1]);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = prev[0] + std::abs(r[i - 1]);
        for (std::size_t j = 1; j <= m; ++j) {
            const double match = prev[j - 1] + std::abs(r[i - 1] - s[j - 1]);
            const double gap_in_s = prev[j] + std::abs(r[i - 1]);
            const double gap_in_r = cur[j - 1] + std::abs(s[j - 1]);
            cur[j] = std::min({match, gap_in_s, gap_in_r});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

inline double erp_distance(const SparseSeries& r, const SparseSeries& s, std::size_t length_m) {
    if (length_m == 0) throw config_error("ERP series length must be positive");
    const auto rd = r.dense(length_m);
    const auto sd = s.dense(length_m);
    return erp_distance(std::span<const double>(rd), std::span<const double>(sd));
}

enum class KernelKind { l1, l2, emd, erp };

/// Distance oracle over `Point`, dispatching on the configured kernel.
class MetricKernel {
public:
    MetricKernel() = default;
    explicit MetricKernel(KernelKind kind, BaseDistance emd_base = BaseDistance::l2,
                          std::size_t series_length = 0)
        : kind_(kind), emd_base_(emd_base), series_length_(series_length) {}

    KernelKind kind() const { return kind_; }
    BaseDistance emd_base() const { return emd_base_; }
    std::size_t series_length() const { return series_length_; }

    PayloadKind expected_payload() const {
        switch (kind_) {
        case KernelKind::l1:
        case KernelKind::l2: return PayloadKind::vector;
        case KernelKind::emd: return PayloadKind::multiset;
        case KernelKind::erp: return PayloadKind::series;
        }
        return PayloadKind::vector;
    }

    std::string name() const {
        switch (kind_) {
        case KernelKind::l1: return "l1";
        case KernelKind::l2: return "l2";
        case KernelKind::emd: return "emd";
        case KernelKind::erp: return "erp";
        }
        return "?";
    }

    double operator()(const Point& a, const Point& b) const {
        switch (kind_) {
        case KernelKind::l1:
        case KernelKind::l2: {
            const auto& x = get<DenseVector>(a);
            const auto& y = get<DenseVector>(b);
            return lp_distance(x, y, kind_ == KernelKind::l1 ? 1 : 2);
        }
        case KernelKind::emd: return emd_distance(get<PlanarMultiset>(a), get<PlanarMultiset>(b), emd_base_);
        case KernelKind::erp: return erp_distance(get<SparseSeries>(a), get<SparseSeries>(b), series_length_);
        }
        return 0.0;
    }

private:
    template <class T>
    const T& get(const Point& p) const {
        if (const auto* v = std::get_if<T>(&p)) return *v;
        throw input_error("kernel '" + name() + "' cannot measure a '" +
                          payload_name(payload_kind(p)) + "' payload");
    }

    KernelKind kind_ = KernelKind::l2;
    BaseDistance emd_base_ = BaseDistance::l2;
    std::size_t series_length_ = 0;
};

/// Dense symmetric distance table with a zero diagonal.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double d) {
        data_[i * n_ + j] = d;
        data_[j * n_ + i] = d;
    }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

template <class P, class Metric>
DistanceMatrix pairwise_distances(std::span<const P> points, const Metric& metric) {
    DistanceMatrix m(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) m.set(i, j, metric(points[i], points[j]));
    return m;
}

inline DistanceMatrix pairwise_distances(const LabeledDataset& ds, const MetricKernel& kernel) {
    return pairwise_distances(std::span<const Point>(ds.points), kernel);
}

} // namespace lipclass
