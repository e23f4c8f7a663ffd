#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lipclass/errors.hpp"
#include "lipclass/net_index.hpp"

namespace lipclass {

/// Clamp z to [lo, hi].
inline double truncate(double lo, double hi, double z) { return std::max(lo, std::min(hi, z)); }

/// Admissible ANN slack for the classifier: 0 < eps < 1/32.
inline void check_classifier_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0 / 32.0))
        throw config_error("eps must lie in (0, 1/32), got " + std::to_string(eps));
}

/// Minimum distance between the two labelled classes by direct scan.
template <class P, class Metric>
double class_separation(std::span<const P> points, std::span<const int> labels, const Metric& metric) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < points.size(); ++j)
            if (labels[j] == -1) best = std::min(best, metric(points[i], points[j]));
    }
    return best;
}

/// Interpolated Lipschitz extension of the labels over the whole sample:
/// alpha * min_i (y_i + 2 rho(x,x_i)/sep) + (1-alpha) * max_j (y_j - 2 rho(x,x_j)/sep),
/// with sep the distance between the two classes.
template <class P, class Metric>
double f_alpha(const P& x, std::span<const P> points, std::span<const int> labels, const Metric& metric,
               double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw config_error("alpha must lie in [0, 1]");
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
    if (!has_pos || !has_neg)
        throw input_error("one class is empty; use the constant classifier instead");
    const double sep = class_separation(points, labels, metric);
    if (!(sep > 0.0)) throw input_error("opposite labels at distance zero");

    double lower = std::numeric_limits<double>::infinity();
    double upper = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double r = 2.0 * metric(x, points[i]) / sep;
        lower = std::min(lower, labels[i] + r);
        upper = std::max(upper, labels[i] - r);
    }
    return alpha * lower + (1.0 - alpha) * upper;
}

template <class P, class Metric>
class LipschitzModel;

template <class P, class Metric>
LipschitzModel<P, Metric> train(std::span<const P> points, std::span<const int> labels,
                                std::span<const std::size_t> exclude, double eps, const Metric& metric,
                                std::optional<double> rho_tilde_override = std::nullopt);

struct ExactEvalOptions {
    /// Minimise over negatively labelled retained points only.
    bool skip_positives = false;
    /// Use the ANN estimate of the class separation instead of the exact one.
    bool use_rho_tilde = false;
};

/// Truncated Lipschitz-extension classifier trained on a retained subset S1
/// of the sample. Evaluation goes through an ANN hierarchy over the
/// negatively labelled retained points.
template <class P, class Metric>
class LipschitzModel {
public:
    using Index = NetHierarchy<P, Metric>;

    bool is_constant() const { return constant_label_.has_value(); }
    int constant_label() const { return constant_label_.value_or(0); }

    double eps() const { return eps_; }
    double rho_tilde() const { return rho_tilde_; }
    double rho_exact() const { return rho_exact_; }
    /// 2 / rho(S1+, S1-); zero for a constant model.
    double lipschitz_constant() const { return is_constant() ? 0.0 : 2.0 / rho_exact_; }

    const std::vector<std::size_t>& retained_positive() const { return pos_ids_; }
    const std::vector<std::size_t>& retained_negative() const { return neg_ids_; }
    const std::vector<std::size_t>& excluded() const { return excluded_; }
    const Index& positive_index() const { return *pos_index_; }
    const Index& negative_index() const { return *neg_index_; }

    /// Truncated extension over S1 by linear scan.
    double f_exact(const P& x, ExactEvalOptions opts = {}) const {
        require_nonconstant();
        const double sep = opts.use_rho_tilde ? rho_tilde_ : rho_exact_;
        double value = 1.0;
        if (!opts.skip_positives) {
            for (std::size_t i = 0; i < pos_index_->size(); ++i)
                value = std::min(value, truncate(-1.0, 1.0, 1.0 + 2.0 * metric_(x, pos_index_->point(i)) / sep));
        }
        for (std::size_t i = 0; i < neg_index_->size(); ++i)
            value = std::min(value, truncate(-1.0, 1.0, -1.0 + 2.0 * metric_(x, neg_index_->point(i)) / sep));
        return value;
    }

    /// ANN-based estimate of f_exact; within 2*eps of it everywhere.
    double f_tilde(const P& x) const {
        require_nonconstant();
        const Neighbor a = neg_index_->ann_query(x, eps_);
        return truncate(-1.0, 1.0, -1.0 + 2.0 * a.distance / rho_tilde_);
    }

    /// sgn(f_tilde) with sgn(0) = +1.
    int predict(const P& x) const {
        if (is_constant()) return *constant_label_;
        return f_tilde(x) >= 0.0 ? 1 : -1;
    }

    template <class Q, class M>
    friend LipschitzModel<Q, M> train(std::span<const Q>, std::span<const int>, std::span<const std::size_t>,
                                      double, const M&, std::optional<double>);

private:
    void require_nonconstant() const {
        if (is_constant()) throw input_error("constant model has no extension function");
    }

    Metric metric_{};
    double eps_ = 0.0;
    double rho_tilde_ = 0.0;
    double rho_exact_ = 0.0;
    std::optional<int> constant_label_;
    std::vector<std::size_t> pos_ids_, neg_ids_, excluded_;
    std::optional<Index> pos_index_, neg_index_;
};

/// Build the classifier from all points except `exclude`.
///
/// rho_tilde is the minimum over S1+ of ANN distances into the S1- hierarchy,
/// so rho <= rho_tilde <= (1+eps) rho. When `rho_tilde_override` is given (a
/// reloaded model) it is used as is. If one retained class is empty the model
/// is the constant majority label of S1 (ties to +1).
template <class P, class Metric>
LipschitzModel<P, Metric> train(std::span<const P> points, std::span<const int> labels,
                                std::span<const std::size_t> exclude, double eps, const Metric& metric,
                                std::optional<double> rho_tilde_override) {
    check_classifier_eps(eps);
    if (points.size() != labels.size()) throw input_error("points and labels differ in length");

    LipschitzModel<P, Metric> model;
    model.metric_ = metric;
    model.eps_ = eps;

    std::vector<char> dropped(points.size(), 0);
    for (std::size_t id : exclude) {
        if (id >= points.size()) throw input_error("excluded id " + std::to_string(id) + " out of range");
        dropped[id] = 1;
    }
    std::vector<P> pos, neg;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (dropped[i]) {
            model.excluded_.push_back(i);
        } else if (labels[i] == 1) {
            model.pos_ids_.push_back(i);
            pos.push_back(points[i]);
        } else if (labels[i] == -1) {
            model.neg_ids_.push_back(i);
            neg.push_back(points[i]);
        } else {
            throw input_error("label of record " + std::to_string(i) + " is not +1 or -1");
        }
    }
    if (pos.empty() && neg.empty()) throw input_error("every point was excluded");

    if (pos.empty() || neg.empty()) {
        model.constant_label_ = pos.size() >= neg.size() ? 1 : -1;
        return model;
    }

    double rho = std::numeric_limits<double>::infinity();
    for (const auto& p : pos)
        for (const auto& q : neg) rho = std::min(rho, metric(p, q));
    if (!(rho > 0.0)) throw input_error("retained set contains coincident points with opposite labels");
    model.rho_exact_ = rho;

    model.pos_index_.emplace(std::move(pos), metric, model.pos_ids_);
    model.neg_index_.emplace(std::move(neg), metric, model.neg_ids_);

    if (rho_tilde_override) {
        model.rho_tilde_ = *rho_tilde_override;
    } else {
        double est = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < model.pos_index_->size(); ++i)
            est = std::min(est, model.neg_index_->ann_query(model.pos_index_->point(i), eps).distance);
        model.rho_tilde_ = est;
    }
    return model;
}

} // namespace lipclass
