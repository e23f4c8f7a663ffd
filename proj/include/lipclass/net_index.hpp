#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "lipclass/errors.hpp"

namespace lipclass {

struct Neighbor {
    std::size_t id = 0;
    double distance = std::numeric_limits<double>::infinity();
};

/// Linear-scan nearest neighbour. Ties go to the lowest id.
template <class P, class Metric>
Neighbor exact_nn(std::span<const P> points, const Metric& metric, const P& q) {
    if (points.empty()) throw input_error("nearest neighbour query on an empty set");
    Neighbor best;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = metric(q, points[i]);
        if (d < best.distance) best = {i, d};
    }
    return best;
}

/// Hierarchy of nested nets with radii halving from level to level.
///
/// Level 0 holds a single root whose radius strictly exceeds the distance from
/// the root to every point. Each deeper level is built greedily in insertion
/// order: a point joins once it is at least the level radius away from every
/// current member. Every level is therefore a net of the whole set at its
/// radius, and the deepest level holds one representative per distinct point;
/// exact duplicates are attached to their representative.
template <class P, class Metric>
class NetHierarchy {
public:
    struct Level {
        double radius = 0.0;
        /// local point index of each member
        std::vector<std::size_t> members;
        /// index of the parent within the previous level (0 for the root level)
        std::vector<std::size_t> parent;
        /// distance from member to its parent
        std::vector<double> parent_distance;
        /// indices into the next level
        std::vector<std::vector<std::size_t>> children;
        /// upper bound on the distance from the member to any point below it
        std::vector<double> extent;
    };

    NetHierarchy(std::vector<P> points, Metric metric, std::vector<std::size_t> ids = {})
        : points_(std::move(points)), metric_(std::move(metric)), ids_(std::move(ids)) {
        if (ids_.empty()) {
            ids_.resize(points_.size());
            for (std::size_t i = 0; i < ids_.size(); ++i) ids_[i] = i;
        }
        if (ids_.size() != points_.size()) throw input_error("hierarchy ids and points differ in length");
        if (!points_.empty()) build();
    }

    bool empty() const { return points_.empty(); }
    std::size_t size() const { return points_.size(); }
    const std::vector<Level>& levels() const { return levels_; }
    const P& point(std::size_t local) const { return points_[local]; }
    std::size_t id(std::size_t local) const { return ids_[local]; }
    const Metric& metric() const { return metric_; }

    /// Local indices of points identical to representative `local` (excluding it).
    const std::vector<std::size_t>& duplicates(std::size_t local) const { return duplicates_[local]; }

    /// (1+eps)-approximate nearest neighbour. eps <= 0 disables early
    /// termination and yields the exact nearest neighbour.
    Neighbor ann_query(const P& q, double eps) const {
        if (points_.empty()) throw input_error("query on an empty hierarchy");
        const double stop_factor = eps > 0.0 ? 2.0 + 2.0 / eps : std::numeric_limits<double>::infinity();

        std::vector<std::pair<std::size_t, double>> frontier{{0, metric_(q, points_[levels_[0].members[0]])}};
        std::vector<std::pair<std::size_t, double>> next;
        for (std::size_t li = 0;; ++li) {
            const Level& level = levels_[li];
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [node, d] : frontier) best = std::min(best, d);

            const bool bottom = li + 1 == levels_.size();
            if (bottom || best >= level.radius * stop_factor) {
                Neighbor out;
                for (const auto& [node, d] : frontier) {
                    const std::size_t local = level.members[node];
                    if (d < out.distance || (d == out.distance && ids_[local] < out.id)) out = {ids_[local], d};
                }
                return out;
            }

            const Level& below = levels_[li + 1];
            next.clear();
            double child_best = std::numeric_limits<double>::infinity();
            for (const auto& [node, d] : frontier) {
                for (std::size_t c : level.children[node]) {
                    // A member is its own child at distance 0.
                    const double dc = below.parent_distance[c] == 0.0 && below.members[c] == level.members[node]
                                          ? d
                                          : metric_(q, points_[below.members[c]]);
                    next.emplace_back(c, dc);
                    child_best = std::min(child_best, dc);
                }
            }
            const double keep = (child_best + 2.0 * below.radius) * (1.0 + 1e-12);
            frontier.clear();
            for (const auto& e : next)
                if (e.second <= keep) frontier.push_back(e);
        }
    }

    Neighbor nearest(const P& q) const { return ann_query(q, 0.0); }

private:
    void build() {
        const std::size_t n = points_.size();
        duplicates_.assign(n, {});

        double reach = 0.0;
        std::vector<double> to_root(n, 0.0);
        for (std::size_t p = 1; p < n; ++p) {
            to_root[p] = metric_(points_[0], points_[p]);
            reach = std::max(reach, to_root[p]);
        }

        Level root;
        root.radius = reach > 0.0 ? std::ldexp(1.0, std::ilogb(reach) + 1) : 1.0;
        root.members = {0};
        root.parent = {0};
        root.parent_distance = {0.0};
        levels_.push_back(std::move(root));

        // Points still waiting to join, with the current-level members within
        // four radii of them (as indices into the current level).
        struct Pending {
            std::size_t local;
            std::vector<std::size_t> near;
        };
        std::vector<Pending> pending;
        for (std::size_t p = 1; p < n; ++p) {
            if (to_root[p] == 0.0) {
                duplicates_[0].push_back(p);
                continue;
            }
            pending.push_back({p, {0}});
        }

        while (!pending.empty()) {
            const Level& upper = levels_.back();
            Level level;
            level.radius = upper.radius / 2.0;
            std::vector<std::vector<std::size_t>> children(upper.members.size());
            for (std::size_t j = 0; j < upper.members.size(); ++j) {
                children[j].push_back(level.members.size());
                level.members.push_back(upper.members[j]);
                level.parent.push_back(j);
                level.parent_distance.push_back(0.0);
            }

            std::vector<Pending> still;
            still.reserve(pending.size());
            for (auto& item : pending) {
                const P& x = points_[item.local];
                double closest = std::numeric_limits<double>::infinity();
                std::size_t closest_member = 0;
                for (std::size_t a : item.near) {
                    for (std::size_t c : children[a]) {
                        const double d = metric_(x, points_[level.members[c]]);
                        if (d < closest) {
                            closest = d;
                            closest_member = c;
                        }
                    }
                }
                if (closest == 0.0) {
                    duplicates_[level.members[closest_member]].push_back(item.local);
                    continue;
                }
                if (closest >= level.radius) {
                    std::size_t parent = item.near.front();
                    double parent_d = std::numeric_limits<double>::infinity();
                    for (std::size_t a : item.near) {
                        const double d = metric_(x, points_[upper.members[a]]);
                        if (d < parent_d) {
                            parent_d = d;
                            parent = a;
                        }
                    }
                    children[parent].push_back(level.members.size());
                    level.members.push_back(item.local);
                    level.parent.push_back(parent);
                    level.parent_distance.push_back(parent_d);
                    continue;
                }
                still.push_back(std::move(item));
            }

            // Refresh neighbourhoods against the new level.
            const double reach_below = 4.0 * level.radius;
            for (auto& item : still) {
                std::vector<std::size_t> near;
                for (std::size_t a : item.near)
                    for (std::size_t c : children[a])
                        if (metric_(points_[item.local], points_[level.members[c]]) <= reach_below)
                            near.push_back(c);
                item.near = std::move(near);
            }
            pending = std::move(still);
            levels_.back().children = std::move(children);
            levels_.push_back(std::move(level));
        }
        levels_.back().children.assign(levels_.back().members.size(), {});

        for (std::size_t li = levels_.size(); li-- > 0;) {
            Level& level = levels_[li];
            level.extent.assign(level.members.size(), 0.0);
            if (li + 1 == levels_.size()) continue;
            const Level& below = levels_[li + 1];
            for (std::size_t j = 0; j < level.members.size(); ++j)
                for (std::size_t c : level.children[j])
                    level.extent[j] = std::max(level.extent[j], below.parent_distance[c] + below.extent[c]);
        }
    }

    std::vector<P> points_;
    Metric metric_;
    std::vector<std::size_t> ids_;
    std::vector<Level> levels_;
    std::vector<std::vector<std::size_t>> duplicates_;
};

struct DoublingEstimate {
    double ddim_hat = 0.0;
    double diam_hat = 0.0;
};

/// Points up to this count get an exact all-pairs diameter; beyond it the
/// diameter is the max over (every stride-th point) x (all points).
inline constexpr std::size_t kExactDiameterLimit = 2048;

template <class P, class Metric>
double estimate_diameter(std::span<const P> points, const Metric& metric) {
    const std::size_t n = points.size();
    const std::size_t stride = n <= kExactDiameterLimit ? 1 : (n + kExactDiameterLimit - 1) / kExactDiameterLimit;
    double diam = 0.0;
    for (std::size_t i = 0; i < n; i += stride)
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && (stride > 1 || j > i)) diam = std::max(diam, metric(points[i], points[j]));
    return diam;
}

template <class P, class Metric>
std::size_t max_children(const NetHierarchy<P, Metric>& h) {
    std::size_t most = 1;
    for (const auto& level : h.levels())
        for (const auto& c : level.children) most = std::max(most, c.size());
    return most;
}

/// Empirical doubling dimension: log2 of the largest child count in the
/// hierarchy, together with the (sampled) diameter.
template <class P, class Metric>
DoublingEstimate estimate_doubling(std::span<const P> points, const Metric& metric) {
    if (points.size() < 2) throw input_error("doubling estimate needs at least two points");
    NetHierarchy<P, Metric> h(std::vector<P>(points.begin(), points.end()), metric);
    DoublingEstimate out;
    out.ddim_hat = std::log2(static_cast<double>(max_children(h)));
    out.diam_hat = estimate_diameter(points, metric);
    return out;
}

/// Geometric rounding grid with ratio `base` > 1. A value d maps to the
/// exponent floor(log_base d); its rounded value is base^exponent.
class RoundingGrid {
public:
    explicit RoundingGrid(double base) : base_(base), log_base_(std::log(base)) {
        if (!(base > 1.0)) throw config_error("rounding grid ratio must exceed 1");
    }
    double base() const { return base_; }
    long long exponent(double d) const { return static_cast<long long>(std::floor(std::log(d) / log_base_)); }
    double value(long long e) const { return std::pow(base_, static_cast<double>(e)); }
    double round_down(double d) const { return value(exponent(d)); }

private:
    double base_;
    double log_base_;
};

/// Distinct cross distances between the two point sets, rounded down to
/// powers of (1 + eps/ddim). Node pairs are expanded only until the possible
/// spread of their descendant distances fits in one grid ratio, at which point
/// both end buckets are emitted; the true bucket of every positive cross
/// distance is therefore in the output.
template <class P, class Metric>
std::vector<double> extract_rounded_critical_values(const NetHierarchy<P, Metric>& positives,
                                                    const NetHierarchy<P, Metric>& negatives, double eps,
                                                    double ddim) {
    if (positives.empty() || negatives.empty()) throw input_error("critical values need both hierarchies nonempty");
    if (!(eps > 0.0)) throw config_error("eps must be positive");
    if (!(ddim > 0.0)) throw config_error("ddim must be positive");
    const RoundingGrid grid(1.0 + eps / ddim);

    struct Node {
        std::size_t level;
        std::size_t index;
    };
    std::vector<std::pair<Node, Node>> stack{{{0, 0}, {0, 0}}};
    std::vector<long long> exponents;
    const auto& lp = positives.levels();
    const auto& ln = negatives.levels();
    const auto& metric = positives.metric();

    while (!stack.empty()) {
        const auto [a, b] = stack.back();
        stack.pop_back();
        const double ea = lp[a.level].extent[a.index];
        const double eb = ln[b.level].extent[b.index];
        const double d = metric(positives.point(lp[a.level].members[a.index]),
                                negatives.point(ln[b.level].members[b.index]));
        if (ea == 0.0 && eb == 0.0) {
            if (d > 0.0) exponents.push_back(grid.exponent(d));
            continue;
        }
        const double lo = d - ea - eb;
        const double hi = d + ea + eb;
        if (lo > 0.0 && hi <= lo * grid.base()) {
            for (long long e = grid.exponent(lo), last = grid.exponent(hi); e <= last; ++e) exponents.push_back(e);
            continue;
        }
        if (ea >= eb) {
            for (std::size_t c : lp[a.level].children[a.index]) stack.push_back({{a.level + 1, c}, b});
        } else {
            for (std::size_t c : ln[b.level].children[b.index]) stack.push_back({a, {b.level + 1, c}});
        }
    }

    std::sort(exponents.begin(), exponents.end());
    exponents.erase(std::unique(exponents.begin(), exponents.end()), exponents.end());
    std::vector<double> out;
    out.reserve(exponents.size());
    for (long long e : exponents) out.push_back(grid.value(e));
    return out;
}

} // namespace lipclass
