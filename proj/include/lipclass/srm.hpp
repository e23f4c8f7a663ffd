#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lipclass/bounds.hpp"
#include "lipclass/classifier.hpp"
#include "lipclass/errors.hpp"
#include "lipclass/matching.hpp"
#include "lipclass/metric.hpp"
#include "lipclass/net_index.hpp"

namespace lipclass {

/// Sorted distinct positive distances between oppositely labelled points.
inline std::vector<double> cross_distances(const DistanceMatrix& dm, std::span<const int> labels) {
    std::vector<double> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < labels.size(); ++j)
            if (labels[j] == -1 && dm(i, j) > 0.0) out.push_back(dm(i, j));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Lipschitz constants 2/rho(x+, x-) over all cross pairs, ascending.
/// Empty when either class is empty.
inline std::vector<double> critical_values_exact(const DistanceMatrix& dm, std::span<const int> labels) {
    const auto dists = cross_distances(dm, labels);
    std::vector<double> out;
    out.reserve(dists.size());
    for (auto it = dists.rbegin(); it != dists.rend(); ++it) out.push_back(2.0 / *it);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// (2/diam) (1 + eps/ddim)^i for i = 0 .. ceil(log_{1+eps/ddim}(n/2)).
inline std::vector<double> grid_values(double diam, double ddim, double eps, std::size_t n) {
    if (!(diam > 0.0)) throw config_error("grid needs diam > 0");
    if (!(ddim > 0.0)) throw config_error("grid needs ddim > 0");
    if (!(eps > 0.0 && eps < 1.0)) throw config_error("grid needs eps in (0, 1)");
    if (n < 2) throw config_error("grid needs n >= 2");
    const double ratio = 1.0 + eps / ddim;
    const auto steps =
        static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n) / 2.0) / std::log(ratio)));
    std::vector<double> out;
    out.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) out.push_back((2.0 / diam) * std::pow(ratio, static_cast<double>(i)));
    return out;
}

/// Conflict graph at a distance threshold: an edge joins every positive and
/// negative point closer than `threshold` (= 2/L).
struct ConflictGraph {
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    BipartiteGraph graph{0, 0};
};

inline ConflictGraph conflict_graph(const DistanceMatrix& dm, std::span<const int> labels, double threshold) {
    ConflictGraph cg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? cg.positives : cg.negatives).push_back(i);
    cg.graph = BipartiteGraph(cg.positives.size(), cg.negatives.size());
    for (std::size_t a = 0; a < cg.positives.size(); ++a)
        for (std::size_t b = 0; b < cg.negatives.size(); ++b)
            if (dm(cg.positives[a], cg.negatives[b]) < threshold) cg.graph.add_edge(a, b);
    cg.graph.finalize();
    return cg;
}

struct CoverResult {
    std::size_t k = 0;
    /// excluded point ids, ascending
    std::vector<std::size_t> excluded;
    std::size_t matching_size = 0;
};

namespace detail {

inline CoverResult to_ids(const ConflictGraph& cg, const VertexCover& c, std::size_t matching) {
    CoverResult r;
    for (std::size_t a : c.left) r.excluded.push_back(cg.positives[a]);
    for (std::size_t b : c.right) r.excluded.push_back(cg.negatives[b]);
    std::sort(r.excluded.begin(), r.excluded.end());
    r.k = r.excluded.size();
    r.matching_size = matching;
    return r;
}

inline double threshold_of(double lipschitz) {
    if (!(lipschitz > 0.0)) throw config_error("Lipschitz constant must be positive");
    return 2.0 / lipschitz;
}

} // namespace detail

/// Minimum number of points to drop so no cross pair is closer than
/// `threshold`, via maximum matching and Konig's theorem.
inline CoverResult k_exact_at(const DistanceMatrix& dm, std::span<const int> labels, double threshold) {
    const auto cg = conflict_graph(dm, labels, threshold);
    const auto m = hopcroft_karp(cg.graph);
    return detail::to_ids(cg, konig_cover(cg.graph, m), m.size);
}

inline CoverResult k_exact(const DistanceMatrix& dm, std::span<const int> labels, double lipschitz) {
    return k_exact_at(dm, labels, detail::threshold_of(lipschitz));
}

/// Greedy maximal-matching cover; k <= k' <= 2k.
inline CoverResult k_greedy_at(const DistanceMatrix& dm, std::span<const int> labels, double threshold) {
    const auto cg = conflict_graph(dm, labels, threshold);
    const auto c = greedy_vertex_cover(cg.graph);
    return detail::to_ids(cg, c, c.left.size());
}

inline CoverResult k_greedy(const DistanceMatrix& dm, std::span<const int> labels, double lipschitz) {
    return k_greedy_at(dm, labels, detail::threshold_of(lipschitz));
}

/// Vertex-cover instance stored implicitly over a net of the sample.
struct SparsifiedInstance {
    double net_radius = 0.0;
    double pair_radius = 0.0;
    /// point id of each net point, in net order
    std::vector<std::size_t> net;
    /// net index each point is mapped to
    std::vector<std::size_t> assigned;
    /// per net point, ascending ids of mapped positive / negative points
    std::vector<std::vector<std::size_t>> positives;
    std::vector<std::vector<std::size_t>> negatives;
    /// ordered (net index of a positive list, net index of a negative list)
    /// pairs within pair_radius, lexicographic
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    /// The implied edge set, as (positive id, negative id), ascending.
    std::vector<std::pair<std::size_t, std::size_t>> explicit_edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (const auto& [a, b] : pairs)
            for (std::size_t u : positives[a])
                for (std::size_t v : negatives[b]) out.emplace_back(u, v);
        std::sort(out.begin(), out.end());
        return out;
    }
};

/// Build the implicit instance for Lipschitz constant L with s = eps/ddim:
/// a greedy (s * 2/L)-net of the sample, and every net pair within
/// (1 - 2s) * 2/L.
inline SparsifiedInstance build_sparsified_instance(const DistanceMatrix& dm, std::span<const int> labels,
                                                    double lipschitz, double eps, double ddim) {
    if (!(eps > 0.0)) throw config_error("eps must be positive");
    if (!(ddim > 0.0)) throw config_error("ddim must be positive");
    const double s = eps / ddim;
    if (!(s < 0.5)) throw config_error("sparsified instance needs eps/ddim < 1/2");
    const double threshold = detail::threshold_of(lipschitz);
    const std::size_t n = labels.size();

    SparsifiedInstance inst;
    inst.net_radius = s * threshold;
    inst.pair_radius = (1.0 - 2.0 * s) * threshold;
    for (std::size_t i = 0; i < n; ++i) {
        bool separated = true;
        for (std::size_t c : inst.net) {
            if (dm(i, c) < inst.net_radius) {
                separated = false;
                break;
            }
        }
        if (separated) inst.net.push_back(i);
    }
    inst.assigned.assign(n, 0);
    inst.positives.assign(inst.net.size(), {});
    inst.negatives.assign(inst.net.size(), {});
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < inst.net.size(); ++c)
            if (dm(i, inst.net[c]) < dm(i, inst.net[best])) best = c;
        inst.assigned[i] = best;
        (labels[i] == 1 ? inst.positives : inst.negatives)[best].push_back(i);
    }
    for (std::size_t a = 0; a < inst.net.size(); ++a) {
        if (inst.positives[a].empty()) continue;
        for (std::size_t b = 0; b < inst.net.size(); ++b)
            if (!inst.negatives[b].empty() && dm(inst.net[a], inst.net[b]) <= inst.pair_radius)
                inst.pairs.emplace_back(a, b);
    }
    return inst;
}

/// Greedy cover on the implicit instance: for each recorded net pair in
/// order, repeatedly delete the lowest remaining positive and negative ids
/// from the two lists until one list runs out.
inline CoverResult greedy_cover_sparsified(const SparsifiedInstance& inst) {
    auto pos = inst.positives;
    auto neg = inst.negatives;
    std::vector<std::size_t> head_pos(pos.size(), 0), head_neg(neg.size(), 0);
    CoverResult r;
    for (const auto& [a, b] : inst.pairs) {
        while (head_pos[a] < pos[a].size() && head_neg[b] < neg[b].size()) {
            r.excluded.push_back(pos[a][head_pos[a]++]);
            r.excluded.push_back(neg[b][head_neg[b]++]);
            ++r.matching_size;
        }
    }
    std::sort(r.excluded.begin(), r.excluded.end());
    r.k = r.excluded.size();
    return r;
}

enum class SrmVariant { exact, grid_exact, grid_greedy, grid_greedy_sparse };

inline std::string to_string(SrmVariant v) {
    switch (v) {
    case SrmVariant::exact: return "exact";
    case SrmVariant::grid_exact: return "grid-exact";
    case SrmVariant::grid_greedy: return "grid-greedy";
    case SrmVariant::grid_greedy_sparse: return "grid-greedy-sparse";
    }
    return "?";
}

inline SrmVariant parse_variant(const std::string& s) {
    if (s == "exact") return SrmVariant::exact;
    if (s == "grid-exact") return SrmVariant::grid_exact;
    if (s == "grid-greedy") return SrmVariant::grid_greedy;
    if (s == "grid-greedy-sparse") return SrmVariant::grid_greedy_sparse;
    throw config_error("unknown SRM variant '" + s + "'");
}

/// Guaranteed factor of the selected bound relative to the optimum.
inline std::string approximation_tag(SrmVariant v) {
    switch (v) {
    case SrmVariant::exact: return "exact";
    case SrmVariant::grid_exact: return "1+eps";
    case SrmVariant::grid_greedy: return "2";
    case SrmVariant::grid_greedy_sparse: return "2(1+eps)";
    }
    return "?";
}

struct SrmOptions {
    SrmVariant variant = SrmVariant::exact;
    /// ANN slack of the deployed classifier, in (0, 1/32)
    double eps = 0.01;
    /// grid spacing parameter in (0, 1); defaults to eps
    std::optional<double> grid_eps;
    double delta = 0.05;
    std::optional<double> diam;
    std::optional<double> ddim;
};

struct SrmCandidate {
    double lipschitz = 0.0;
    std::size_t k = 0;
    double dim = 0.0;
    double bound = 0.0;
    std::string method;
    /// distance threshold the cover was computed at (0 for the constant option)
    double threshold = 0.0;
};

struct SrmReport {
    std::vector<SrmCandidate> candidates;
    std::size_t selected = 0;
    std::string approximation;
    SrmVariant variant = SrmVariant::exact;
    std::size_t n = 0;
    double diam = 0.0;
    double ddim = 0.0;
    double eps = 0.0;
    double grid_eps = 0.0;
    double delta = 0.0;
    /// excluded ids for the selected candidate
    std::vector<std::size_t> excluded;

    const SrmCandidate& best() const { return candidates[selected]; }
};

inline void check_srm_options(const SrmOptions& o) {
    check_classifier_eps(o.eps);
    if (!(o.delta > 0.0 && o.delta < 1.0)) throw config_error("delta must lie in (0, 1)");
    if (o.grid_eps && !(*o.grid_eps > 0.0 && *o.grid_eps < 1.0)) throw config_error("grid eps must lie in (0, 1)");
    if (o.diam && !(*o.diam > 0.0)) throw config_error("diam override must be positive");
    if (o.ddim && !(*o.ddim > 0.0)) throw config_error("ddim override must be positive");
}

/// Bound G used for model selection: k/n plus the agnostic complexity term,
/// with that term capped at 1 (it is 1 whenever D >= n).
inline double srm_bound(std::size_t n, std::size_t k, double dim, double delta) {
    const double nn = static_cast<double>(n);
    double complexity = 1.0;
    if (dim < nn) complexity = std::min(1.0, bounds::agnostic_complexity(nn, dim, delta));
    return static_cast<double>(k) / nn + complexity;
}

inline double constant_bound(std::size_t n, std::size_t k, double delta) {
    const double nn = static_cast<double>(n);
    return static_cast<double>(k) / nn + std::min(1.0, bounds::constant_complexity(nn, delta));
}

/// Evaluate every candidate L of the chosen variant on a precomputed distance
/// table and pick the smallest bound (ties to the smaller L).
inline SrmReport srm_select(const DistanceMatrix& dm, std::span<const int> labels, const SrmOptions& opts,
                            double diam, double ddim) {
    check_srm_options(opts);
    const std::size_t n = labels.size();
    if (n == 0) throw input_error("SRM needs at least one point");
    const double grid_eps = opts.grid_eps.value_or(opts.eps);
    const double grid_ddim = ddim > 0.0 ? ddim : 1.0;

    SrmReport rep;
    rep.variant = opts.variant;
    rep.approximation = approximation_tag(opts.variant);
    rep.n = n;
    rep.diam = diam;
    rep.ddim = ddim;
    rep.eps = opts.eps;
    rep.grid_eps = grid_eps;
    rep.delta = opts.delta;

    const auto npos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const std::size_t nneg = n - npos;
    {
        SrmCandidate c;
        c.k = std::min(npos, nneg);
        c.bound = constant_bound(n, c.k, opts.delta);
        c.method = "constant";
        rep.candidates.push_back(c);
    }

    const auto dim_at = [&](double lipschitz) {
        return diam > 0.0 ? bounds::fat_dim(lipschitz, diam, ddim, opts.eps) : 0.0;
    };
    const auto add = [&](double lipschitz, double threshold, std::size_t k, double effective_l) {
        SrmCandidate c;
        c.lipschitz = lipschitz;
        c.threshold = threshold;
        c.k = k;
        c.dim = std::isinf(effective_l) ? bounds::kInfinity : dim_at(effective_l);
        c.bound = srm_bound(n, k, c.dim, opts.delta);
        c.method = to_string(opts.variant);
        rep.candidates.push_back(c);
    };

    const double sparse_s = grid_eps / grid_ddim;
    if (npos > 0 && nneg > 0) {
        const auto cross = cross_distances(dm, labels);
        if (opts.variant == SrmVariant::exact) {
            for (auto it = cross.rbegin(); it != cross.rend(); ++it) {
                const double lipschitz = 2.0 / *it;
                add(lipschitz, *it, k_exact_at(dm, labels, *it).k, lipschitz);
            }
        } else if (!cross.empty() && n >= 2 && diam > 0.0) {
            for (double lipschitz : grid_values(diam, grid_ddim, grid_eps, n)) {
                const double t = 2.0 / lipschitz;
                switch (opts.variant) {
                case SrmVariant::grid_exact: add(lipschitz, t, k_exact_at(dm, labels, t).k, lipschitz); break;
                case SrmVariant::grid_greedy: add(lipschitz, t, k_greedy_at(dm, labels, t).k, lipschitz); break;
                case SrmVariant::grid_greedy_sparse: {
                    const auto inst = build_sparsified_instance(dm, labels, lipschitz, grid_eps, grid_ddim);
                    const double shrink = 1.0 - 4.0 * sparse_s;
                    add(lipschitz, t, greedy_cover_sparsified(inst).k,
                        shrink > 0.0 ? lipschitz / shrink : bounds::kInfinity);
                    break;
                }
                case SrmVariant::exact: break;
                }
            }
        }
    }

    for (std::size_t i = 1; i < rep.candidates.size(); ++i) {
        const auto& c = rep.candidates[i];
        const auto& b = rep.candidates[rep.selected];
        if (c.bound < b.bound || (c.bound == b.bound && c.lipschitz < b.lipschitz)) rep.selected = i;
    }

    const auto& best = rep.best();
    if (rep.selected == 0) {
        // Drop the minority class; on a tie keep the positives.
        const int drop = npos >= nneg ? -1 : 1;
        if (npos > 0 && nneg > 0)
            for (std::size_t i = 0; i < n; ++i)
                if (labels[i] == drop) rep.excluded.push_back(i);
    } else {
        switch (opts.variant) {
        case SrmVariant::exact:
        case SrmVariant::grid_exact: rep.excluded = k_exact_at(dm, labels, best.threshold).excluded; break;
        case SrmVariant::grid_greedy: rep.excluded = k_greedy_at(dm, labels, best.threshold).excluded; break;
        case SrmVariant::grid_greedy_sparse:
            rep.excluded =
                greedy_cover_sparsified(build_sparsified_instance(dm, labels, best.lipschitz, grid_eps, grid_ddim))
                    .excluded;
            break;
        }
    }
    return rep;
}

template <class P, class Metric>
struct SrmResult {
    SrmReport report;
    LipschitzModel<P, Metric> model;
};

/// Full pipeline: distances, doubling estimate (unless overridden), candidate
/// sweep, and the classifier trained without the selected exclusions.
template <class P, class Metric>
SrmResult<P, Metric> run_srm(std::span<const P> points, std::span<const int> labels, const Metric& metric,
                             const SrmOptions& opts) {
    check_srm_options(opts);
    if (points.empty()) throw input_error("SRM needs at least one point");
    if (points.size() != labels.size()) throw input_error("points and labels differ in length");
    const auto dm = pairwise_distances(points, metric);

    double diam = opts.diam.value_or(0.0);
    double ddim = opts.ddim.value_or(0.0);
    if (points.size() >= 2 && (!opts.diam || !opts.ddim)) {
        const auto est = estimate_doubling(points, metric);
        if (!opts.diam) diam = est.diam_hat;
        if (!opts.ddim) ddim = est.ddim_hat;
    }
    auto report = srm_select(dm, labels, opts, diam, ddim);
    auto model = train(points, labels, std::span<const std::size_t>(report.excluded), opts.eps, metric);
    return {std::move(report), std::move(model)};
}

} // namespace lipclass
