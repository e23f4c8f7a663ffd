#pragma once
// Brute-force oracles and random instance generators shared by the unit
// tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "lipclass/matching.hpp"
#include "lipclass/metric.hpp"
#include "lipclass/point.hpp"
#include "lipclass/rng.hpp"

namespace lipclass::testing {

/// Mean matched cost minimised over all k! permutations.
template <class T, class Ground>
double emd_brute(std::span<const T> s, std::span<const T> t, Ground&& ground) {
    std::vector<std::size_t> perm(s.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < perm.size(); ++i) c += ground(s[i], t[perm[i]]);
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(s.size());
}

inline double emd_brute(const PlanarMultiset& s, const PlanarMultiset& t, BaseDistance base) {
    return emd_brute(std::span<const Planar>(s.items), std::span<const Planar>(t.items),
                     [base](const Planar& a, const Planar& b) { return planar_distance(a, b, base); });
}

/// ERP by enumerating every alignment path (no memoisation).
inline double erp_brute(std::span<const double> r, std::span<const double> s) {
    std::function<double(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> double {
        if (i == r.size() && j == s.size()) return 0.0;
        double best = std::numeric_limits<double>::infinity();
        if (i < r.size() && j < s.size()) best = std::min(best, std::abs(r[i] - s[j]) + go(i + 1, j + 1));
        if (i < r.size()) best = std::min(best, std::abs(r[i]) + go(i + 1, j));
        if (j < s.size()) best = std::min(best, std::abs(s[j]) + go(i, j + 1));
        return best;
    };
    return go(0, 0);
}

/// Minimum vertex cover size by enumerating subsets of the smaller side.
inline std::size_t cover_brute(const BipartiteGraph& g) {
    const std::size_t nl = g.left_size(), nr = g.right_size();
    std::vector<std::vector<std::size_t>> adj(nl);
    for (std::size_t u = 0; u < nl; ++u) adj[u] = g.neighbors(u);
    const bool flip = nr < nl;
    const std::size_t small = flip ? nr : nl;
    const std::size_t large = flip ? nl : nr;
    // neighbour masks from the small side into the large side
    std::vector<std::vector<bool>> nb(small, std::vector<bool>(large, false));
    for (std::size_t u = 0; u < nl; ++u)
        for (std::size_t v : adj[u]) (flip ? nb[v][u] : nb[u][v]) = true;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << small); ++mask) {
        std::vector<bool> need(large, false);
        std::size_t size = 0;
        for (std::size_t a = 0; a < small; ++a) {
            if (mask >> a & 1) {
                ++size;
                continue;
            }
            for (std::size_t b = 0; b < large; ++b)
                if (nb[a][b]) need[b] = true;
        }
        size += static_cast<std::size_t>(std::count(need.begin(), need.end(), true));
        best = std::min(best, size);
    }
    return best;
}

/// True when every edge has an endpoint in the cover.
inline bool is_cover(const BipartiteGraph& g, const VertexCover& c) {
    std::vector<bool> l(g.left_size(), false), r(g.right_size(), false);
    for (auto u : c.left) l[u] = true;
    for (auto v : c.right) r[v] = true;
    for (std::size_t u = 0; u < g.left_size(); ++u)
        for (auto v : g.neighbors(u))
            if (!l[u] && !r[v]) return false;
    return true;
}

inline std::vector<double> random_vector(SplitMix64& rng, std::size_t dim, double lo = 0.0, double hi = 1.0) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

inline PlanarMultiset random_multiset(SplitMix64& rng, std::size_t k) {
    std::vector<Planar> pts(k);
    for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
    return PlanarMultiset(std::move(pts));
}

/// Labels from a noisy linear rule, guaranteed to contain both classes.
inline std::vector<int> random_labels(SplitMix64& rng, const std::vector<std::vector<double>>& pts, double noise) {
    std::vector<int> y(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        int label = pts[i][0] + 0.3 * pts[i][1] < 0.65 ? 1 : -1;
        if (rng.uniform() < noise) label = -label;
        y[i] = label;
    }
    if (std::count(y.begin(), y.end(), 1) == 0) y.front() = 1;
    if (std::count(y.begin(), y.end(), -1) == 0) y.back() = -1;
    return y;
}

inline double l2(const std::vector<double>& a, const std::vector<double>& b) { return lp_distance(a, b, 2); }

struct L2Metric {
    double operator()(const std::vector<double>& a, const std::vector<double>& b) const { return l2(a, b); }
};

} // namespace lipclass::testing
