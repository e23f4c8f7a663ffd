#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace lipclass {

/// Undirected bipartite graph with vertices 0..left-1 and 0..right-1.
class BipartiteGraph {
public:
    BipartiteGraph(std::size_t left, std::size_t right) : adj_(left), right_(right) {}

    void add_edge(std::size_t u, std::size_t v) { adj_[u].push_back(v); }

    /// Sort adjacency lists so that scans visit edges in (u, v) order.
    void finalize() {
        for (auto& a : adj_) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
    }

    std::size_t left_size() const { return adj_.size(); }
    std::size_t right_size() const { return right_; }
    const std::vector<std::size_t>& neighbors(std::size_t u) const { return adj_[u]; }

    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& a : adj_) e += a.size();
        return e;
    }

private:
    std::vector<std::vector<std::size_t>> adj_;
    std::size_t right_;
};

inline constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

struct Matching {
    std::size_t size = 0;
    std::vector<std::size_t> mate_left;   // right partner of each left vertex
    std::vector<std::size_t> mate_right;  // left partner of each right vertex
};

/// Maximum cardinality matching, Hopcroft-Karp, O(E sqrt(V)).
inline Matching hopcroft_karp(const BipartiteGraph& g) {
    const std::size_t nl = g.left_size();
    const std::size_t inf = std::numeric_limits<std::size_t>::max();
    Matching m;
    m.mate_left.assign(nl, kUnmatched);
    m.mate_right.assign(g.right_size(), kUnmatched);
    std::vector<std::size_t> dist(nl);
    std::vector<std::size_t> cursor(nl);

    auto bfs = [&]() {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < nl; ++u) {
            if (m.mate_left[u] == kUnmatched) {
                dist[u] = 0;
                q.push(u);
            } else {
                dist[u] = inf;
            }
        }
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v : g.neighbors(u)) {
                const std::size_t w = m.mate_right[v];
                if (w == kUnmatched) {
                    found = true;
                } else if (dist[w] == inf) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    };

    // Iterative layered DFS from a free left vertex.
    auto dfs = [&](std::size_t root) {
        std::vector<std::size_t> path{root};
        while (!path.empty()) {
            const std::size_t u = path.back();
            const auto& nb = g.neighbors(u);
            bool advanced = false;
            while (cursor[u] < nb.size()) {
                const std::size_t v = nb[cursor[u]];
                const std::size_t w = m.mate_right[v];
                if (w == kUnmatched) {
                    // Flip the alternating path root..u..v.
                    std::size_t right = v;
                    for (std::size_t k = path.size(); k-- > 0;) {
                        const std::size_t left = path[k];
                        const std::size_t prev = m.mate_left[left];
                        m.mate_left[left] = right;
                        m.mate_right[right] = left;
                        right = prev;
                    }
                    return true;
                }
                if (dist[w] == dist[u] + 1) {
                    ++cursor[u];
                    path.push_back(w);
                    advanced = true;
                    break;
                }
                ++cursor[u];
            }
            if (!advanced) {
                dist[u] = inf;
                path.pop_back();
            }
        }
        return false;
    };

    while (bfs()) {
        std::fill(cursor.begin(), cursor.end(), 0);
        for (std::size_t u = 0; u < nl; ++u)
            if (m.mate_left[u] == kUnmatched && dfs(u)) ++m.size;
    }
    return m;
}

struct VertexCover {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    std::size_t size() const { return left.size() + right.size(); }
};

/// Minimum vertex cover from a maximum matching (Konig): with Z the vertices
/// reachable from free left vertices by alternating paths, the cover is
/// (left \ Z) + (right & Z).
inline VertexCover konig_cover(const BipartiteGraph& g, const Matching& m) {
    std::vector<char> seen_left(g.left_size(), 0), seen_right(g.right_size(), 0);
    std::queue<std::size_t> q;
    for (std::size_t u = 0; u < g.left_size(); ++u) {
        if (m.mate_left[u] == kUnmatched) {
            seen_left[u] = 1;
            q.push(u);
        }
    }
    while (!q.empty()) {
        const std::size_t u = q.front();
        q.pop();
        for (std::size_t v : g.neighbors(u)) {
            if (seen_right[v] || m.mate_left[u] == v) continue;
            seen_right[v] = 1;
            const std::size_t w = m.mate_right[v];
            if (w != kUnmatched && !seen_left[w]) {
                seen_left[w] = 1;
                q.push(w);
            }
        }
    }
    VertexCover c;
    for (std::size_t u = 0; u < g.left_size(); ++u)
        if (!seen_left[u]) c.left.push_back(u);
    for (std::size_t v = 0; v < g.right_size(); ++v)
        if (seen_right[v]) c.right.push_back(v);
    return c;
}

inline VertexCover minimum_vertex_cover(const BipartiteGraph& g) { return konig_cover(g, hopcroft_karp(g)); }

/// 2-approximate cover: scan edges in ascending (u, v) order and take both
/// endpoints of every edge not yet covered (a maximal matching).
inline VertexCover greedy_vertex_cover(const BipartiteGraph& g) {
    std::vector<char> used_left(g.left_size(), 0), used_right(g.right_size(), 0);
    VertexCover c;
    for (std::size_t u = 0; u < g.left_size(); ++u) {
        for (std::size_t v : g.neighbors(u)) {
            if (used_left[u]) break;
            if (used_right[v]) continue;
            used_left[u] = used_right[v] = 1;
            c.left.push_back(u);
            c.right.push_back(v);
        }
    }
    std::sort(c.right.begin(), c.right.end());
    return c;
}

} // namespace lipclass
