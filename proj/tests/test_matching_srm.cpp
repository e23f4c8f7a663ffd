#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "lipclass/srm.hpp"
#include "support.hpp"

using namespace lipclass;
using namespace lipclass::testing;
using Catch::Approx;
using Vec = std::vector<double>;

namespace {

struct Instance {
    std::vector<Vec> points;
    std::vector<int> labels;
    DistanceMatrix dm;
};

Instance random_instance(SplitMix64& rng, std::size_t n, double noise) {
    Instance in;
    for (std::size_t i = 0; i < n; ++i) in.points.push_back(random_vector(rng, 2));
    in.labels = random_labels(rng, in.points, noise);
    in.dm = pairwise_distances(std::span<const Vec>(in.points), L2Metric{});
    return in;
}

BipartiteGraph random_graph(SplitMix64& rng, std::size_t l, std::size_t r, double p) {
    BipartiteGraph g(l, r);
    for (std::size_t u = 0; u < l; ++u)
        for (std::size_t v = 0; v < r; ++v)
            if (rng.uniform() < p) g.add_edge(u, v);
    g.finalize();
    return g;
}

// Independent edge construction, for checking the SRM wrappers.
BipartiteGraph oracle_graph(const Instance& in, double threshold) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < in.labels.size(); ++i) (in.labels[i] == 1 ? pos : neg).push_back(i);
    BipartiteGraph g(pos.size(), neg.size());
    for (std::size_t a = 0; a < pos.size(); ++a)
        for (std::size_t b = 0; b < neg.size(); ++b)
            if (l2(in.points[pos[a]], in.points[neg[b]]) < threshold) g.add_edge(a, b);
    g.finalize();
    return g;
}

double min_retained_cross(const Instance& in, const std::vector<std::size_t>& excluded) {
    std::vector<char> gone(in.labels.size(), 0);
    for (auto i : excluded) gone[i] = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < in.labels.size(); ++i)
        for (std::size_t j = 0; j < in.labels.size(); ++j)
            if (!gone[i] && !gone[j] && in.labels[i] == 1 && in.labels[j] == -1) best = std::min(best, in.dm(i, j));
    return best;
}

} // namespace

TEST_CASE("matching and covers on random graphs") {
    SplitMix64 rng(41);
    for (int rep = 0; rep < 100; ++rep) {
        const auto l = static_cast<std::size_t>(rng.uniform_int(0, 9));
        const auto r = static_cast<std::size_t>(rng.uniform_int(0, 9));
        const auto g = random_graph(rng, l, r, rng.uniform());
        const auto m = hopcroft_karp(g);
        // matching is valid
        std::size_t matched = 0;
        for (std::size_t u = 0; u < l; ++u) {
            if (m.mate_left[u] == kUnmatched) continue;
            ++matched;
            CHECK(m.mate_right[m.mate_left[u]] == u);
            const auto& nb = g.neighbors(u);
            CHECK(std::binary_search(nb.begin(), nb.end(), m.mate_left[u]));
        }
        CHECK(matched == m.size);
        const auto c = konig_cover(g, m);
        CHECK(is_cover(g, c));
        CHECK(c.size() == m.size);
        CHECK(c.size() == cover_brute(g));
        const auto gc = greedy_vertex_cover(g);
        CHECK(is_cover(g, gc));
        CHECK(gc.size() >= c.size());
        CHECK(gc.size() <= 2 * c.size());
    }
}

TEST_CASE("cover sizes on fixed graphs") {
    BipartiteGraph none(3, 3);
    none.finalize();
    CHECK(minimum_vertex_cover(none).size() == 0);
    CHECK(greedy_vertex_cover(none).size() == 0);

    BipartiteGraph full(3, 4);
    for (std::size_t u = 0; u < 3; ++u)
        for (std::size_t v = 0; v < 4; ++v) full.add_edge(u, v);
    full.finalize();
    CHECK(minimum_vertex_cover(full).size() == 3);

    BipartiteGraph one(1, 1);
    one.add_edge(0, 0);
    one.finalize();
    CHECK(minimum_vertex_cover(one).size() == 1);
    CHECK(greedy_vertex_cover(one).size() == 2);
}

TEST_CASE("critical values and grid") {
    const std::vector<Vec> pts{{0.0}, {1.0}};
    const std::vector<int> ys{1, -1};
    const auto dm = pairwise_distances(std::span<const Vec>(pts), L2Metric{});
    CHECK(critical_values_exact(dm, ys) == std::vector<double>{2.0});

    const std::vector<Vec> pts2{{0.0}, {1.0}, {-2.0}};
    const std::vector<int> ys2{1, -1, -1};
    const auto dm2 = pairwise_distances(std::span<const Vec>(pts2), L2Metric{});
    CHECK(critical_values_exact(dm2, ys2) == std::vector<double>{1.0, 2.0});

    SplitMix64 rng(42);
    const auto in = random_instance(rng, 20, 0.0);
    std::set<double> brute;
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 20; ++j)
            if (in.labels[i] == 1 && in.labels[j] == -1) brute.insert(2.0 / in.dm(i, j));
    CHECK(critical_values_exact(in.dm, in.labels) == std::vector<double>(brute.begin(), brute.end()));

    const auto grid = grid_values(1.0, 2.0, 0.5, 16);
    CHECK(grid.front() == 2.0);
    CHECK(grid.back() >= 16.0);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] / grid[i - 1] == Approx(1.25).epsilon(1e-14));
    CHECK(grid[grid.size() - 2] < 16.0);
}

TEST_CASE("exact cover equals exhaustive search") {
    SplitMix64 rng(43);
    for (int rep = 0; rep < 40; ++rep) {
        const auto in = random_instance(rng, 24, 0.3);
        for (double t : {0.05, 0.15, 0.3}) {
            const auto k = k_exact_at(in.dm, in.labels, t);
            CHECK(k.k == cover_brute(oracle_graph(in, t)));
            CHECK(k.k == k.matching_size);
            CHECK(min_retained_cross(in, k.excluded) >= t);
            const auto kg = k_greedy_at(in.dm, in.labels, t);
            CHECK(kg.k >= k.k);
            CHECK(kg.k <= 2 * k.k);
            CHECK(min_retained_cross(in, kg.excluded) >= t);
        }
    }
    const auto in = random_instance(rng, 10, 0.3);
    // a huge L leaves no cross pair under the 2/L threshold
    CHECK(k_exact(in.dm, in.labels, 1e6).k == 0);
    CHECK(k_exact(in.dm, in.labels, 1e6).excluded.empty());
}

TEST_CASE("k(L) is nonincreasing in L") {
    SplitMix64 rng(44);
    const auto in = random_instance(rng, 30, 0.2);
    std::size_t prev = in.labels.size();
    for (double l : critical_values_exact(in.dm, in.labels)) {
        const auto k = k_exact(in.dm, in.labels, l * 1.0000001).k;
        CHECK(k <= prev);
        prev = k;
    }
}

TEST_CASE("sparsified instance") {
    // tight clusters far apart
    const std::vector<Vec> pts{{0.0}, {0.0}, {10.0}, {10.0}};
    const std::vector<int> ys{1, 1, -1, -1};
    const auto dm = pairwise_distances(std::span<const Vec>(pts), L2Metric{});
    CHECK(build_sparsified_instance(dm, ys, 1.0, 0.1, 1.0).pairs.empty());
    CHECK_THROWS_AS(build_sparsified_instance(dm, ys, 1.0, 0.6, 1.0), config_error);

    SplitMix64 rng(45);
    for (int rep = 0; rep < 30; ++rep) {
        const auto in = random_instance(rng, 30, 0.3);
        const double ddim = 2.0, eps = 0.25;
        for (double l : {4.0, 8.0, 16.0, 32.0}) {
            const auto inst = build_sparsified_instance(in.dm, in.labels, l, eps, ddim);
            const double t = 2.0 / l;
            for (auto [a, b] : inst.pairs) CHECK(in.dm(inst.net[a], inst.net[b]) <= (1.0 - 2.0 * eps / ddim) * t);
            for (auto [u, v] : inst.explicit_edges()) {
                CHECK(in.labels[u] == 1);
                CHECK(in.labels[v] == -1);
                CHECK(in.dm(u, v) < t);
            }
            const auto cover = greedy_cover_sparsified(inst);
            CHECK(min_retained_cross(in, cover.excluded) >= (1.0 - 4.0 * eps / ddim) * t - 1e-12);
        }
    }
}

TEST_CASE("SRM selection examples") {
    SrmOptions opts;
    opts.delta = 0.05;

    // two separated clusters with gap 5
    const std::vector<Vec> pts{{0.0}, {1.0}, {6.0}, {7.0}};
    const std::vector<int> ys{1, 1, -1, -1};
    const auto r = run_srm(std::span<const Vec>(pts), std::span<const int>(ys), L2Metric{}, opts);
    CHECK(r.report.best().k == 0);
    CHECK(r.report.best().lipschitz == Approx(2.0 / 5.0));
    CHECK(r.report.candidates.front().method == "constant");
    CHECK(r.model.predict({0.5}) == 1);
    CHECK(r.model.predict({6.5}) == -1);

    const std::vector<int> same{1, 1, 1, 1};
    const auto c = run_srm(std::span<const Vec>(pts), std::span<const int>(same), L2Metric{}, opts);
    CHECK(c.model.is_constant());
    CHECK(c.report.best().k == 0);
    CHECK(c.model.constant_label() == 1);

    SrmOptions bad;
    bad.eps = 0.05;
    CHECK_THROWS_AS(run_srm(std::span<const Vec>(pts), std::span<const int>(ys), L2Metric{}, bad), config_error);
}

TEST_CASE("grid-greedy bound is within 2(1+eps) of the exact sweep") {
    SplitMix64 rng(46);
    for (int rep = 0; rep < 20; ++rep) {
        const auto in = random_instance(rng, 20, 0.25);
        const auto est = estimate_doubling(std::span<const Vec>(in.points), L2Metric{});
        SrmOptions ex;
        SrmOptions gg;
        gg.variant = SrmVariant::grid_greedy;
        gg.grid_eps = 0.25;
        const auto a = srm_select(in.dm, in.labels, ex, est.diam_hat, est.ddim_hat);
        const auto b = srm_select(in.dm, in.labels, gg, est.diam_hat, est.ddim_hat);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& cand : a.candidates) best = std::min(best, cand.bound);
        CHECK(b.best().bound <= 2.0 * 1.25 * best + 1e-12);
        CHECK(b.approximation == "2");
    }
}
