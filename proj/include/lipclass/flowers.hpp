#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "lipclass/classifier.hpp"
#include "lipclass/errors.hpp"
#include "lipclass/io.hpp"
#include "lipclass/metric.hpp"
#include "lipclass/net_index.hpp"
#include "lipclass/rng.hpp"

namespace lipclass::flowers {

/// Synthetic stand-in for the five- vs six-petal contour task.
struct FlowerConfig {
    std::size_t resolution = 64;
    std::size_t block = 8;
    std::size_t trials = 200;
    std::size_t train_per_class = 25;
    std::size_t test_per_class = 10;
    /// maximal shift per axis, as a fraction of the width; one result row per entry
    std::vector<double> translations{0.0, 0.25};
    int positive_petals = 5;
    int negative_petals = 6;
    /// contour radius range as a fraction of the largest radius that fits the frame
    double min_scale = 0.8;
    double max_scale = 1.0;
    /// petal depth range relative to the radius
    double min_depth = 0.3;
    double max_depth = 0.5;
    /// contour thickness in pixels
    std::size_t thickness = 3;
    double ridge = 1e-3;
    double lipschitz_eps = 0.01;
    std::uint64_t seed = 20240601;
    /// 0 picks std::thread::hardware_concurrency()
    std::size_t threads = 0;

    void validate() const {
        if (resolution < 8) throw config_error("resolution must be at least 8");
        if (block == 0 || resolution % block != 0) throw config_error("block size must divide the resolution");
        if (trials == 0) throw config_error("need at least one trial");
        if (train_per_class == 0 || test_per_class == 0) throw config_error("need at least one image per class");
        if (positive_petals == negative_petals) throw config_error("petal counts must differ");
        for (double t : translations)
            if (!(t >= 0.0 && t <= 0.25)) throw config_error("translation must lie in [0, 0.25]");
        if (translations.empty()) throw config_error("need at least one translation level");
        if (!(min_scale > 0.0 && min_scale <= max_scale && max_scale <= 1.0)) throw config_error("bad scale range");
        if (!(min_depth >= 0.0 && min_depth <= max_depth && max_depth < 1.0)) throw config_error("bad depth range");
    }
};

/// Row-major black/white image, 1 on the contour.
struct Image {
    std::size_t width = 0;
    std::vector<double> pixels;
};

/// Shape parameters shared by all translation levels of one sample.
struct FlowerShape {
    int petals = 5;
    double radius = 0.0;
    double depth = 0.0;
    double phase = 0.0;
    /// unit shift direction components in [-1, 1]
    double shift_x = 0.0;
    double shift_y = 0.0;
};

/// Largest contour radius that stays inside the frame under the largest shift.
inline double max_radius(const FlowerConfig& cfg) {
    const double w = static_cast<double>(cfg.resolution);
    const double t = *std::max_element(cfg.translations.begin(), cfg.translations.end());
    return w * (0.5 - t) - 1.0;
}

inline FlowerShape random_shape(int petals, const FlowerConfig& cfg, SplitMix64& rng) {
    FlowerShape s;
    s.petals = petals;
    s.radius = rng.uniform(cfg.min_scale, cfg.max_scale) * max_radius(cfg);
    s.depth = rng.uniform(cfg.min_depth, cfg.max_depth);
    s.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    s.shift_x = rng.uniform(-1.0, 1.0);
    s.shift_y = rng.uniform(-1.0, 1.0);
    return s;
}

/// Polar contour r(t) = R (1 - depth + depth cos(p (t - phase))), drawn
/// `thickness` pixels thick inwards and shifted by round(shift * translation * width).
inline Image render(const FlowerShape& s, std::size_t width, double translation, std::size_t thickness = 1) {
    Image img;
    img.width = width;
    img.pixels.assign(width * width, 0.0);
    const double w = static_cast<double>(width);
    const double cx = w / 2.0 + std::round(s.shift_x * translation * w);
    const double cy = w / 2.0 + std::round(s.shift_y * translation * w);
    const std::size_t samples = 64 * width;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
        const double r0 = s.radius * (1.0 - s.depth + s.depth * std::cos(s.petals * (t - s.phase)));
        for (std::size_t layer = 0; layer < thickness; ++layer) {
            const double r = r0 - static_cast<double>(layer);
            const double x = std::floor(cx + r * std::cos(t));
            const double y = std::floor(cy + r * std::sin(t));
            if (x < 0.0 || y < 0.0 || x >= w || y >= w) continue;
            img.pixels[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)] = 1.0;
        }
    }
    return img;
}

/// Image cut into non-overlapping block x block tiles, each a vector; the
/// order of tiles is discarded. All-zero tiles are only counted.
struct BlockSet {
    std::size_t total = 0;
    std::size_t zeros = 0;
    std::vector<std::vector<double>> blocks;
};

inline BlockSet to_blocks(const Image& img, std::size_t block) {
    BlockSet out;
    const std::size_t per_side = img.width / block;
    out.total = per_side * per_side;
    for (std::size_t by = 0; by < per_side; ++by) {
        for (std::size_t bx = 0; bx < per_side; ++bx) {
            std::vector<double> v(block * block);
            bool any = false;
            for (std::size_t y = 0; y < block; ++y)
                for (std::size_t x = 0; x < block; ++x) {
                    v[y * block + x] = img.pixels[(by * block + y) * img.width + bx * block + x];
                    any = any || v[y * block + x] != 0.0;
                }
            if (any)
                out.blocks.push_back(std::move(v));
            else
                ++out.zeros;
        }
    }
    return out;
}

/// EMD between block sets with l1 ground distance. Zero tiles common to both
/// sides are matched to each other at no cost, which an optimal assignment
/// may always do under a metric ground cost.
struct BlockEmd {
    double operator()(const BlockSet& a, const BlockSet& b) const {
        if (a.total != b.total) throw input_error("block sets differ in size");
        const std::size_t shared = std::min(a.zeros, b.zeros);
        const std::size_t k = a.total - shared;
        if (k == 0) return 0.0;
        const std::vector<double> zero(a.blocks.empty() ? b.blocks.front().size() : a.blocks.front().size(), 0.0);
        const auto item = [&](const BlockSet& s, std::size_t i) -> const std::vector<double>& {
            return i < s.blocks.size() ? s.blocks[i] : zero;
        };
        auto fit = min_cost_assignment(k, [&](std::size_t i, std::size_t j) {
            return lp_distance(item(a, i), item(b, j), 1);
        });
        return fit.cost / static_cast<double>(a.total);
    }
};

struct PixelL2 {
    double operator()(const Image& a, const Image& b) const { return lp_distance(a.pixels, b.pixels, 2); }
};

template <class P, class Metric>
int nearest_label(std::span<const P> train, std::span<const int> labels, const Metric& metric, const P& q) {
    return labels[exact_nn(train, metric, q).id];
}

/// Ridge least-squares linear classifier on raw pixels with a bias term,
/// solved in the dual (n x n) form.
class LinearLsq {
public:
    LinearLsq(std::span<const Image> train, std::span<const int> labels, double ridge) {
        const auto n = static_cast<Eigen::Index>(train.size());
        const auto d = static_cast<Eigen::Index>(train.front().pixels.size());
        Eigen::MatrixXd x(n, d + 1);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) x(i, j) = train[static_cast<std::size_t>(i)].pixels[static_cast<std::size_t>(j)];
            x(i, d) = 1.0;
            y(i) = labels[static_cast<std::size_t>(i)];
        }
        Eigen::MatrixXd gram = x * x.transpose();
        gram.diagonal().array() += ridge * std::max(1.0, gram.trace() / static_cast<double>(n));
        const Eigen::VectorXd alpha = gram.ldlt().solve(y);
        weights_ = x.transpose() * alpha;
    }

    int predict(const Image& img) const {
        const auto d = static_cast<Eigen::Index>(img.pixels.size());
        double s = weights_(d);
        for (Eigen::Index j = 0; j < d; ++j) s += weights_(j) * img.pixels[static_cast<std::size_t>(j)];
        return s >= 0.0 ? 1 : -1;
    }

private:
    Eigen::VectorXd weights_;
};

inline const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names{"emd-nn", "euclidean-nn", "linear-lsq", "lipschitz-emd"};
    return names;
}

struct TrialErrors {
    /// [translation level][method]
    std::vector<std::vector<double>> error;
};

/// Shapes and labels of one trial, alternating +1 / -1 within each split.
struct TrialDraw {
    std::vector<FlowerShape> train_shapes, test_shapes;
    std::vector<int> train_labels, test_labels;
};

inline TrialDraw draw_trial(const FlowerConfig& cfg, std::size_t trial) {
    SplitMix64 rng = SplitMix64(cfg.seed).split(trial);
    TrialDraw d;
    const auto draw = [&](std::size_t per_class, std::vector<FlowerShape>& shapes, std::vector<int>& labels) {
        for (std::size_t i = 0; i < per_class; ++i) {
            shapes.push_back(random_shape(cfg.positive_petals, cfg, rng));
            labels.push_back(1);
            shapes.push_back(random_shape(cfg.negative_petals, cfg, rng));
            labels.push_back(-1);
        }
    };
    draw(cfg.train_per_class, d.train_shapes, d.train_labels);
    draw(cfg.test_per_class, d.test_shapes, d.test_labels);
    return d;
}

inline TrialErrors run_trial(const FlowerConfig& cfg, std::size_t trial) {
    const auto [train_shapes, test_shapes, train_labels, test_labels] = draw_trial(cfg, trial);

    TrialErrors out;
    for (double translation : cfg.translations) {
        std::vector<Image> train_img, test_img;
        std::vector<BlockSet> train_blk, test_blk;
        for (const auto& s : train_shapes) {
            train_img.push_back(render(s, cfg.resolution, translation, cfg.thickness));
            train_blk.push_back(to_blocks(train_img.back(), cfg.block));
        }
        for (const auto& s : test_shapes) {
            test_img.push_back(render(s, cfg.resolution, translation, cfg.thickness));
            test_blk.push_back(to_blocks(test_img.back(), cfg.block));
        }

        const LinearLsq linear(train_img, train_labels, cfg.ridge);
        const auto lip = train(std::span<const BlockSet>(train_blk), std::span<const int>(train_labels),
                               std::span<const std::size_t>(), cfg.lipschitz_eps, BlockEmd{});

        std::vector<double> wrong(method_names().size(), 0.0);
        for (std::size_t i = 0; i < test_img.size(); ++i) {
            const int y = test_labels[i];
            const int votes[] = {
                nearest_label(std::span<const BlockSet>(train_blk), std::span<const int>(train_labels), BlockEmd{},
                              test_blk[i]),
                nearest_label(std::span<const Image>(train_img), std::span<const int>(train_labels), PixelL2{},
                              test_img[i]),
                linear.predict(test_img[i]),
                lip.predict(test_blk[i]),
            };
            for (std::size_t m = 0; m < wrong.size(); ++m) wrong[m] += votes[m] != y ? 1.0 : 0.0;
        }
        for (double& w : wrong) w /= static_cast<double>(test_img.size());
        out.error.push_back(std::move(wrong));
    }
    return out;
}

struct BenchRow {
    std::string method;
    double translation = 0.0;
    double mean_error = 0.0;
    std::size_t trials = 0;
};

/// Mean error per (translation, method) over all trials. Trial t draws from
/// stream t of the master seed, so results do not depend on thread count.
inline std::vector<BenchRow> run_bench(const FlowerConfig& cfg) {
    cfg.validate();
    std::vector<TrialErrors> results(cfg.trials);
    std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cfg.trials);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t t = w; t < cfg.trials; t += workers) results[t] = run_trial(cfg, t);
        });
    for (auto& th : pool) th.join();

    std::vector<BenchRow> rows;
    for (std::size_t li = 0; li < cfg.translations.size(); ++li) {
        for (std::size_t m = 0; m < method_names().size(); ++m) {
            double sum = 0.0;
            for (const auto& r : results) sum += r.error[li][m];
            rows.push_back({method_names()[m], cfg.translations[li], sum / static_cast<double>(cfg.trials), cfg.trials});
        }
    }
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "method,translation,error,trials\n";
    for (const auto& r : rows)
        out += r.method + "," + io::format_double(r.translation) + "," + io::format_double(r.mean_error) + "," +
               std::to_string(r.trials) + "\n";
    return out;
}

inline double mean_error(const std::vector<BenchRow>& rows, const std::string& method, double translation) {
    for (const auto& r : rows)
        if (r.method == method && r.translation == translation) return r.mean_error;
    throw input_error("no benchmark row for " + method);
}

} // namespace lipclass::flowers
