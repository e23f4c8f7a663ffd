// Command-line front end: train, predict, srm-report, bound, bench-flowers, dist.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lipclass/bounds.hpp"
#include "lipclass/flowers.hpp"
#include "lipclass/io.hpp"
#include "lipclass/srm.hpp"

namespace {

using namespace lipclass;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct KernelArgs {
    std::string kernel = "l2";
    std::string emd_base = "l2";

    void add(CLI::App* cmd) {
        cmd->add_option("--kernel", kernel, "Distance kernel")
            ->check(CLI::IsMember({"l1", "l2", "emd", "erp"}))
            ->capture_default_str();
        cmd->add_option("--emd-base", emd_base, "Ground distance for EMD")
            ->check(CLI::IsMember({"l1", "l2"}))
            ->capture_default_str();
    }

    MetricKernel make(const LabeledDataset& ds) const {
        MetricKernel k(io::parse_kernel_kind(kernel), io::parse_base(emd_base), ds.series_length);
        io::check_payload(ds, k);
        return k;
    }
};

struct SrmArgs {
    double eps = 0.01;
    double delta = 0.05;
    std::string variant = "exact";
    std::optional<double> grid_eps, ddim, diam;
    // Training is deterministic; the seed is accepted so every command shares the flag.
    std::uint64_t seed = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Seed (training draws no random numbers)")->capture_default_str();
        cmd->add_option("--eps", eps, "ANN slack of the classifier, in (0, 1/32)")->capture_default_str();
        cmd->add_option("--delta", delta, "Confidence parameter, in (0, 1)")->capture_default_str();
        cmd->add_option("--variant", variant, "SRM variant")
            ->check(CLI::IsMember({"exact", "grid-exact", "grid-greedy", "grid-greedy-sparse"}))
            ->capture_default_str();
        cmd->add_option("--grid-eps", grid_eps, "Grid spacing parameter in (0, 1); defaults to --eps");
        cmd->add_option("--ddim", ddim, "Override the estimated doubling dimension");
        cmd->add_option("--diam", diam, "Override the estimated diameter");
    }

    SrmOptions make() const {
        SrmOptions o;
        o.variant = parse_variant(variant);
        o.eps = eps;
        o.delta = delta;
        o.grid_eps = grid_eps;
        o.ddim = ddim;
        o.diam = diam;
        return o;
    }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write '" + path + "'");
    out << text;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error&) {
        throw input_error("'" + path + "' is not valid JSON");
    }
}

SrmResult<Point, MetricKernel> fit(const LabeledDataset& ds, const MetricKernel& kernel, const SrmOptions& opts) {
    return run_srm(std::span<const Point>(ds.points), std::span<const int>(ds.labels), kernel, opts);
}

void print_selected(const SrmReport& rep) {
    const auto& c = rep.best();
    std::printf("selected L=%s k=%zu G=%s method=%s approximation=%s\n", io::format_double(c.lipschitz).c_str(), c.k,
                io::format_double(c.bound).c_str(), c.method.c_str(), rep.approximation.c_str());
}

int cmd_train(const std::string& data, const KernelArgs& ka, const SrmArgs& sa, const std::string& out) {
    const auto ds = io::read_dataset_file(data);
    ds.validate();
    const auto kernel = ka.make(ds);
    const auto result = fit(ds, kernel, sa.make());
    write_file(out + ".model.json", io::model_json(result.model, kernel, ds).dump(2) + "\n");
    write_file(out + ".report.json", io::report_json(result.report).dump(2) + "\n");
    write_file(out + ".report.csv", io::report_csv(result.report));
    print_selected(result.report);
    return 0;
}

int cmd_srm_report(const std::string& data, const KernelArgs& ka, const SrmArgs& sa, const std::string& out) {
    const auto ds = io::read_dataset_file(data);
    ds.validate();
    const auto kernel = ka.make(ds);
    const auto result = fit(ds, kernel, sa.make());
    if (out.empty()) {
        std::cout << io::report_csv(result.report);
        return 0;
    }
    write_file(out + ".report.json", io::report_json(result.report).dump(2) + "\n");
    write_file(out + ".report.csv", io::report_csv(result.report));
    print_selected(result.report);
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& train_path, const std::string& data,
                const std::string& out) {
    const auto train_ds = io::read_dataset_file(train_path);
    train_ds.validate();
    const auto loaded = io::load_model(read_json_file(model_path), train_ds);
    const auto test = io::read_dataset_file(data);
    io::check_payload(test, loaded.kernel);

    std::ostringstream lines;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const int y = loaded.model.predict(test.points[i]);
        lines << y << '\n';
        if (y != test.labels[i]) ++wrong;
    }
    if (out.empty())
        std::cout << lines.str();
    else
        write_file(out, lines.str());
    if (test.size() > 0)
        std::fprintf(stderr, "error_rate=%s misclassified=%zu total=%zu\n",
                     io::format_double(static_cast<double>(wrong) / static_cast<double>(test.size())).c_str(), wrong,
                     test.size());
    return 0;
}

struct BoundArgs {
    double n = 1000;
    double k_frac = 0.0;
    double lipschitz = 1.0;
    double diam = 1.0;
    double ddim = 1.0;
    double delta = 0.05;
    double eps = 0.0;
    std::string sweep = "n";
    std::optional<double> to;
    std::size_t steps = 1;
};

int cmd_bound(const BoundArgs& b) {
    if (b.steps == 0) throw config_error("--steps must be positive");
    if (!(b.k_frac >= 0.0 && b.k_frac <= 1.0)) throw config_error("--k-frac must lie in [0, 1]");
    const double start = b.sweep == "n" ? b.n : b.lipschitz;
    const double stop = b.to.value_or(start);
    if (!(start > 0.0 && stop > 0.0)) throw config_error("sweep endpoints must be positive");
    std::printf("%s,D,G_separable,G_agnostic\n", b.sweep.c_str());
    for (std::size_t i = 0; i < b.steps; ++i) {
        const double frac = b.steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(b.steps - 1);
        double x = start * std::pow(stop / start, frac);
        if (b.sweep == "n") x = std::round(x);
        const double n = b.sweep == "n" ? x : b.n;
        const double l = b.sweep == "n" ? b.lipschitz : x;
        try {
            const double d = bounds::fat_dim(l, b.diam, b.ddim, b.eps);
            const auto sep = bounds::gen_bound_separable(n, d, b.delta);
            const auto agn = bounds::gen_bound_agnostic(n, b.k_frac * n, d, b.delta);
            std::printf("%s,%s,%s,%s\n", io::format_double(x).c_str(), io::format_double(d).c_str(),
                        io::format_double(sep.raw).c_str(), io::format_double(agn.raw).c_str());
        } catch (const input_error& e) {
            throw config_error(e.what());
        }
    }
    return 0;
}

int cmd_bench(const flowers::FlowerConfig& cfg, const std::string& out) {
    const auto csv = flowers::bench_csv(flowers::run_bench(cfg));
    if (out.empty())
        std::cout << csv;
    else
        write_file(out, csv);
    return 0;
}

struct DistArgs {
    std::string data;
    std::size_t i = 0, j = 1;
    std::string a, b;
};

int cmd_dist(const DistArgs& d, const KernelArgs& ka) {
    LabeledDataset ds;
    if (!d.a.empty() || !d.b.empty()) {
        if (d.a.empty() || d.b.empty()) throw config_error("--a and --b must be given together");
        std::istringstream in(d.a + "\n" + d.b + "\n");
        ds = io::read_dataset(in);
    } else {
        if (d.data.empty()) throw config_error("need --data or --a/--b");
        ds = io::read_dataset_file(d.data);
    }
    const std::size_t i = d.a.empty() ? d.i : 0;
    const std::size_t j = d.a.empty() ? d.j : 1;
    if (i >= ds.size() || j >= ds.size()) throw input_error("record index out of range");
    const auto kernel = ka.make(ds);
    std::printf("%s\n", io::format_double(kernel(ds.points[i], ds.points[j])).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lipschitz-extension classification in metric spaces"};
    app.require_subcommand(1);

    std::string data, out, model, train_path;
    KernelArgs kernel_args;
    SrmArgs srm_args;

    auto* train = app.add_subcommand("train", "Run SRM and write the selected model and report");
    train->add_option("--data", data, "JSON-lines training set")->required();
    kernel_args.add(train);
    srm_args.add(train);
    train->add_option("--out", out, "Output prefix")->required();

    auto* report = app.add_subcommand("srm-report", "Print or write the SRM candidate table");
    report->add_option("--data", data, "JSON-lines training set")->required();
    kernel_args.add(report);
    srm_args.add(report);
    report->add_option("--out", out, "Output prefix (CSV to stdout when omitted)");

    auto* predict = app.add_subcommand("predict", "Classify records with a trained model");
    predict->add_option("--model", model, "Model JSON")->required();
    predict->add_option("--train", train_path, "Training set the model was fitted on")->required();
    predict->add_option("--data", data, "JSON-lines records to classify")->required();
    predict->add_option("--out", out, "Prediction file (stdout when omitted)");

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "CSV sweep of the generalization bounds");
    bound->add_option("--n", bound_args.n, "Sample size (sweep start for --sweep n)")->capture_default_str();
    bound->add_option("--k-frac", bound_args.k_frac, "Training errors as a fraction of n")->capture_default_str();
    bound->add_option("--L", bound_args.lipschitz, "Lipschitz constant (sweep start for --sweep L)")
        ->capture_default_str();
    bound->add_option("--diam", bound_args.diam, "Diameter")->capture_default_str();
    bound->add_option("--ddim", bound_args.ddim, "Doubling dimension")->capture_default_str();
    bound->add_option("--delta", bound_args.delta, "Confidence parameter")->capture_default_str();
    bound->add_option("--eps", bound_args.eps, "Perturbation slack in [0, 1/32)")->capture_default_str();
    bound->add_option("--sweep", bound_args.sweep, "Swept variable")
        ->check(CLI::IsMember({"n", "L"}))
        ->capture_default_str();
    bound->add_option("--to", bound_args.to, "Sweep end (geometric spacing)");
    bound->add_option("--steps", bound_args.steps, "Number of rows")->capture_default_str();

    flowers::FlowerConfig bench_cfg;
    auto* bench = app.add_subcommand("bench-flowers", "Synthetic five- vs six-petal benchmark");
    bench->add_option("--seed", bench_cfg.seed, "Master seed")->capture_default_str();
    bench->add_option("--trials", bench_cfg.trials, "Number of trials")->capture_default_str();
    bench->add_option("--resolution", bench_cfg.resolution, "Image width in pixels")->capture_default_str();
    bench->add_option("--block", bench_cfg.block, "Tile width for the EMD representation")->capture_default_str();
    bench->add_option("--translations", bench_cfg.translations, "Maximal shifts as fractions of the width")
        ->capture_default_str();
    bench->add_option("--train-per-class", bench_cfg.train_per_class, "Training images per class")
        ->capture_default_str();
    bench->add_option("--test-per-class", bench_cfg.test_per_class, "Test images per class")->capture_default_str();
    bench->add_option("--thickness", bench_cfg.thickness, "Contour thickness in pixels")->capture_default_str();
    bench->add_option("--eps", bench_cfg.lipschitz_eps, "ANN slack of the Lipschitz classifier")
        ->capture_default_str();
    bench->add_option("--threads", bench_cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
    bench->add_option("--out", out, "CSV path (stdout when omitted)");

    DistArgs dist_args;
    auto* dist = app.add_subcommand("dist", "Distance between two records");
    kernel_args.add(dist);
    dist->add_option("--data", dist_args.data, "JSON-lines file");
    dist->add_option("--i", dist_args.i, "First record index")->capture_default_str();
    dist->add_option("--j", dist_args.j, "Second record index")->capture_default_str();
    dist->add_option("--a", dist_args.a, "First record as a JSON object");
    dist->add_option("--b", dist_args.b, "Second record as a JSON object");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*train) return cmd_train(data, kernel_args, srm_args, out);
        if (*report) return cmd_srm_report(data, kernel_args, srm_args, out);
        if (*predict) return cmd_predict(model, train_path, data, out);
        if (*bound) return cmd_bound(bound_args);
        if (*bench) return cmd_bench(bench_cfg, out);
        if (*dist) return cmd_dist(dist_args, kernel_args);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const input_error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return 0;
}
