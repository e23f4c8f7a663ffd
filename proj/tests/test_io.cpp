#include <catch2/catch_amalgamated.hpp>

#include "lipclass/io.hpp"
#include "support.hpp"

using namespace lipclass;
using namespace lipclass::testing;

namespace {

LabeledDataset parse(const std::string& text) {
    std::istringstream in(text);
    return io::read_dataset(in);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const input_error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("records of each payload parse") {
    const auto v = parse("{\"vector\":[1,2.5],\"label\":1}\n\n{\"vector\":[0,0],\"label\":-1}\n");
    REQUIRE(v.size() == 2);
    CHECK(std::get<DenseVector>(v.points[0]) == DenseVector{1.0, 2.5});
    CHECK(v.labels == std::vector<int>{1, -1});

    const auto m = parse("{\"multiset\":[[0.1,0.2],[0.3,0.4]],\"label\":-1}\n");
    CHECK(std::get<PlanarMultiset>(m.points[0]).items.size() == 2);

    const auto s = parse("{\"series\":[[0,1.5],[3,-2]],\"m\":5,\"label\":1}\n{\"series\":[],\"m\":7,\"label\":-1}\n");
    CHECK(s.series_length == 7);
    CHECK(std::get<SparseSeries>(s.points[0]).entries.size() == 2);
}

TEST_CASE("malformed records name their line") {
    CHECK(error_of("{\"vector\":[1],\"label\":1}\n{oops\n").rfind("line 2:", 0) == 0);
    CHECK(error_of("{\"vector\":[1],\"label\":2}\n").rfind("line 1:", 0) == 0);
    CHECK(error_of("{\"vector\":[1]}\n").rfind("line 1:", 0) == 0);
    CHECK(error_of("\n\n{\"vector\":[1],\"multiset\":[[0,0]],\"label\":1}\n").rfind("line 3:", 0) == 0);
    CHECK(error_of("{\"multiset\":[[0,1.2]],\"label\":1}\n").rfind("line 1:", 0) == 0);
    CHECK(error_of("{\"series\":[[4,1]],\"m\":3,\"label\":1}\n").rfind("line 1:", 0) == 0);
    CHECK(error_of("{\"series\":[[2,1],[1,1]],\"m\":3,\"label\":1}\n").rfind("line 1:", 0) == 0);
    CHECK(error_of("{\"vector\":[1],\"label\":1}\n{\"multiset\":[[0,0]],\"label\":1}\n").rfind("line 2:", 0) == 0);
}

TEST_CASE("dataset hash is canonical") {
    const auto a = parse("{\"vector\":[1,2],\"label\":1}\n");
    const auto b = parse("{ \"label\": 1, \"vector\": [1.0, 2.0] }\n\n");
    const auto c = parse("{\"vector\":[1,2.0000001],\"label\":1}\n");
    CHECK(io::dataset_hash(a) == io::dataset_hash(b));
    CHECK(io::dataset_hash(a) != io::dataset_hash(c));
    CHECK(io::dataset_hash(a).size() == 16);

    std::ostringstream out;
    io::write_dataset(out, a);
    std::istringstream back(out.str());
    CHECK(io::dataset_hash(io::read_dataset(back)) == io::dataset_hash(a));
}

TEST_CASE("payload must match the kernel") {
    const auto v = parse("{\"vector\":[1,2],\"label\":1}\n");
    CHECK_THROWS_AS(io::check_payload(v, MetricKernel(KernelKind::emd)), input_error);
    CHECK_NOTHROW(io::check_payload(v, MetricKernel(KernelKind::l1)));
    CHECK_THROWS_AS(io::parse_kernel_kind("cosine"), config_error);
}

TEST_CASE("model JSON round trip") {
    SplitMix64 rng(51);
    std::string text;
    for (int i = 0; i < 30; ++i) {
        const auto ms = random_multiset(rng, 3);
        const int label = ms.items[0][0] < 0.5 ? 1 : -1;
        nlohmann::json rec;
        rec["label"] = rng.uniform() < 0.1 ? -label : label;
        rec["multiset"] = nlohmann::json::array();
        for (const auto& p : ms.items) rec["multiset"].push_back({p[0], p[1]});
        text += rec.dump() + "\n";
    }
    const auto ds = parse(text);
    const MetricKernel kernel(KernelKind::emd, BaseDistance::l1);
    SrmOptions opts;
    const auto r = run_srm(std::span<const Point>(ds.points), std::span<const int>(ds.labels), kernel, opts);
    const auto j = io::model_json(r.model, kernel, ds);
    const auto loaded = io::load_model(nlohmann::json::parse(j.dump()), ds);
    CHECK(io::model_json(loaded.model, loaded.kernel, ds).dump() == j.dump());
    CHECK(loaded.kernel.emd_base() == BaseDistance::l1);
    for (int q = 0; q < 50; ++q) {
        const Point x = random_multiset(rng, 3);
        CHECK(loaded.model.predict(x) == r.model.predict(x));
    }

    auto other = ds;
    other.labels[0] = -other.labels[0];
    CHECK_THROWS_AS(io::load_model(j, other), input_error);
    auto broken = j;
    broken.erase("excluded");
    CHECK_THROWS_AS(io::load_model(broken, ds), input_error);
}

TEST_CASE("report serialisations") {
    const auto ds = parse("{\"vector\":[0],\"label\":1}\n{\"vector\":[1],\"label\":1}\n{\"vector\":[5],\"label\":-1}\n");
    const auto r = run_srm(std::span<const Point>(ds.points), std::span<const int>(ds.labels),
                           MetricKernel(KernelKind::l2), SrmOptions{});
    const auto j = io::report_json(r.report);
    REQUIRE(j.size() == r.report.candidates.size());
    std::size_t flagged = 0;
    for (const auto& row : j) flagged += row["selected"].get<bool>();
    CHECK(flagged == 1);
    const auto csv = io::report_csv(r.report);
    CHECK(csv.rfind("L,k,D,G,method\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.report.candidates.size() + 1));
}
