#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lipclass/classifier.hpp"
#include "lipclass/errors.hpp"
#include "lipclass/metric.hpp"
#include "lipclass/point.hpp"
#include "lipclass/srm.hpp"

namespace lipclass::io {

using nlohmann::json;

/// One JSON-lines record -> (point, label). `line` is 1-based for messages.
inline std::pair<Point, int> parse_record(const json& rec, std::size_t line, std::size_t* series_m = nullptr) {
    const auto fail = [line](const std::string& what) -> input_error {
        return input_error("line " + std::to_string(line) + ": " + what);
    };
    if (!rec.is_object()) throw fail("record is not a JSON object");
    if (!rec.contains("label") || !rec["label"].is_number_integer()) throw fail("missing integer 'label'");
    const int label = rec["label"].get<int>();
    if (label != 1 && label != -1) throw fail("label must be 1 or -1");

    const int kinds = int(rec.contains("vector")) + int(rec.contains("multiset")) + int(rec.contains("series"));
    if (kinds != 1) throw fail("record needs exactly one of 'vector', 'multiset', 'series'");
    try {
        if (rec.contains("vector")) {
            const auto& v = rec["vector"];
            if (!v.is_array()) throw fail("'vector' must be an array");
            DenseVector out;
            for (const auto& x : v) {
                if (!x.is_number()) throw fail("'vector' entries must be numbers");
                out.push_back(x.get<double>());
            }
            return {Point(std::move(out)), label};
        }
        if (rec.contains("multiset")) {
            const auto& v = rec["multiset"];
            if (!v.is_array()) throw fail("'multiset' must be an array");
            std::vector<Planar> pts;
            for (const auto& p : v) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                    throw fail("'multiset' entries must be [x, y] pairs");
                pts.push_back({p[0].get<double>(), p[1].get<double>()});
            }
            return {Point(PlanarMultiset(std::move(pts))), label};
        }
        const auto& v = rec["series"];
        if (!v.is_array()) throw fail("'series' must be an array");
        if (!rec.contains("m") || !rec["m"].is_number_integer() || rec["m"].get<long long>() <= 0)
            throw fail("series records need a positive integer 'm'");
        const auto m = rec["m"].get<std::size_t>();
        std::vector<SparseSeries::Entry> entries;
        for (const auto& e : v) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number())
                throw fail("'series' entries must be [index, value] pairs");
            if (e[0].get<long long>() < 0) throw fail("series index must be nonnegative");
            const auto idx = e[0].get<std::size_t>();
            if (idx >= m) throw fail("series index " + std::to_string(idx) + " not below m = " + std::to_string(m));
            entries.push_back({idx, e[1].get<double>()});
        }
        if (series_m) *series_m = std::max(*series_m, m);
        return {Point(SparseSeries(entries)), label};
    } catch (const input_error& e) {
        const std::string what = e.what();
        if (what.rfind("line ", 0) == 0) throw;
        throw fail(what);
    }
}

inline LabeledDataset read_dataset(std::istream& in) {
    LabeledDataset ds;
    std::string text;
    std::size_t line = 0;
    std::optional<PayloadKind> kind;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(text);
        } catch (const json::parse_error& e) {
            throw input_error("line " + std::to_string(line) + ": malformed JSON");
        }
        auto [p, label] = parse_record(rec, line, &ds.series_length);
        if (kind && *kind != payload_kind(p))
            throw input_error("line " + std::to_string(line) + ": payload variant differs from earlier records");
        kind = payload_kind(p);
        ds.points.push_back(std::move(p));
        ds.labels.push_back(label);
    }
    return ds;
}

inline LabeledDataset read_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open dataset '" + path + "'");
    return read_dataset(in);
}

inline json record_json(const Point& p, int label, std::size_t series_m) {
    json rec;
    rec["label"] = label;
    if (const auto* v = std::get_if<DenseVector>(&p)) {
        rec["vector"] = *v;
    } else if (const auto* ms = std::get_if<PlanarMultiset>(&p)) {
        json arr = json::array();
        for (const auto& q : ms->items) arr.push_back({q[0], q[1]});
        rec["multiset"] = arr;
    } else {
        const auto& s = std::get<SparseSeries>(p);
        json arr = json::array();
        for (const auto& e : s.entries) arr.push_back({e.index, e.value});
        rec["series"] = arr;
        rec["m"] = series_m;
    }
    return rec;
}

inline void write_dataset(std::ostream& out, const LabeledDataset& ds) {
    for (std::size_t i = 0; i < ds.size(); ++i) out << record_json(ds.points[i], ds.labels[i], ds.series_length).dump() << '\n';
}

/// FNV-1a 64 over the canonical JSON-lines serialisation, as 16 hex digits.
inline std::string dataset_hash(const LabeledDataset& ds) {
    std::ostringstream canon;
    write_dataset(canon, ds);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon.str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

inline json kernel_json(const MetricKernel& k) {
    json j;
    j["name"] = k.name();
    if (k.kind() == KernelKind::emd) j["base"] = k.emd_base() == BaseDistance::l1 ? "l1" : "l2";
    if (k.kind() == KernelKind::erp) j["m"] = k.series_length();
    return j;
}

inline KernelKind parse_kernel_kind(const std::string& name) {
    if (name == "l1") return KernelKind::l1;
    if (name == "l2") return KernelKind::l2;
    if (name == "emd") return KernelKind::emd;
    if (name == "erp") return KernelKind::erp;
    throw config_error("unknown kernel '" + name + "'");
}

inline BaseDistance parse_base(const std::string& name) {
    if (name == "l1") return BaseDistance::l1;
    if (name == "l2") return BaseDistance::l2;
    throw config_error("unknown EMD base distance '" + name + "'");
}

inline MetricKernel kernel_from_json(const json& j) {
    const auto kind = parse_kernel_kind(j.at("name").get<std::string>());
    const auto base = j.contains("base") ? parse_base(j["base"].get<std::string>()) : BaseDistance::l2;
    const std::size_t m = j.contains("m") ? j["m"].get<std::size_t>() : 0;
    return MetricKernel(kind, base, m);
}

/// Checks every record carries the payload the kernel measures.
inline void check_payload(const LabeledDataset& ds, const MetricKernel& kernel) {
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (payload_kind(ds.points[i]) != kernel.expected_payload())
            throw input_error("record " + std::to_string(i) + " has a '" + payload_name(payload_kind(ds.points[i])) +
                              "' payload but kernel '" + kernel.name() + "' needs '" +
                              payload_name(kernel.expected_payload()) + "'");
}

using Model = LipschitzModel<Point, MetricKernel>;

inline json model_json(const Model& model, const MetricKernel& kernel, const LabeledDataset& ds) {
    json j;
    j["format"] = "lipclass-model/1";
    j["kernel"] = kernel_json(kernel);
    j["eps"] = model.eps();
    if (model.is_constant()) {
        j["constant_label"] = model.constant_label();
        j["rho_tilde"] = nullptr;
        j["rho"] = nullptr;
    } else {
        j["constant_label"] = nullptr;
        j["rho_tilde"] = model.rho_tilde();
        j["rho"] = model.rho_exact();
    }
    j["lipschitz"] = model.lipschitz_constant();
    j["retained_positive"] = model.retained_positive();
    j["retained_negative"] = model.retained_negative();
    j["excluded"] = model.excluded();
    j["dataset_hash"] = dataset_hash(ds);
    return j;
}

struct LoadedModel {
    MetricKernel kernel;
    Model model;
};

/// Rebuild a model from its JSON against the training dataset it names.
inline LoadedModel load_model(const json& j, const LabeledDataset& ds) {
    try {
        if (j.value("format", "") != "lipclass-model/1") throw input_error("not a lipclass model file");
        if (j.at("dataset_hash").get<std::string>() != dataset_hash(ds))
            throw input_error("training dataset does not match the model's dataset hash");
        const auto kernel = kernel_from_json(j.at("kernel"));
        check_payload(ds, kernel);
        const auto excluded = j.at("excluded").get<std::vector<std::size_t>>();
        std::optional<double> rho_tilde;
        if (!j.at("rho_tilde").is_null()) rho_tilde = j["rho_tilde"].get<double>();
        auto model = train(std::span<const Point>(ds.points), std::span<const int>(ds.labels),
                           std::span<const std::size_t>(excluded), j.at("eps").get<double>(), kernel, rho_tilde);
        if (model.retained_positive() != j.at("retained_positive").get<std::vector<std::size_t>>() ||
            model.retained_negative() != j.at("retained_negative").get<std::vector<std::size_t>>())
            throw input_error("model retained ids disagree with the dataset");
        return {kernel, std::move(model)};
    } catch (const json::exception& e) {
        throw input_error(std::string("malformed model file: ") + e.what());
    }
}

inline json report_json(const SrmReport& rep) {
    json arr = json::array();
    for (std::size_t i = 0; i < rep.candidates.size(); ++i) {
        const auto& c = rep.candidates[i];
        json row;
        row["L"] = c.lipschitz;
        row["k"] = c.k;
        row["D"] = std::isinf(c.dim) ? json(nullptr) : json(c.dim);
        row["G"] = c.bound;
        row["method"] = c.method;
        row["selected"] = i == rep.selected;
        arr.push_back(row);
    }
    return arr;
}

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string report_csv(const SrmReport& rep) {
    std::string out = "L,k,D,G,method\n";
    for (const auto& c : rep.candidates)
        out += format_double(c.lipschitz) + "," + std::to_string(c.k) + "," + format_double(c.dim) + "," +
               format_double(c.bound) + "," + c.method + "\n";
    return out;
}

} // namespace lipclass::io
