#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "learnlab/adversarial.hpp"
#include "learnlab/classes.hpp"
#include "learnlab/complexity.hpp"
#include "learnlab/dims.hpp"
#include "learnlab/processes.hpp"
#include "learnlab/random_level.hpp"
#include "learnlab/trees.hpp"

namespace learnlab {

using json = nlohmann::ordered_json;

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

/// Accepts either a filename or inline JSON (leading '{').
inline json load_json_arg(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return json::parse(arg);
    return load_json_file(arg);
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Class specs
// ---------------------------------------------------------------------------

inline std::string point_from_json(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    if (j.is_number()) return format_value(j.get<double>());
    throw std::invalid_argument("class spec: bad domain point");
}

inline LabelSpace labels_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "binary") return LabelSpace::binary();
    if (kind == "real-grid") return LabelSpace::grid(j.at("values").get<std::vector<double>>());
    throw std::invalid_argument("class spec: unknown label kind '" + kind + "'");
}

inline FiniteFunctionClass class_from_json(const json& j) {
    if (j.contains("builder")) {
        const std::string b = j.at("builder").get<std::string>();
        if (b == "threshold") return make_threshold_class(j.at("k").get<int>());
        if (b == "bounded-variation")
            return make_bounded_variation_class(
                j.at("grid_size").get<int>(), j.at("V").get<double>(),
                LabelSpace::grid(j.at("values").get<std::vector<double>>()));
        throw std::invalid_argument("class spec: unknown builder '" + b + "'");
    }
    std::vector<std::string> points;
    for (const auto& p : j.at("domain")) points.push_back(point_from_json(p));
    LabelSpace labels = labels_from_json(j.at("labels"));
    auto values = j.at("values").get<std::vector<std::vector<double>>>();
    std::vector<std::string> names;
    if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
    return FiniteFunctionClass(Domain(std::move(points)), std::move(labels), std::move(values),
                               std::move(names));
}

inline json class_to_json(const FiniteFunctionClass& cls) {
    json j;
    j["domain"] = cls.domain().points;
    j["labels"] = {{"kind", cls.labels().is_binary() ? "binary" : "real-grid"},
                   {"values", cls.labels().values}};
    std::vector<std::vector<double>> values;
    for (int f = 0; f < cls.size(); ++f) values.push_back(cls.row_copy(f));
    j["values"] = values;
    j["names"] = cls.names();
    return j;
}

// ---------------------------------------------------------------------------
// Tree files: map from sign-path strings to labels
// ---------------------------------------------------------------------------

template <typename T, typename Parse>
SignTree<T> tree_from_json(const json& j, Parse&& parse) {
    int depth = 0;
    for (const auto& [key, value] : j.items())
        depth = std::max(depth, static_cast<int>(key.size()) + 1);
    if (depth == 0) throw std::invalid_argument("tree spec: empty");
    SignTree<T> tree(depth);
    std::vector<std::vector<bool>> seen(depth);
    for (int t = 1; t <= depth; ++t) seen[t - 1].assign(tree.width(t), false);
    for (const auto& [key, value] : j.items()) {
        const auto [t, bits] = SignTree<T>::parse_path(key);
        tree.at(t, bits) = parse(value);
        seen[t - 1][bits] = true;
    }
    for (int t = 1; t <= depth; ++t)
        for (bool s : seen[t - 1])
            if (!s) throw std::invalid_argument("tree spec: missing node at level " +
                                                std::to_string(t));
    return tree;
}

/// Domain-point-labeled tree (labels are point identifiers).
inline SignTree<int> point_tree_from_json(const json& j, const Domain& domain) {
    return tree_from_json<int>(
        j, [&](const json& v) { return domain.index_of(point_from_json(v)); });
}

/// +-1-labeled witness tree.
inline SignTree<int> sign_tree_from_json(const json& j) {
    return tree_from_json<int>(j, [](const json& v) {
        const int s = v.get<int>();
        if (s != 1 && s != -1) throw std::invalid_argument("tree spec: labels must be +-1");
        return s;
    });
}

inline json dimension_report_to_json(const DimensionReport& rep) {
    json j;
    j["kind"] = rep.kind;
    if (rep.gamma) j["gamma"] = *rep.gamma;
    j["value"] = rep.value;
    if (rep.sequence_witness) {
        json w;
        w["points"] = rep.sequence_witness->points;
        if (!rep.sequence_witness->witnesses.empty())
            w["witnesses"] = rep.sequence_witness->witnesses;
        j["witness"] = w;
    }
    if (rep.tree_witness) {
        json w = json::object();
        rep.tree_witness->for_each_node([&](int t, std::uint32_t bits, const TreeNodeLabel& node) {
            json entry;
            entry["point"] = node.point;
            if (rep.kind == "sfat") entry["witness"] = node.witness;
            w[SignTree<TreeNodeLabel>::path_string(t, bits)] = entry;
        });
        j["witness"] = w;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Distribution and process specs
// ---------------------------------------------------------------------------

/// Distributions are lists of [point, label, mass] triples over the
/// outcome space induced by the class under study.
inline Distribution distribution_from_json(const json& j, const OutcomeSpace& space) {
    Distribution p(space.size(), 0.0);
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 3)
            throw std::invalid_argument("distribution spec: expected [point, label, mass]");
        const int x = space.domain().index_of(point_from_json(entry[0]));
        const double y = entry[1].get<double>();
        p[space.index_of(x, y)] += entry[2].get<double>();
    }
    check_distribution(p);
    return p;
}

inline Distribution x_distribution_from_json(const json& j, const Domain& domain) {
    Distribution p(domain.size(), 0.0);
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("x-distribution spec: expected [point, mass]");
        p[domain.index_of(point_from_json(entry[0]))] += entry[1].get<double>();
    }
    check_distribution(p);
    return p;
}

inline std::vector<int> sequence_from_json(const json& j, const OutcomeSpace& space) {
    std::vector<int> seq;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("sequence spec: expected [point, label]");
        const int x = space.domain().index_of(point_from_json(entry[0]));
        seq.push_back(space.index_of(x, entry[1].get<double>()));
    }
    return seq;
}

/// Builds a finite kernel from a process spec, using the class under
/// study for the outcome space. Adversarial specs materialize only with
/// a fixed hidden vector (small n); the unfixed process is handled by the
/// dedicated simulator, not through this factory.
inline std::shared_ptr<const ProcessKernel> kernel_from_json(const json& j,
                                                             const OutcomeSpace& space) {
    const std::string kind = j.at("process").get<std::string>();
    if (kind == "iid") {
        return std::make_shared<ProductKernel>(space, distribution_from_json(j.at("p"), space),
                                               j.at("n").get<int>());
    }
    if (kind == "mixture") {
        return std::make_shared<MixtureIidKernel>(
            space, j.at("lambda").get<double>(), distribution_from_json(j.at("p"), space),
            distribution_from_json(j.at("q"), space), j.at("n").get<int>());
    }
    if (kind == "drifting") {
        DriftSchedule sched;
        if (j.contains("rate"))
            sched = DriftSchedule::parse(j.at("rate").get<std::string>(),
                                         j.value("exponent", 1.0));
        return std::make_shared<DriftingKernel>(space,
                                                distribution_from_json(j.at("p_start"), space),
                                                distribution_from_json(j.at("p_end"), space),
                                                j.at("n").get<int>(), sched);
    }
    if (kind == "point-mass") {
        return std::make_shared<PointMassKernel>(space,
                                                 sequence_from_json(j.at("sequence"), space));
    }
    if (kind == "adversarial-threshold") {
        const int n = j.at("n").get<int>();
        if (!j.contains("fixed_b_seed"))
            throw std::invalid_argument(
                "adversarial-threshold: finite materialization requires fixed_b_seed "
                "(the unfixed process runs through the dedicated estimator)");
        Rng rng(j.at("fixed_b_seed").get<std::uint64_t>());
        const BitVec b = BitVec::random(1 << n, rng);
        return std::make_shared<AdversarialFiniteKernel>(n, b);
    }
    throw std::invalid_argument("process spec: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Result serialization
// ---------------------------------------------------------------------------

inline json path_to_json(const ProcessKernel& kernel, const Path& path) {
    json rows = json::array();
    const OutcomeSpace& space = kernel.outcomes();
    for (int t = 0; t < path.horizon(); ++t) {
        json row;
        row["t"] = t + 1;
        const Outcome& z = space.at(path.z[t]);
        row["x"] = space.domain().points[z.x];
        row["y"] = z.y;
        json dist = json::array();
        for (int i = 0; i < space.size(); ++i)
            if (path.step_dists[t][i] > 0.0)
                dist.push_back({space.domain().points[space.at(i).x], space.at(i).y,
                                path.step_dists[t][i]});
        row["p_t"] = dist;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace learnlab
