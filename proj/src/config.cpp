#include "imq/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "imq/error.hpp"
#include "imq/textio.hpp"

namespace imq {

namespace {

using json = nlohmann::json;

constexpr std::array<std::pair<Experiment, const char*>, 8> kExperimentNames{{
    {Experiment::cardinality, "cardinality"},
    {Experiment::decay_inverse, "decay-inverse"},
    {Experiment::decay_fundamental, "decay-fundamental"},
    {Experiment::neumann, "neumann"},
    {Experiment::lemma2, "lemma2"},
    {Experiment::interpolate, "interpolate"},
    {Experiment::lebesgue, "lebesgue"},
    {Experiment::stability, "stability"},
}};

constexpr std::array<std::pair<RhsKind, const char*>, 5> kRhsNames{{
    {RhsKind::random, "random"},
    {RhsKind::signs, "signs"},
    {RhsKind::ones, "ones"},
    {RhsKind::squares, "squares"},
    {RhsKind::unit, "unit"},
}};

const std::set<std::string> kKnownKeys{
    "experiment", "alpha",          "k",           "N",          "nodes",
    "margin",     "out_dir",        "dump_matrix", "tolerance",  "lag_kind",
    "fit_window", "exponent_slack", "sample_window", "samples",  "plateau_factor",
    "n_terms",    "power",          "rhs",         "rhs_seed",   "rhs_index",
    "eval_points", "path_tolerance", "grid_step",  "p",          "trials",
};

[[noreturn]] void range_error(const std::string& field, const std::string& bound) {
    throw ValidationError("config", "field '" + field + "' must satisfy " + bound);
}

template <typename T>
T get_as(const json& doc, const std::string& field) {
    try {
        return doc.at(field).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError("config", "field '" + field + "' has the wrong type (" +
                                            std::string(e.what()) + ")");
    }
}

std::pair<double, double> get_window(const json& doc, const std::string& field) {
    const auto v = get_as<std::vector<double>>(doc, field);
    if (v.size() != 2) range_error(field, "a two-element [lo, hi] array");
    return {v[0], v[1]};
}

NodeSpec parse_nodes(const json& node, const std::filesystem::path& base_dir) {
    NodeSpec spec;
    if (node.is_string()) {
        const auto kind = node.get<std::string>();
        if (kind == "lattice") return spec;
        if (kind == "jitter") {
            spec.kind = NodeSpec::Kind::jitter;
            return spec;
        }
        throw ValidationError("config", "field 'nodes' must be \"lattice\", \"jitter\", or an "
                                        "object; got \"" + kind + "\"");
    }
    if (!node.is_object() || node.size() != 1)
        throw ValidationError("config", "field 'nodes' must be an object with exactly one of "
                                        "'lattice', 'jitter', 'file'");
    const std::string kind = node.begin().key();
    const json& body = node.begin().value();
    if (kind == "lattice") return spec;
    if (kind == "jitter") {
        spec.kind = NodeSpec::Kind::jitter;
        if (body.is_object()) {
            for (const auto& [key, _] : body.items())
                if (key != "delta" && key != "seed")
                    throw ValidationError("config", "unknown keys in nodes.jitter: " + key);
            if (body.contains("delta")) spec.delta = get_as<double>(body, "delta");
            if (body.contains("seed")) spec.seed = get_as<std::uint64_t>(body, "seed");
        } else if (!body.is_boolean() && !body.is_null()) {
            throw ValidationError("config", "nodes.jitter must be an object {delta, seed}");
        }
        return spec;
    }
    if (kind == "file") {
        if (!body.is_string()) throw ValidationError("config", "nodes.file must be a path string");
        spec.kind = NodeSpec::Kind::file;
        std::filesystem::path p = body.get<std::string>();
        spec.path = p.is_absolute() ? p : base_dir / p;
        return spec;
    }
    throw ValidationError("config", "unknown node kind '" + kind + "'");
}

std::vector<NormKind> parse_norms(const json& v) {
    const json list = v.is_array() ? v : json::array({v});
    std::vector<NormKind> out;
    for (const auto& item : list) {
        if (item.is_number_integer()) out.push_back(parse_norm_kind(std::to_string(item.get<int>())));
        else if (item.is_string()) out.push_back(parse_norm_kind(item.get<std::string>()));
        else throw ValidationError("config", "field 'p' entries must be 1, 2, or \"inf\"");
    }
    return out;
}

}  // namespace

const char* to_string(Experiment e) {
    for (const auto& [value, name] : kExperimentNames)
        if (value == e) return name;
    return "?";
}

Experiment parse_experiment(std::string_view name) {
    for (const auto& [value, text] : kExperimentNames)
        if (name == text) return value;
    std::string known;
    for (const auto& [_, text] : kExperimentNames) known += std::string(known.empty() ? "" : ", ") + text;
    throw ValidationError("config", "unknown experiment '" + std::string(name) + "' (known: " +
                                        known + ")");
}

namespace {

const char* to_string(RhsKind r) {
    for (const auto& [value, name] : kRhsNames)
        if (value == r) return name;
    return "?";
}

RhsKind parse_rhs(const std::string& name) {
    for (const auto& [value, text] : kRhsNames)
        if (name == text) return value;
    throw ValidationError("config", "field 'rhs' must be one of random, signs, ones, squares, "
                                    "unit; got '" + name + "'");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config", "top level must be a JSON object");

    std::vector<std::string> unknown;
    for (const auto& [key, _] : doc.items())
        if (!kKnownKeys.contains(key)) unknown.push_back(key);
    if (!unknown.empty()) {
        std::string list;
        for (const auto& key : unknown) list += (list.empty() ? "" : ", ") + key;
        throw ValidationError("config", "unknown keys: " + list);
    }

    ExperimentConfig c;
    if (doc.contains("experiment")) c.experiment = parse_experiment(get_as<std::string>(doc, "experiment"));
    if (doc.contains("alpha")) c.alpha = get_as<double>(doc, "alpha");
    if (doc.contains("k")) c.k = get_as<int>(doc, "k");
    if (doc.contains("N")) c.N = get_as<int>(doc, "N");
    if (doc.contains("nodes")) c.nodes = parse_nodes(doc.at("nodes"), base_dir);
    if (doc.contains("margin")) c.margin = get_as<int>(doc, "margin");
    if (doc.contains("out_dir")) c.out_dir = get_as<std::string>(doc, "out_dir");
    if (doc.contains("dump_matrix")) c.dump_matrix = get_as<bool>(doc, "dump_matrix");
    if (doc.contains("tolerance")) c.tolerance = get_as<double>(doc, "tolerance");
    if (doc.contains("lag_kind")) {
        const auto kind = get_as<std::string>(doc, "lag_kind");
        if (kind == "index-distance") c.lag_kind = LagKind::index_distance;
        else if (kind == "position-distance") c.lag_kind = LagKind::position_distance;
        else range_error("lag_kind", "one of index-distance, position-distance");
    }
    if (doc.contains("fit_window")) c.fit_window = get_window(doc, "fit_window");
    if (doc.contains("exponent_slack")) c.exponent_slack = get_as<double>(doc, "exponent_slack");
    if (doc.contains("sample_window")) c.sample_window = get_window(doc, "sample_window");
    if (doc.contains("samples")) c.samples = get_as<int>(doc, "samples");
    if (doc.contains("plateau_factor")) c.plateau_factor = get_as<double>(doc, "plateau_factor");
    if (doc.contains("n_terms")) {
        const auto& v = doc.at("n_terms");
        c.n_terms = v.is_array() ? get_as<std::vector<int>>(doc, "n_terms")
                                 : std::vector<int>{get_as<int>(doc, "n_terms")};
    }
    if (doc.contains("power")) c.power = get_as<int>(doc, "power");
    if (doc.contains("rhs")) c.rhs = parse_rhs(get_as<std::string>(doc, "rhs"));
    if (doc.contains("rhs_seed")) c.rhs_seed = get_as<std::uint64_t>(doc, "rhs_seed");
    if (doc.contains("rhs_index")) c.rhs_index = get_as<int>(doc, "rhs_index");
    if (doc.contains("eval_points")) c.eval_points = get_as<int>(doc, "eval_points");
    if (doc.contains("path_tolerance")) c.path_tolerance = get_as<double>(doc, "path_tolerance");
    if (doc.contains("grid_step")) c.grid_step = get_as<double>(doc, "grid_step");
    if (doc.contains("p")) c.norms = parse_norms(doc.at("p"));
    if (doc.contains("trials")) c.trials = get_as<int>(doc, "trials");

    validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config", "cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

void validate(const ExperimentConfig& c) {
    if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) range_error("alpha", "alpha > 0");
    if (c.k < 1) range_error("k", "k >= 1");
    if (c.N < 0) range_error("N", "N >= 0");
    if (c.nodes.kind == NodeSpec::Kind::jitter && !(c.nodes.delta >= 0.0 && c.nodes.delta < 0.5))
        range_error("nodes.jitter.delta", "0 <= delta < 0.5");
    if (c.nodes.kind == NodeSpec::Kind::file && !std::filesystem::exists(c.nodes.path))
        throw IoError("config", "node file not found: " + c.nodes.path.string());
    if (c.margin && *c.margin < 0) range_error("margin", "margin >= 0");
    if (!(c.tolerance > 0.0)) range_error("tolerance", "tolerance > 0");
    if (c.fit_window && !(c.fit_window->first > 0.0 && c.fit_window->second > c.fit_window->first))
        range_error("fit_window", "0 < lo < hi");
    if (c.sample_window &&
        !(c.sample_window->first > 0.0 && c.sample_window->second > c.sample_window->first))
        range_error("sample_window", "0 < lo < hi");
    if (c.samples < 50) range_error("samples", "samples >= 50");
    if (!(c.plateau_factor > 0.0)) range_error("plateau_factor", "plateau_factor > 0");
    if (c.n_terms.empty()) range_error("n_terms", "at least one entry");
    for (int n : c.n_terms)
        if (n < 1) range_error("n_terms", "every entry >= 1");
    if (c.power < 1 || c.power > kDefaultMaxPower)
        range_error("power", "1 <= power <= " + std::to_string(kDefaultMaxPower));
    if (c.eval_points < 1) range_error("eval_points", "eval_points >= 1");
    if (!(c.path_tolerance > 0.0)) range_error("path_tolerance", "path_tolerance > 0");
    if (c.grid_step && !(*c.grid_step > 0.0)) range_error("grid_step", "grid_step > 0");
    if (c.norms.empty()) range_error("p", "at least one of 1, 2, inf");
    if (c.trials < 1) range_error("trials", "trials >= 1");
}

NodeWindow build_window(const ExperimentConfig& c) {
    switch (c.nodes.kind) {
        case NodeSpec::Kind::lattice: return lattice_window(c.N);
        case NodeSpec::Kind::jitter: return jittered_window(c.N, c.nodes.delta, c.nodes.seed);
        case NodeSpec::Kind::file: return read_node_file(c.nodes.path);
    }
    throw ValidationError("config", "unknown node kind");
}

ResolvedSettings resolve(const ExperimentConfig& c, const NodeWindow& window) {
    ResolvedSettings r;
    r.margin = c.margin.value_or(window.default_margin());
    r.fit_window = c.fit_window.value_or(default_fit_window(window.half_width(), r.margin));
    if (c.sample_window) {
        r.sample_window = *c.sample_window;
    } else {
        const auto [lo, hi] = window.core_range(r.margin);
        (void)lo;
        r.sample_window = {10.0, std::min(60.0, window.positions()[hi] - window.at(0))};
    }
    r.grid_step = c.grid_step.value_or(window.sep_min() / 20.0);
    return r;
}

nlohmann::ordered_json to_json(const ExperimentConfig& c, const ResolvedSettings& r) {
    nlohmann::ordered_json j;
    j["experiment"] = to_string(c.experiment);
    j["alpha"] = c.alpha;
    j["k"] = c.k;
    j["N"] = c.N;
    nlohmann::ordered_json nodes;
    switch (c.nodes.kind) {
        case NodeSpec::Kind::lattice: nodes["kind"] = "lattice"; break;
        case NodeSpec::Kind::jitter:
            nodes["kind"] = "jitter";
            nodes["delta"] = c.nodes.delta;
            nodes["seed"] = c.nodes.seed;
            break;
        case NodeSpec::Kind::file:
            nodes["kind"] = "file";
            nodes["path"] = c.nodes.path.string();
            break;
    }
    j["nodes"] = nodes;
    j["margin"] = r.margin;
    j["max_nodes"] = c.max_nodes;
    j["dump_matrix"] = c.dump_matrix;
    j["tolerance"] = c.tolerance;
    j["lag_kind"] = to_string(c.lag_kind);
    j["fit_window"] = {r.fit_window.first, r.fit_window.second};
    j["exponent_slack"] = c.exponent_slack;
    j["sample_window"] = {r.sample_window.first, r.sample_window.second};
    j["samples"] = c.samples;
    j["plateau_factor"] = c.plateau_factor;
    j["n_terms"] = c.n_terms;
    j["power"] = c.power;
    j["rhs"] = to_string(c.rhs);
    j["rhs_seed"] = c.rhs_seed;
    j["rhs_index"] = c.rhs_index;
    j["eval_points"] = c.eval_points;
    j["path_tolerance"] = c.path_tolerance;
    j["grid_step"] = r.grid_step;
    nlohmann::ordered_json norms = nlohmann::ordered_json::array();
    for (auto p : c.norms) norms.push_back(to_string(p));
    j["p"] = norms;
    j["trials"] = c.trials;
    return j;
}

}  // namespace imq
