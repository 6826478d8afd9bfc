#include "ept/graph_io.hpp"

#include <json.hpp>
#include <sstream>

#include "ept/error.hpp"

namespace ept {

using nlohmann::json;

std::string to_json(const ProofDag& dag) {
    json nodes = json::array();
    for (NodeIndex v = 0; v < dag.size(); ++v) nodes.push_back({{"id", dag.id(v)}, {"label", dag.label(v)}});
    json edges = json::array();
    for (const Edge& e : dag.edges()) edges.push_back(json::array({dag.id(e.dependency), dag.id(e.dependent)}));
    json doc = {{"format", "ept-lab-graph"}, {"version", kGraphFormatVersion}, {"nodes", nodes}, {"edges", edges}};
    if (auto t = dag.theorem()) doc["theorem"] = dag.id(*t);
    return doc.dump() + "\n";
}

ProofDag graph_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("graph JSON: ") + e.what());
    }
    try {
        if (!doc.is_object()) throw Error("graph JSON: top level must be an object");
        if (doc.contains("version") && doc.at("version").get<int>() != kGraphFormatVersion)
            throw Error("graph JSON: unsupported version " + doc.at("version").dump());
        DagBuilder b;
        for (const auto& node : doc.at("nodes")) {
            if (node.is_string()) {
                b.add_node(node.get<std::string>());
            } else {
                std::string id = node.at("id").get<std::string>();
                std::string label = node.contains("label") ? node.at("label").get<std::string>() : id;
                b.add_node(std::move(id), std::move(label));
            }
        }
        for (const auto& edge : doc.at("edges")) {
            if (!edge.is_array() || edge.size() != 2) throw Error("graph JSON: each edge must be [dependency, dependent]");
            const auto from = edge[0].get<std::string>();
            const auto to = edge[1].get<std::string>();
            auto u = b.find(from);
            auto v = b.find(to);
            if (!u || !v) throw Error("graph JSON: edge references unknown node '" + (u ? to : from) + "'");
            b.add_edge(*u, *v);
        }
        if (doc.contains("theorem") && !doc.at("theorem").is_null()) {
            const auto t = doc.at("theorem").get<std::string>();
            auto n = b.find(t);
            if (!n) throw Error("graph JSON: theorem '" + t + "' is not a node");
            b.set_theorem(*n);
        }
        return std::move(b).build();
    } catch (const json::exception& e) {
        throw Error(std::string("graph JSON: ") + e.what());
    }
}

namespace {

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

// Qualitative palette; modules beyond its length cycle.
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string to_dot(const ProofDag& dag, const Partition* partition) {
    std::ostringstream os;
    os << "digraph proof {\n";
    for (NodeIndex v = 0; v < dag.size(); ++v) {
        os << "  " << dot_quote(dag.id(v)) << " [label=" << dot_quote(dag.label(v));
        if (partition && partition->assignment.at(v) != kUnassigned) {
            const int m = partition->assignment[v];
            os << ", style=filled, fillcolor=\"" << kPalette[m % std::size(kPalette)] << "\", module=" << m;
        }
        if (dag.theorem() == v) os << ", shape=doublecircle";
        os << "];\n";
    }
    for (const Edge& e : dag.edges())
        os << "  " << dot_quote(dag.id(e.dependency)) << " -> " << dot_quote(dag.id(e.dependent)) << ";\n";
    os << "}\n";
    return os.str();
}

std::string partition_to_json(const ProofDag& dag, const Partition& partition) {
    json modules = json::object();
    for (NodeIndex v = 0; v < dag.size(); ++v) modules[dag.id(v)] = partition.assignment.at(v);
    json doc = {{"format", "ept-lab-partition"},
                {"version", kGraphFormatVersion},
                {"modularity", partition.modularity},
                {"modules", modules}};
    return doc.dump() + "\n";
}

Partition partition_from_json(const ProofDag& dag, std::string_view text) {
    Partition p;
    p.assignment.assign(dag.size(), kUnassigned);
    try {
        json doc = json::parse(text);
        for (const auto& [id, module] : doc.at("modules").items()) {
            auto v = dag.find(id);
            if (!v) throw Error("partition JSON: unknown node '" + id + "'");
            const int m = module.is_null() ? kUnassigned : module.get<int>();
            if (m < kUnassigned) throw Error("partition JSON: bad module index for '" + id + "'");
            p.assignment[*v] = m;
        }
    } catch (const json::exception& e) {
        throw Error(std::string("partition JSON: ") + e.what());
    }
    // Renumber densely so every module index in range is non-empty.
    std::vector<int> remap;
    for (int& a : p.assignment) {
        if (a == kUnassigned) continue;
        if (static_cast<std::size_t>(a) >= remap.size()) remap.resize(a + 1, -1);
    }
    int next = 0;
    for (int a : p.assignment)
        if (a != kUnassigned && remap[a] < 0) remap[a] = next++;
    for (int& a : p.assignment)
        if (a != kUnassigned) a = remap[a];
    p.modularity = modularity(dag, p.assignment);
    return p;
}

std::optional<GraphFormat> parse_graph_format(std::string_view name) {
    if (name == "json") return GraphFormat::Json;
    if (name == "dot") return GraphFormat::Dot;
    if (name == "edges" || name == "deps") return GraphFormat::Edges;
    return std::nullopt;
}

std::string export_graph(const ProofDag& dag, GraphFormat format, const Partition* partition) {
    switch (format) {
        case GraphFormat::Json: return to_json(dag);
        case GraphFormat::Dot: return to_dot(dag, partition);
        case GraphFormat::Edges: return to_edge_list(dag);
    }
    return {};
}

}  // namespace ept
