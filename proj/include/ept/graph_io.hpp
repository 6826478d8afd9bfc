#pragma once

// Serialization of graphs and partitions.
//
// Graph JSON (keys sorted, compact):
//   {"edges":[["dep","dependent"],...],"format":"ept-lab-graph",
//    "nodes":[{"id":"a","label":"a"},...],"theorem":"t","version":1}
// Partition JSON:
//   {"format":"ept-lab-partition","modularity":0.41,"modules":{"a":0,"b":-1},"version":1}

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ept/communities.hpp"
#include "ept/proof_dag.hpp"

namespace ept {

inline constexpr int kGraphFormatVersion = 1;

std::string to_json(const ProofDag& dag);
ProofDag graph_from_json(std::string_view text);

/// DOT digraph. With a partition, assigned nodes get a fill colour per module.
std::string to_dot(const ProofDag& dag, const Partition* partition = nullptr);

std::string partition_to_json(const ProofDag& dag, const Partition& partition);
/// Nodes absent from the document are unassigned; unknown ids are an error.
Partition partition_from_json(const ProofDag& dag, std::string_view text);

enum class GraphFormat { Json, Dot, Edges };

std::optional<GraphFormat> parse_graph_format(std::string_view name);
std::string export_graph(const ProofDag& dag, GraphFormat format, const Partition* partition = nullptr);

}  // namespace ept
