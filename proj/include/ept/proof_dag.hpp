#pragma once

// Canonical proof dependency graph. Edges run from a dependency to the claim
// that uses it, so axioms are sources and the theorem is a sink.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ept {

using NodeIndex = std::uint32_t;

struct Edge {
    NodeIndex dependency;
    NodeIndex dependent;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

class DagBuilder;

/// Immutable DAG of claims. Construct through DagBuilder, which rejects cycles.
class ProofDag {
public:
    ProofDag() = default;

    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }
    std::size_t edge_count() const noexcept { return dep_targets_.size(); }

    const std::string& id(NodeIndex n) const { return ids_[n]; }
    const std::string& label(NodeIndex n) const { return labels_[n]; }

    /// Claims that `n` relies on (its in-neighbours), ascending.
    std::span<const NodeIndex> dependencies(NodeIndex n) const {
        return {dep_targets_.data() + dep_offsets_[n], dep_targets_.data() + dep_offsets_[n + 1]};
    }
    /// Claims that use `n` (its out-neighbours), ascending.
    std::span<const NodeIndex> dependents(NodeIndex n) const {
        return {use_targets_.data() + use_offsets_[n], use_targets_.data() + use_offsets_[n + 1]};
    }

    std::optional<NodeIndex> theorem() const noexcept { return theorem_; }
    std::optional<NodeIndex> find(std::string_view id) const;

    /// All edges ordered by (dependency, dependent).
    std::vector<Edge> edges() const;

    /// Kahn order with ties broken by index, so it is deterministic.
    std::vector<NodeIndex> topological_order() const;

    /// Nodes with no dependents.
    std::vector<NodeIndex> sinks() const;

    /// Copy with a different theorem designation.
    ProofDag with_theorem(std::optional<NodeIndex> theorem) const;

    friend bool operator==(const ProofDag& a, const ProofDag& b);

private:
    friend class DagBuilder;

    std::vector<std::string> ids_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> dep_offsets_{0};
    std::vector<NodeIndex> dep_targets_;
    std::vector<std::size_t> use_offsets_{0};
    std::vector<NodeIndex> use_targets_;
    std::optional<NodeIndex> theorem_;
    std::unordered_map<std::string, NodeIndex> index_;
};

class DagBuilder {
public:
    /// Adds a node; throws ept::Error if the id is already taken.
    NodeIndex add_node(std::string id, std::string label);
    NodeIndex add_node(std::string id) {
        std::string label = id;
        return add_node(std::move(id), std::move(label));
    }
    /// Existing node with this id, or a new one labelled by its id.
    NodeIndex intern(std::string_view id);
    std::optional<NodeIndex> find(std::string_view id) const;

    /// Duplicate edges collapse. A self-loop throws CycleError.
    void add_edge(NodeIndex dependency, NodeIndex dependent);
    void set_theorem(NodeIndex theorem);

    std::size_t size() const noexcept { return ids_.size(); }

    /// Validates acyclicity (CycleError naming one cycle). When no theorem
    /// was set and `unique_sink_theorem` is true, a unique sink becomes the theorem.
    ProofDag build(bool unique_sink_theorem = false) &&;

private:
    std::vector<std::string> ids_;
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::optional<NodeIndex> theorem_;
    std::unordered_map<std::string, NodeIndex> index_;
};

/// Subgraph induced by `keep`; node order follows the original indices.
/// The theorem survives if it is kept.
ProofDag induced_subgraph(const ProofDag& dag, std::span<const NodeIndex> keep);

// ---------------------------------------------------------------------------
// Edge-list ingestion, degrees, roles and truncation.

/// Parses the `.deps` format: one `dependent: dep1 dep2 ...` per line,
/// `#` starts a comment line. Theorem defaults to the unique sink.
ProofDag from_edge_list(std::string_view text);

/// Inverse of from_edge_list: one line per node in index order.
std::string to_edge_list(const ProofDag& dag);

struct DegreeTable {
    std::vector<std::size_t> in_degree;   // number of dependencies
    std::vector<std::size_t> out_degree;  // number of dependents
};

DegreeTable degrees(const ProofDag& dag);

struct NodeRoles {
    std::vector<NodeIndex> axioms;
    NodeIndex theorem = 0;
    std::vector<NodeIndex> interior;
};

/// Axioms are in-degree-0 nodes other than the theorem. Throws
/// AmbiguousTheoremError when there is no designation and not exactly one sink.
NodeRoles classify_roles(const ProofDag& dag);

/// Breadth-first expansion from the theorem towards its dependencies. Returns
/// the induced subgraph at the first depth whose cumulative node count exceeds
/// `limit`, or the whole reachable graph when it never does.
ProofDag truncate_by_depth(const ProofDag& dag, std::size_t limit = 10000);

}  // namespace ept
