#pragma once

// Girvan-Newman module detection on the undirected projection of a ProofDag.

#include <cstddef>
#include <span>
#include <vector>

#include "ept/proof_dag.hpp"

namespace ept {

inline constexpr int kUnassigned = -1;

struct Partition {
    /// Module index per node, or kUnassigned. Modules are numbered 0..k-1.
    std::vector<int> assignment;
    double modularity = 0.0;

    std::size_t module_count() const;
    /// Members of each module, ascending.
    std::vector<std::vector<NodeIndex>> modules() const;
    std::size_t assigned_count() const;
};

/// Newman-Girvan modularity of the undirected projection. Unassigned nodes
/// contribute nothing. Zero for an edgeless graph.
double modularity(const ProofDag& dag, std::span<const int> assignment);

struct EdgeScore {
    Edge edge;
    double value = 0.0;
};

/// Shortest-path betweenness of every edge, each unordered endpoint pair
/// counted once, with fractional credit split over equal-length paths.
/// Ordered like ProofDag::edges().
std::vector<EdgeScore> edge_betweenness(const ProofDag& dag);

/// Removes the highest-betweenness edge (ties: smallest (dependency id,
/// dependent id)) until no edges remain, recomputing betweenness after every
/// removal, and returns the component partition of maximum modularity.
/// Requires at least two nodes.
Partition girvan_newman(const ProofDag& dag);

/// Keeps the largest modules until at least `coverage` of the nodes are
/// assigned. Kept modules are renumbered by decreasing size; the rest become
/// kUnassigned. Modularity is recomputed.
Partition top_clusters(const ProofDag& dag, const Partition& partition, double coverage = 0.9);

}  // namespace ept
