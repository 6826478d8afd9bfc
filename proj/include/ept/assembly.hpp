#pragma once

// Assembly-and-tinkering generator for synthetic proof networks.

#include <cstdint>

#include "ept/proof_dag.hpp"

namespace ept {

struct AssemblyParams {
    std::size_t n_nodes = 1000;
    /// Mean of the per-node dependency count (geometric on {1, 2, ...});
    /// values below one mean exactly one dependency.
    double mean_deps = 10.0;
    /// Chance of also linking to each dependency of a chosen dependency.
    double copy_prob = 0.1;
    std::uint64_t seed = 1;

    /// Throws DomainError on out-of-range values.
    void validate() const;
};

/// Node k (k >= 1) draws a dependency count c, picks min(c, k) distinct
/// earlier nodes uniformly, then links to each dependency of each picked node
/// with probability copy_prob. Node 0 is the only axiom; the last node is the
/// theorem. Ids are "v0", "v1", ...
ProofDag generate(const AssemblyParams& params);

}  // namespace ept
