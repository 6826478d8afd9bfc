#include "ept/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "ept/error.hpp"
#include "ept/rng.hpp"

namespace ept {

void AssemblyParams::validate() const {
    if (n_nodes < 1) throw DomainError("assembly: n_nodes must be at least 1");
    if (!(mean_deps >= 0.0) || !std::isfinite(mean_deps)) throw DomainError("assembly: mean_deps must be >= 0");
    if (!(copy_prob >= 0.0 && copy_prob <= 1.0)) throw DomainError("assembly: copy_prob must lie in [0, 1]");
}

ProofDag generate(const AssemblyParams& params) {
    params.validate();
    Rng rng(params.seed);
    const std::size_t n = params.n_nodes;

    DagBuilder b;
    for (std::size_t k = 0; k < n; ++k) b.add_node("v" + std::to_string(k));

    std::vector<std::vector<NodeIndex>> deps(n);
    std::vector<NodeIndex> picked;
    std::unordered_set<NodeIndex> seen;
    const double extra_mean = std::max(params.mean_deps, 1.0) - 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t want = std::min<std::size_t>(1 + geometric0(rng, extra_mean), k);

        // Floyd's sampling of `want` distinct indices from [0, k).
        picked.clear();
        seen.clear();
        for (std::size_t j = k - want; j < k; ++j) {
            auto t = static_cast<NodeIndex>(uniform_index(rng, j + 1));
            if (!seen.insert(t).second) {
                t = static_cast<NodeIndex>(j);
                seen.insert(t);
            }
            picked.push_back(t);
        }

        std::vector<NodeIndex> mine = picked;
        for (NodeIndex t : picked)
            for (NodeIndex d : deps[t])
                if (bernoulli(rng, params.copy_prob) && seen.insert(d).second) mine.push_back(d);
        std::sort(mine.begin(), mine.end());
        for (NodeIndex d : mine) b.add_edge(d, static_cast<NodeIndex>(k));
        deps[k] = std::move(mine);
    }
    b.set_theorem(static_cast<NodeIndex>(n - 1));
    return std::move(b).build();
}

}  // namespace ept
