#include "ept/communities.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include "ept/error.hpp"

namespace ept {

std::size_t Partition::module_count() const {
    int hi = -1;
    for (int a : assignment) hi = std::max(hi, a);
    return static_cast<std::size_t>(hi + 1);
}

std::vector<std::vector<NodeIndex>> Partition::modules() const {
    std::vector<std::vector<NodeIndex>> out(module_count());
    for (NodeIndex v = 0; v < assignment.size(); ++v)
        if (assignment[v] != kUnassigned) out[assignment[v]].push_back(v);
    return out;
}

std::size_t Partition::assigned_count() const {
    return static_cast<std::size_t>(
        std::count_if(assignment.begin(), assignment.end(), [](int a) { return a != kUnassigned; }));
}

double modularity(const ProofDag& dag, std::span<const int> assignment) {
    const double m = static_cast<double>(dag.edge_count());
    if (m == 0.0) return 0.0;
    int hi = -1;
    for (int a : assignment) hi = std::max(hi, a);
    std::vector<double> inside(hi + 1, 0.0), degree(hi + 1, 0.0);
    for (NodeIndex v = 0; v < dag.size(); ++v) {
        const int a = assignment[v];
        if (a == kUnassigned) continue;
        degree[a] += static_cast<double>(dag.dependencies(v).size() + dag.dependents(v).size());
        for (NodeIndex d : dag.dependencies(v))
            if (assignment[d] == a) inside[a] += 1.0;
    }
    double q = 0.0;
    for (int c = 0; c <= hi; ++c) {
        const double share = degree[c] / (2.0 * m);
        q += inside[c] / m - share * share;
    }
    return q;
}

namespace {

// Undirected working copy with removable edges.
struct UndirectedGraph {
    struct Arc {
        NodeIndex to;
        std::size_t edge;
    };
    std::vector<std::vector<Arc>> adj;
    std::vector<Edge> edges;
    std::vector<bool> alive;

    explicit UndirectedGraph(const ProofDag& dag) : adj(dag.size()), edges(dag.edges()), alive(edges.size(), true) {
        for (std::size_t e = 0; e < edges.size(); ++e) {
            adj[edges[e].dependency].push_back({edges[e].dependent, e});
            adj[edges[e].dependent].push_back({edges[e].dependency, e});
        }
    }
};

// Brandes accumulation from the given sources; adds pair dependencies into `score`.
void accumulate_betweenness(const UndirectedGraph& g, std::span<const NodeIndex> sources,
                            std::vector<double>& score) {
    const std::size_t n = g.adj.size();
    std::vector<double> sigma(n, 0.0), delta(n, 0.0);
    std::vector<long> dist(n, -1);
    std::vector<NodeIndex> order;
    std::vector<NodeIndex> queue;
    for (NodeIndex s : sources) {
        order.clear();
        queue.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeIndex v = queue[head];
            order.push_back(v);
            for (const auto& arc : g.adj[v]) {
                if (!g.alive[arc.edge]) continue;
                if (dist[arc.to] < 0) {
                    dist[arc.to] = dist[v] + 1;
                    queue.push_back(arc.to);
                }
                if (dist[arc.to] == dist[v] + 1) sigma[arc.to] += sigma[v];
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            NodeIndex w = *it;
            for (const auto& arc : g.adj[w]) {
                if (!g.alive[arc.edge]) continue;
                NodeIndex v = arc.to;
                if (dist[v] == dist[w] - 1) {
                    const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                    score[arc.edge] += c;
                    delta[v] += c;
                }
            }
        }
        for (NodeIndex v : order) {
            sigma[v] = 0.0;
            delta[v] = 0.0;
            dist[v] = -1;
        }
    }
}

// Component labels (numbered by smallest member) over alive edges.
std::vector<int> components(const UndirectedGraph& g) {
    std::vector<int> comp(g.adj.size(), -1);
    int next = 0;
    std::vector<NodeIndex> stack;
    for (NodeIndex s = 0; s < g.adj.size(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeIndex v = stack.back();
            stack.pop_back();
            for (const auto& arc : g.adj[v])
                if (g.alive[arc.edge] && comp[arc.to] < 0) {
                    comp[arc.to] = next;
                    stack.push_back(arc.to);
                }
        }
        ++next;
    }
    return comp;
}

bool nearly_equal(double a, double b) {
    return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

std::vector<EdgeScore> edge_betweenness(const ProofDag& dag) {
    UndirectedGraph g(dag);
    std::vector<double> score(g.edges.size(), 0.0);
    std::vector<NodeIndex> all(dag.size());
    std::iota(all.begin(), all.end(), NodeIndex{0});
    accumulate_betweenness(g, all, score);
    std::vector<EdgeScore> out;
    out.reserve(score.size());
    for (std::size_t e = 0; e < score.size(); ++e) out.push_back({g.edges[e], score[e] / 2.0});
    return out;
}

Partition girvan_newman(const ProofDag& dag) {
    if (dag.size() < 2) throw ConfigurationError("girvan_newman needs at least two nodes");
    UndirectedGraph g(dag);
    const std::size_t m = g.edges.size();

    auto comp = components(g);
    Partition best{comp, modularity(dag, comp)};

    std::vector<double> score(m, 0.0);
    {
        std::vector<NodeIndex> all(dag.size());
        std::iota(all.begin(), all.end(), NodeIndex{0});
        accumulate_betweenness(g, all, score);
    }
    std::size_t remaining = m;
    while (remaining > 0) {
        std::size_t pick = m;
        for (std::size_t e = 0; e < m; ++e) {
            if (!g.alive[e]) continue;
            if (pick == m || (score[e] > score[pick] && !nearly_equal(score[e], score[pick]))) {
                pick = e;
                continue;
            }
            if (nearly_equal(score[e], score[pick])) {
                const auto key_e = std::tie(dag.id(g.edges[e].dependency), dag.id(g.edges[e].dependent));
                const auto key_p = std::tie(dag.id(g.edges[pick].dependency), dag.id(g.edges[pick].dependent));
                if (key_e < key_p) pick = e;
            }
        }
        g.alive[pick] = false;
        --remaining;

        // Only the component that contained the removed edge changes.
        const int old_comp = comp[g.edges[pick].dependency];
        std::vector<NodeIndex> members;
        for (NodeIndex v = 0; v < dag.size(); ++v)
            if (comp[v] == old_comp) members.push_back(v);
        for (NodeIndex v : members)
            for (const auto& arc : g.adj[v])
                if (g.alive[arc.edge]) score[arc.edge] = 0.0;
        accumulate_betweenness(g, members, score);

        auto next = components(g);
        if (next != comp) {
            comp = std::move(next);
            const double q = modularity(dag, comp);
            if (q > best.modularity + 1e-12) best = {comp, q};
        }
    }
    return best;
}

Partition top_clusters(const ProofDag& dag, const Partition& partition, double coverage) {
    if (!(coverage >= 0.0 && coverage <= 1.0)) throw DomainError("coverage must lie in [0, 1]");
    auto modules = partition.modules();
    std::vector<std::size_t> order(modules.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return modules[a].size() > modules[b].size(); });

    Partition out;
    out.assignment.assign(partition.assignment.size(), kUnassigned);
    const double target = coverage * static_cast<double>(partition.assignment.size());
    std::size_t covered = 0;
    int next = 0;
    for (std::size_t idx : order) {
        if (static_cast<double>(covered) >= target - 1e-9) break;
        if (modules[idx].empty()) continue;
        for (NodeIndex v : modules[idx]) out.assignment[v] = next;
        covered += modules[idx].size();
        ++next;
    }
    out.modularity = modularity(dag, out.assignment);
    return out;
}

}  // namespace ept
