#pragma once

// Slow, independent reference computations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ept/proof_dag.hpp"

namespace oracle {

using ept::NodeIndex;

/// Random DAG on n nodes: edge i -> j (i < j) with probability p.
inline ept::ProofDag random_dag(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ept::DagBuilder b;
    for (std::size_t i = 0; i < n; ++i) b.add_node("n" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (u(rng) < p) b.add_edge(static_cast<NodeIndex>(i), static_cast<NodeIndex>(j));
    return std::move(b).build();
}

/// DAG from (dependency, dependent) name pairs; nodes in first-mention order.
inline ept::ProofDag dag_from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                                    const std::vector<std::string>& extra_nodes = {}) {
    ept::DagBuilder b;
    for (const auto& [a, c] : pairs) {
        const auto from = b.intern(a);
        b.add_edge(from, b.intern(c));
    }
    for (const auto& n : extra_nodes) b.intern(n);
    return std::move(b).build();
}

/// Exact P(s_i = +1) under P(s) ~ exp(beta sum_edges s_i s_j + h sum_i s_i), by
/// summing over all 2^N states.
inline std::vector<double> gibbs_marginals(const ept::ProofDag& dag, double beta, double h) {
    const std::size_t n = dag.size();
    const auto edges = dag.edges();
    std::vector<double> up(n, 0.0);
    double z = 0.0;
    // Shift by the largest possible exponent to keep weights finite.
    const double shift = beta * static_cast<double>(edges.size()) + std::fabs(h) * static_cast<double>(n);
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        auto s = [&](NodeIndex i) { return (mask >> i) & 1ULL ? 1.0 : -1.0; };
        double e = 0.0;
        for (const auto& ed : edges) e += beta * s(ed.dependency) * s(ed.dependent);
        for (NodeIndex i = 0; i < n; ++i) e += h * s(i);
        const double w = std::exp(e - shift);
        z += w;
        for (NodeIndex i = 0; i < n; ++i)
            if ((mask >> i) & 1ULL) up[i] += w;
    }
    for (auto& x : up) x /= z;
    return up;
}

/// Exact P(last spin = +1) on an open chain of n spins with coupling beta and
/// uniform field h, by transfer matrices.
inline double path_end_marginal(std::size_t n, double beta, double h) {
    // Forward message over the first n-1 spins, normalised each step.
    double m_plus = std::exp(h), m_minus = std::exp(-h);
    for (std::size_t k = 1; k < n; ++k) {
        const double np = (m_plus * std::exp(beta) + m_minus * std::exp(-beta)) * std::exp(h);
        const double nm = (m_plus * std::exp(-beta) + m_minus * std::exp(beta)) * std::exp(-h);
        const double z = np + nm;
        m_plus = np / z;
        m_minus = nm / z;
    }
    return m_plus / (m_plus + m_minus);
}

/// Undirected adjacency of the projection.
inline std::vector<std::set<NodeIndex>> undirected(const ept::ProofDag& dag) {
    std::vector<std::set<NodeIndex>> adj(dag.size());
    for (const auto& e : dag.edges()) {
        adj[e.dependency].insert(e.dependent);
        adj[e.dependent].insert(e.dependency);
    }
    return adj;
}

/// Edge betweenness by listing every shortest path between every unordered
/// pair explicitly. Keyed by (dependency, dependent).
inline std::map<std::pair<NodeIndex, NodeIndex>, double> brute_betweenness(const ept::ProofDag& dag) {
    const auto adj = undirected(dag);
    const std::size_t n = dag.size();
    std::map<std::pair<NodeIndex, NodeIndex>, double> score;
    for (const auto& e : dag.edges()) score[{e.dependency, e.dependent}] = 0.0;
    auto key = [&](NodeIndex a, NodeIndex b) {
        return score.count({a, b}) ? std::make_pair(a, b) : std::make_pair(b, a);
    };
    for (NodeIndex s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::queue<NodeIndex> q;
        dist[s] = 0;
        q.push(s);
        while (!q.empty()) {
            auto v = q.front();
            q.pop();
            for (auto w : adj[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
        }
        for (NodeIndex t = s + 1; t < n; ++t) {
            if (dist[t] < 0) continue;
            std::vector<std::vector<NodeIndex>> paths;
            std::vector<NodeIndex> cur{s};
            std::function<void(NodeIndex)> walk = [&](NodeIndex v) {
                if (v == t) {
                    paths.push_back(cur);
                    return;
                }
                for (auto w : adj[v])
                    if (dist[w] == dist[v] + 1) {
                        cur.push_back(w);
                        walk(w);
                        cur.pop_back();
                    }
            };
            walk(s);
            for (const auto& p : paths)
                for (std::size_t i = 0; i + 1 < p.size(); ++i)
                    score[key(p[i], p[i + 1])] += 1.0 / static_cast<double>(paths.size());
        }
    }
    return score;
}

/// Modularity from the textbook double sum over node pairs.
inline double modularity(const ept::ProofDag& dag, const std::vector<int>& c) {
    const auto adj = undirected(dag);
    const std::size_t n = dag.size();
    double m2 = 0.0;
    for (const auto& a : adj) m2 += static_cast<double>(a.size());
    if (m2 == 0.0) return 0.0;
    double q = 0.0;
    for (NodeIndex i = 0; i < n; ++i)
        for (NodeIndex j = 0; j < n; ++j) {
            if (c[i] < 0 || c[i] != c[j]) continue;
            const double a = adj[i].count(j) ? 1.0 : 0.0;
            q += a - static_cast<double>(adj[i].size() * adj[j].size()) / m2;
        }
    return q / m2;
}

/// Best modularity over every set partition (restricted growth strings).
inline std::pair<double, std::vector<int>> best_partition(const ept::ProofDag& dag) {
    const std::size_t n = dag.size();
    std::vector<int> rgs(n, 0), best;
    double best_q = -1e300;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_label) {
        if (i == n) {
            const double q = modularity(dag, rgs);
            if (q > best_q + 1e-12) {
                best_q = q;
                best = rgs;
            }
            return;
        }
        for (int l = 0; l <= max_label + 1; ++l) {
            rgs[i] = l;
            rec(i + 1, std::max(max_label, l));
        }
    };
    rgs[0] = 0;
    rec(1, 0);
    return {best_q, best};
}

/// Discrete power law on {d_min, ...}: P(d) ~ d^-alpha, sampled by inverse CDF
/// over a directly summed table (mass beyond `cap` is negligible for alpha > 2).
class PowerLawSampler {
public:
    PowerLawSampler(double alpha, std::size_t d_min, std::size_t cap = 2000000) : d_min_(d_min) {
        cdf_.reserve(cap - d_min + 1);
        double acc = 0.0;
        for (std::size_t d = d_min; d <= cap; ++d) {
            acc += std::pow(static_cast<double>(d), -alpha);
            cdf_.push_back(acc);
        }
        for (auto& c : cdf_) c /= acc;
    }
    template <typename Rng>
    std::size_t operator()(Rng& rng) const {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return d_min_ + static_cast<std::size_t>(it - cdf_.begin());
    }

private:
    std::size_t d_min_;
    std::vector<double> cdf_;
};

}  // namespace oracle
