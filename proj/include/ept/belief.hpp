#pragma once

// Asymmetric Ising belief dynamics on a proof DAG.
//
// Spins are +1 (believed true) or -1 (believed false). A node's local field
// combines a prior field h, its dependencies weighted by beta_dep (deduction)
// and its dependents weighted by beta_imp (abduction):
//
//   f(i) = h + beta_dep * sum_{j in deps(i)} s_j + beta_imp * sum_{k in uses(i)} s_k
//
// A single-node Metropolis step flips s_i with probability min(1, exp(-2 s_i f(i))).
// When beta_dep == beta_imp this samples P(s) ~ exp(-E(s)) with
// E = -beta * sum_edges s_i s_j - h * sum_i s_i.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ept/proof_dag.hpp"
#include "ept/rng.hpp"

namespace ept {

/// Per-link error rate of a coupling: eps = 1 / (1 + exp(2 beta)).
double epsilon_from_beta(double beta);
/// Inverse of epsilon_from_beta on (0, 1/2]; throws DomainError outside it.
double beta_from_epsilon(double eps);

enum class PriorMode {
    Field,    ///< persistent field h = atanh(2p - 1) plus biased initialisation
    InitOnly  ///< biased initialisation only, h = 0
};

struct CouplingParams {
    double beta_dep = 0.0;
    double beta_imp = 0.0;
    double p_prior = 0.5;
    PriorMode prior_mode = PriorMode::Field;

    static CouplingParams from_error_rates(double eps_dep, double eps_imp, double p_prior,
                                           PriorMode mode = PriorMode::Field);

    /// h = ln(p / (1 - p)) / 2 in Field mode, 0 otherwise.
    double field() const;
    double eps_dep() const { return epsilon_from_beta(beta_dep); }
    double eps_imp() const { return epsilon_from_beta(beta_imp); }
    void validate() const;
};

using Spin = std::int8_t;

struct BeliefState {
    std::vector<Spin> spins;

    static BeliefState uniform(std::size_t n, Spin value);
    /// Each node true with probability p.
    static BeliefState random(std::size_t n, double p, Rng& rng);
};

double local_field(const ProofDag& dag, const BeliefState& state, const CouplingParams& params, NodeIndex node);

/// One Metropolis update of a uniformly chosen node, in place. Returns the node visited.
NodeIndex heuristic_step(const ProofDag& dag, BeliefState& state, const CouplingParams& params, Rng& rng);

/// N consecutive heuristic steps.
void sweep(const ProofDag& dag, BeliefState& state, const CouplingParams& params, Rng& rng);

struct Schedule {
    std::size_t burn_in_sweeps = 200;
    std::size_t n_samples = 1000;
    std::size_t sample_stride_sweeps = 2;
    std::size_t n_replicas = 8;
    std::uint64_t seed = 1;

    void validate() const;
};

struct ChainDiagnostics {
    /// max_i |belief_i(first half of samples) - belief_i(second half)|
    double split_half_max = 0.0;
    double split_half_theorem = 0.0;
    /// Theorem belief per replica, in replica order.
    std::vector<double> replica_theorem;
    std::vector<double> replica_mean;
    /// Standard error of the replica average (0 with one replica).
    double theorem_stderr = 0.0;
    double mean_stderr = 0.0;
    double acceptance_rate = 0.0;
};

struct BeliefSummary {
    /// Fraction of samples (pooled over replicas) in which each node was true.
    std::vector<double> belief;
    double mean_all = 0.0;
    std::optional<double> theorem;
    /// Mean over in-degree-0 nodes other than the theorem; NaN when there are none.
    double mean_axioms = 0.0;
    ChainDiagnostics diagnostics;
};

/// Runs `schedule.n_replicas` independent chains (replica r seeded from
/// derive_seed(seed, r)), each initialised with nodes true at p_prior. Results
/// do not depend on `threads` (0 = default parallelism).
BeliefSummary run_chain(const ProofDag& dag, const CouplingParams& params, const Schedule& schedule,
                        unsigned threads = 0);

/// Same dynamics, handing every recorded state to `visit` instead of
/// accumulating beliefs. Replicas run sequentially in order.
void sample_states(const ProofDag& dag, const CouplingParams& params, const Schedule& schedule,
                   const std::function<void(std::size_t replica, const BeliefState&)>& visit);

/// E = -beta * sum_{edges} s_i s_j - h * sum_i s_i.
double energy(const ProofDag& dag, const BeliefState& state, double beta, double field = 0.0);

/// energy(state with `nodes` negated) - energy(state), from the boundary edges.
double flip_penalty(const ProofDag& dag, const BeliefState& state, double beta, std::span<const NodeIndex> nodes,
                    double field = 0.0);

}  // namespace ept
