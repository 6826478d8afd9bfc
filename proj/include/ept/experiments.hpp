#pragma once

// Experiment drivers: error-rate sweeps, prior response, deduction/abduction
// grids and the modular firewall measurement.

#include <cstddef>
#include <span>
#include <vector>

#include "ept/belief.hpp"
#include "ept/communities.hpp"
#include "ept/proof_dag.hpp"

namespace ept {

struct SweepRow {
    double epsilon = 0.0;
    double beta = 0.0;
    double mean_all = 0.0;
    double theorem = 0.0;
    double axioms = 0.0;
    ChainDiagnostics diagnostics;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ascending epsilon
};

/// One run_chain per error rate with beta_dep == beta_imp. Every point uses
/// the same schedule seed, so a row equals a direct run_chain at that beta.
SweepResult ept_sweep(const ProofDag& dag, std::span<const double> eps_grid, double p_prior,
                      const Schedule& schedule, PriorMode mode = PriorMode::Field, unsigned threads = 0);

struct PriorRow {
    double prior = 0.0;
    double theorem = 0.0;
    /// Variance of the per-replica theorem belief.
    double theorem_variance = 0.0;
    double mean_all = 0.0;
    ChainDiagnostics diagnostics;
};

std::vector<PriorRow> prior_response(const ProofDag& dag, double eps, std::span<const double> prior_grid,
                                     const Schedule& schedule, PriorMode mode = PriorMode::Field,
                                     unsigned threads = 0);

struct GridResult {
    std::vector<double> eps_dep;  // ascending
    std::vector<double> eps_imp;  // ascending
    /// Row-major [dep][imp].
    std::vector<double> theorem;
    std::vector<double> theorem_stderr;
    std::vector<double> mean_all;

    std::size_t at(std::size_t dep, std::size_t imp) const { return dep * eps_imp.size() + imp; }
};

GridResult abductive_grid(const ProofDag& dag, std::span<const double> eps_dep_grid,
                          std::span<const double> eps_imp_grid, double p_prior, const Schedule& schedule,
                          PriorMode mode = PriorMode::Field, unsigned threads = 0);

struct FirewallOptions {
    double beta = 1.0;
    std::size_t n_flip = 10;
    /// Random subsets drawn inside each eligible module per sampled state.
    std::size_t within_draws = 20;
    /// Random subsets drawn from all assigned nodes per sampled state.
    std::size_t baseline_draws = 200;
    std::uint64_t seed = 1;
};

struct ModulePenalty {
    int module = 0;
    std::size_t size = 0;
    double mean_penalty = 0.0;
    std::size_t draws = 0;
};

struct FirewallReport {
    /// (baseline_mean - within_mean) / n_flip; positive when flips inside
    /// one module cost less than flips of randomly placed nodes.
    double delta_L1 = 0.0;
    /// Standard error of delta_L1 across sampled states.
    double delta_stderr = 0.0;
    std::size_t n_flip = 0;
    std::vector<ModulePenalty> modules;  // eligible modules only
    double within_mean = 0.0;
    double baseline_mean = 0.0;
    double baseline_stderr = 0.0;
    /// Spread of single random-placement penalties, pooled over states.
    double baseline_sd = 0.0;
    std::size_t n_states = 0;
};

/// Firewall statistics over given states (for example frozen configurations).
/// Throws ConfigurationError when no module has at least n_flip nodes.
FirewallReport firewall_from_states(const ProofDag& dag, const Partition& partition,
                                    std::span<const BeliefState> states, const FirewallOptions& options);

/// Samples equilibrium states at prior 0.5 with beta_dep = beta_imp =
/// options.beta and applies firewall_from_states.
FirewallReport firewall_delta(const ProofDag& dag, const Partition& partition, const FirewallOptions& options,
                              const Schedule& schedule);

}  // namespace ept
