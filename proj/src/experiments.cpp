#include "ept/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ept/error.hpp"

namespace ept {

namespace {

std::vector<double> sorted_axis(std::span<const double> values, const char* name) {
    std::vector<double> axis(values.begin(), values.end());
    std::sort(axis.begin(), axis.end());
    if (std::adjacent_find(axis.begin(), axis.end()) != axis.end())
        throw DomainError(std::string(name) + " grid has repeated values");
    return axis;
}

double variance_of(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

// Uniform k-subset of pool by partial Fisher-Yates; pool is permuted in place.
std::span<const NodeIndex> draw_subset(std::vector<NodeIndex>& pool, std::size_t k, Rng& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    return {pool.data(), k};
}

class FirewallTally {
public:
    FirewallTally(const ProofDag& dag, const Partition& partition, const FirewallOptions& options)
        : dag_(dag), options_(options), rng_(derive_seed(options.seed, 0x6669726577616c6cULL)) {
        if (options.n_flip == 0) throw ConfigurationError("n_flip must be >= 1");
        if (partition.assignment.size() != dag.size())
            throw ConfigurationError("partition does not match the graph");
        auto modules = partition.modules();
        for (std::size_t m = 0; m < modules.size(); ++m) {
            for (NodeIndex v : modules[m]) assigned_.push_back(v);
            if (modules[m].size() >= options.n_flip) {
                eligible_.push_back(std::move(modules[m]));
                report_.modules.push_back(ModulePenalty{static_cast<int>(m), eligible_.back().size(), 0.0, 0});
            }
        }
        if (eligible_.empty())
            throw ConfigurationError("no module has at least " + std::to_string(options.n_flip) + " nodes");
        std::sort(assigned_.begin(), assigned_.end());
        module_sums_.assign(eligible_.size(), 0.0);
        report_.n_flip = options.n_flip;
    }

    void add(const BeliefState& state) {
        if (state.spins.size() != dag_.size()) throw ConfigurationError("state does not match the graph");
        const std::size_t k = options_.n_flip;
        double within = 0.0;
        std::size_t within_count = 0;
        for (std::size_t m = 0; m < eligible_.size(); ++m)
            for (std::size_t d = 0; d < options_.within_draws; ++d) {
                const double p = flip_penalty(dag_, state, options_.beta, draw_subset(eligible_[m], k, rng_));
                module_sums_[m] += p;
                within += p;
                ++within_count;
            }
        double baseline = 0.0;
        for (std::size_t d = 0; d < options_.baseline_draws; ++d) {
            const double p = flip_penalty(dag_, state, options_.beta, draw_subset(assigned_, k, rng_));
            baseline += p;
            baseline_sq_ += p * p;
        }
        within_state_.push_back(within_count ? within / static_cast<double>(within_count) : 0.0);
        baseline_state_.push_back(options_.baseline_draws ? baseline / static_cast<double>(options_.baseline_draws)
                                                          : 0.0);
    }

    FirewallReport finish() {
        const std::size_t n = within_state_.size();
        if (n == 0) throw ConfigurationError("firewall needs at least one sampled state");
        const double k = static_cast<double>(options_.n_flip);
        std::vector<double> deltas(n);
        for (std::size_t i = 0; i < n; ++i) deltas[i] = (baseline_state_[i] - within_state_[i]) / k;
        const double dn = static_cast<double>(n);
        report_.n_states = n;
        report_.within_mean = std::accumulate(within_state_.begin(), within_state_.end(), 0.0) / dn;
        report_.baseline_mean = std::accumulate(baseline_state_.begin(), baseline_state_.end(), 0.0) / dn;
        report_.baseline_stderr = std::sqrt(variance_of(baseline_state_) / dn);
        const double draws = dn * static_cast<double>(options_.baseline_draws);
        if (draws > 1) {
            const double mean = report_.baseline_mean;
            report_.baseline_sd = std::sqrt(std::max(0.0, (baseline_sq_ - draws * mean * mean) / (draws - 1)));
        }
        report_.delta_L1 = (report_.baseline_mean - report_.within_mean) / k;
        report_.delta_stderr = std::sqrt(variance_of(deltas) / dn);
        for (std::size_t m = 0; m < eligible_.size(); ++m) {
            auto& mp = report_.modules[m];
            mp.draws = n * options_.within_draws;
            mp.mean_penalty = mp.draws ? module_sums_[m] / static_cast<double>(mp.draws) : 0.0;
        }
        return report_;
    }

private:
    const ProofDag& dag_;
    FirewallOptions options_;
    Rng rng_;
    std::vector<std::vector<NodeIndex>> eligible_;
    std::vector<NodeIndex> assigned_;
    std::vector<double> module_sums_;
    std::vector<double> within_state_;
    std::vector<double> baseline_state_;
    double baseline_sq_ = 0.0;
    FirewallReport report_;
};

}  // namespace

SweepResult ept_sweep(const ProofDag& dag, std::span<const double> eps_grid, double p_prior,
                      const Schedule& schedule, PriorMode mode, unsigned threads) {
    SweepResult out;
    for (double eps : sorted_axis(eps_grid, "epsilon")) {
        const auto params = CouplingParams::from_error_rates(eps, eps, p_prior, mode);
        auto summary = run_chain(dag, params, schedule, threads);
        out.rows.push_back(SweepRow{eps, params.beta_dep, summary.mean_all,
                                    summary.theorem.value_or(std::nan("")), summary.mean_axioms,
                                    std::move(summary.diagnostics)});
    }
    return out;
}

std::vector<PriorRow> prior_response(const ProofDag& dag, double eps, std::span<const double> prior_grid,
                                     const Schedule& schedule, PriorMode mode, unsigned threads) {
    std::vector<PriorRow> rows;
    for (double prior : sorted_axis(prior_grid, "prior")) {
        const auto params = CouplingParams::from_error_rates(eps, eps, prior, mode);
        auto summary = run_chain(dag, params, schedule, threads);
        rows.push_back(PriorRow{prior, summary.theorem.value_or(std::nan("")),
                                variance_of(summary.diagnostics.replica_theorem), summary.mean_all,
                                std::move(summary.diagnostics)});
    }
    return rows;
}

GridResult abductive_grid(const ProofDag& dag, std::span<const double> eps_dep_grid,
                          std::span<const double> eps_imp_grid, double p_prior, const Schedule& schedule,
                          PriorMode mode, unsigned threads) {
    GridResult g;
    g.eps_dep = sorted_axis(eps_dep_grid, "eps_dep");
    g.eps_imp = sorted_axis(eps_imp_grid, "eps_imp");
    const std::size_t cells = g.eps_dep.size() * g.eps_imp.size();
    g.theorem.assign(cells, 0.0);
    g.theorem_stderr.assign(cells, 0.0);
    g.mean_all.assign(cells, 0.0);
    for (std::size_t i = 0; i < g.eps_dep.size(); ++i)
        for (std::size_t j = 0; j < g.eps_imp.size(); ++j) {
            const auto params = CouplingParams::from_error_rates(g.eps_dep[i], g.eps_imp[j], p_prior, mode);
            const auto summary = run_chain(dag, params, schedule, threads);
            const std::size_t c = g.at(i, j);
            g.theorem[c] = summary.theorem.value_or(std::nan(""));
            g.theorem_stderr[c] = summary.diagnostics.theorem_stderr;
            g.mean_all[c] = summary.mean_all;
        }
    return g;
}

FirewallReport firewall_from_states(const ProofDag& dag, const Partition& partition,
                                    std::span<const BeliefState> states, const FirewallOptions& options) {
    FirewallTally tally(dag, partition, options);
    for (const auto& s : states) tally.add(s);
    return tally.finish();
}

FirewallReport firewall_delta(const ProofDag& dag, const Partition& partition, const FirewallOptions& options,
                              const Schedule& schedule) {
    FirewallTally tally(dag, partition, options);
    CouplingParams params{options.beta, options.beta, 0.5, PriorMode::Field};
    sample_states(dag, params, schedule, [&](std::size_t, const BeliefState& s) { tally.add(s); });
    return tally.finish();
}

}  // namespace ept
