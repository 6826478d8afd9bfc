#include "ept/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ept/error.hpp"
#include "ept/parallel.hpp"

namespace ept {

double epsilon_from_beta(double beta) {
    if (!(beta >= 0.0)) throw DomainError("beta must be >= 0");
    // 1 / (1 + e^{2b}) written to stay accurate for large beta.
    const double t = std::exp(-2.0 * beta);
    return t / (1.0 + t);
}

double beta_from_epsilon(double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw DomainError("error rate must lie in (0, 1/2]");
    return 0.5 * (std::log1p(-eps) - std::log(eps));
}

CouplingParams CouplingParams::from_error_rates(double eps_dep, double eps_imp, double p_prior, PriorMode mode) {
    CouplingParams p{beta_from_epsilon(eps_dep), beta_from_epsilon(eps_imp), p_prior, mode};
    p.validate();
    return p;
}

double CouplingParams::field() const {
    if (prior_mode == PriorMode::InitOnly) return 0.0;
    return 0.5 * (std::log(p_prior) - std::log1p(-p_prior));
}

void CouplingParams::validate() const {
    if (!(beta_dep >= 0.0) || !std::isfinite(beta_dep)) throw DomainError("beta_dep must be finite and >= 0");
    if (!(beta_imp >= 0.0) || !std::isfinite(beta_imp)) throw DomainError("beta_imp must be finite and >= 0");
    if (!(p_prior > 0.0 && p_prior < 1.0)) throw DomainError("p_prior must lie in (0, 1)");
}

BeliefState BeliefState::uniform(std::size_t n, Spin value) {
    return BeliefState{std::vector<Spin>(n, value)};
}

BeliefState BeliefState::random(std::size_t n, double p, Rng& rng) {
    BeliefState s;
    s.spins.resize(n);
    for (auto& x : s.spins) x = bernoulli(rng, p) ? Spin{1} : Spin{-1};
    return s;
}

namespace {

inline double field_at(const ProofDag& dag, const std::vector<Spin>& s, double h, double beta_dep, double beta_imp,
                       NodeIndex node) {
    int up = 0, down = 0;
    for (NodeIndex j : dag.dependencies(node)) up += s[j];
    for (NodeIndex k : dag.dependents(node)) down += s[k];
    return h + beta_dep * up + beta_imp * down;
}

// Returns true when the flip was accepted.
inline bool metropolis(const ProofDag& dag, std::vector<Spin>& s, double h, double beta_dep, double beta_imp,
                       NodeIndex node, Rng& rng) {
    const double delta = 2.0 * s[node] * field_at(dag, s, h, beta_dep, beta_imp, node);
    if (delta <= 0.0 || uniform01(rng) < std::exp(-delta)) {
        s[node] = static_cast<Spin>(-s[node]);
        return true;
    }
    return false;
}

struct ReplicaTally {
    std::vector<std::uint32_t> first;   // true counts, first half of samples
    std::vector<std::uint32_t> second;  // true counts, second half
    std::uint64_t accepted = 0;
    std::uint64_t attempted = 0;
};

template <typename OnSample>
void drive(const ProofDag& dag, const CouplingParams& params, const Schedule& schedule, std::size_t replica,
           std::uint64_t& accepted, std::uint64_t& attempted, OnSample&& on_sample) {
    const std::size_t n = dag.size();
    Rng rng(derive_seed(schedule.seed, replica));
    BeliefState state = BeliefState::random(n, params.p_prior, rng);
    if (n == 0) {
        for (std::size_t k = 0; k < schedule.n_samples; ++k) on_sample(k, state);
        return;
    }
    const double h = params.field();
    auto run_sweeps = [&](std::size_t count) {
        for (std::size_t s = 0; s < count; ++s)
            for (std::size_t step = 0; step < n; ++step) {
                const auto node = static_cast<NodeIndex>(uniform_index(rng, n));
                accepted += metropolis(dag, state.spins, h, params.beta_dep, params.beta_imp, node, rng);
                ++attempted;
            }
    };
    run_sweeps(schedule.burn_in_sweeps);
    for (std::size_t k = 0; k < schedule.n_samples; ++k) {
        run_sweeps(schedule.sample_stride_sweeps);
        on_sample(k, state);
    }
}

std::optional<NodeIndex> theorem_of(const ProofDag& dag) {
    if (auto t = dag.theorem()) return t;
    auto sinks = dag.sinks();
    if (sinks.size() == 1) return sinks.front();
    return std::nullopt;
}

double stderr_of(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

}  // namespace

double local_field(const ProofDag& dag, const BeliefState& state, const CouplingParams& params, NodeIndex node) {
    return field_at(dag, state.spins, params.field(), params.beta_dep, params.beta_imp, node);
}

NodeIndex heuristic_step(const ProofDag& dag, BeliefState& state, const CouplingParams& params, Rng& rng) {
    if (dag.empty()) return 0;
    const auto node = static_cast<NodeIndex>(uniform_index(rng, dag.size()));
    metropolis(dag, state.spins, params.field(), params.beta_dep, params.beta_imp, node, rng);
    return node;
}

void sweep(const ProofDag& dag, BeliefState& state, const CouplingParams& params, Rng& rng) {
    for (std::size_t i = 0; i < dag.size(); ++i) heuristic_step(dag, state, params, rng);
}

void Schedule::validate() const {
    if (n_samples < 1 || sample_stride_sweeps < 1 || n_replicas < 1)
        throw DomainError("schedule: samples, stride and replicas must be >= 1");
}

BeliefSummary run_chain(const ProofDag& dag, const CouplingParams& params, const Schedule& schedule,
                        unsigned threads) {
    params.validate();
    schedule.validate();
    const std::size_t n = dag.size();
    const std::size_t half = schedule.n_samples / 2;

    std::vector<ReplicaTally> tallies(schedule.n_replicas);
    parallel_for(schedule.n_replicas, threads, [&](std::size_t r) {
        ReplicaTally& t = tallies[r];
        t.first.assign(n, 0);
        t.second.assign(n, 0);
        drive(dag, params, schedule, r, t.accepted, t.attempted, [&](std::size_t k, const BeliefState& s) {
            auto& into = k < half ? t.first : t.second;
            for (std::size_t i = 0; i < n; ++i) into[i] += s.spins[i] > 0;
        });
    });

    BeliefSummary out;
    out.belief.assign(n, 0.0);
    const auto theorem = theorem_of(dag);
    const double per_replica = static_cast<double>(schedule.n_samples);
    const double total = per_replica * static_cast<double>(schedule.n_replicas);
    std::vector<double> first(n, 0.0), second(n, 0.0);
    std::uint64_t accepted = 0, attempted = 0;
    for (const auto& t : tallies) {
        double replica_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = static_cast<double>(t.first[i]) + static_cast<double>(t.second[i]);
            out.belief[i] += c;
            replica_sum += c / per_replica;
            first[i] += t.first[i];
            second[i] += t.second[i];
        }
        out.diagnostics.replica_mean.push_back(n ? replica_sum / static_cast<double>(n) : 0.0);
        if (theorem)
            out.diagnostics.replica_theorem.push_back(
                (static_cast<double>(t.first[*theorem]) + static_cast<double>(t.second[*theorem])) / per_replica);
        accepted += t.accepted;
        attempted += t.attempted;
    }
    for (auto& b : out.belief) b /= total;

    if (n > 0) out.mean_all = std::accumulate(out.belief.begin(), out.belief.end(), 0.0) / static_cast<double>(n);
    if (theorem) out.theorem = out.belief[*theorem];
    double axiom_sum = 0.0;
    std::size_t axioms = 0;
    for (NodeIndex v = 0; v < n; ++v)
        if (dag.dependencies(v).empty() && theorem != v) {
            axiom_sum += out.belief[v];
            ++axioms;
        }
    out.mean_axioms = axioms ? axiom_sum / static_cast<double>(axioms) : std::numeric_limits<double>::quiet_NaN();

    auto& d = out.diagnostics;
    if (half > 0 && schedule.n_samples - half > 0) {
        const double n1 = static_cast<double>(half * schedule.n_replicas);
        const double n2 = static_cast<double>((schedule.n_samples - half) * schedule.n_replicas);
        for (std::size_t i = 0; i < n; ++i) {
            const double gap = std::fabs(first[i] / n1 - second[i] / n2);
            d.split_half_max = std::max(d.split_half_max, gap);
            if (theorem == i) d.split_half_theorem = gap;
        }
    }
    d.theorem_stderr = stderr_of(d.replica_theorem);
    d.mean_stderr = stderr_of(d.replica_mean);
    d.acceptance_rate = attempted ? static_cast<double>(accepted) / static_cast<double>(attempted) : 0.0;
    return out;
}

void sample_states(const ProofDag& dag, const CouplingParams& params, const Schedule& schedule,
                   const std::function<void(std::size_t, const BeliefState&)>& visit) {
    params.validate();
    schedule.validate();
    for (std::size_t r = 0; r < schedule.n_replicas; ++r) {
        std::uint64_t accepted = 0, attempted = 0;
        drive(dag, params, schedule, r, accepted, attempted,
              [&](std::size_t, const BeliefState& s) { visit(r, s); });
    }
}

double energy(const ProofDag& dag, const BeliefState& state, double beta, double field) {
    double bonds = 0.0, spins = 0.0;
    for (NodeIndex v = 0; v < dag.size(); ++v) {
        spins += state.spins[v];
        for (NodeIndex d : dag.dependencies(v)) bonds += state.spins[v] * state.spins[d];
    }
    return -beta * bonds - field * spins;
}

double flip_penalty(const ProofDag& dag, const BeliefState& state, double beta, std::span<const NodeIndex> nodes,
                    double field) {
    std::vector<NodeIndex> set(nodes.begin(), nodes.end());
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    auto in_set = [&](NodeIndex v) { return std::binary_search(set.begin(), set.end(), v); };
    double boundary = 0.0, spins = 0.0;
    for (NodeIndex v : set) {
        spins += state.spins[v];
        for (NodeIndex d : dag.dependencies(v))
            if (!in_set(d)) boundary += state.spins[v] * state.spins[d];
        for (NodeIndex u : dag.dependents(v))
            if (!in_set(u)) boundary += state.spins[v] * state.spins[u];
    }
    // A cut bond -beta s_i s_j changes sign; a flipped field term -h s_i does too.
    return 2.0 * beta * boundary + 2.0 * field * spins;
}

}  // namespace ept
