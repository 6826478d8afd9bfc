#include <doctest.h>

#include <cmath>
#include <random>

#include "ept/belief.hpp"
#include "ept/error.hpp"
#include "ept/proof_dag.hpp"
#include "oracles.hpp"

using namespace ept;

namespace {

Schedule quick(std::size_t samples = 500, std::size_t replicas = 2, std::uint64_t seed = 1) {
    Schedule s;
    s.burn_in_sweeps = 50;
    s.n_samples = samples;
    s.sample_stride_sweeps = 1;
    s.n_replicas = replicas;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("error rate and coupling conversions") {
    CHECK(epsilon_from_beta(1.0) == doctest::Approx(0.119203).epsilon(1e-5));
    CHECK(epsilon_from_beta(0.0) == doctest::Approx(0.5));
    CHECK(beta_from_epsilon(0.01) == doctest::Approx(2.297560).epsilon(1e-6));
    CHECK(beta_from_epsilon(0.5) == doctest::Approx(0.0));
    for (double eps : {0.001, 0.05, 0.2, 0.4999})
        CHECK(epsilon_from_beta(beta_from_epsilon(eps)) == doctest::Approx(eps).epsilon(1e-12));
    CHECK_THROWS_AS(beta_from_epsilon(0.0), DomainError);
    CHECK_THROWS_AS(beta_from_epsilon(0.6), DomainError);
    CHECK_THROWS_AS(epsilon_from_beta(-1.0), DomainError);
}

TEST_CASE("prior field") {
    const auto field = CouplingParams::from_error_rates(0.1, 0.1, 0.75).field();
    CHECK(field == doctest::Approx(0.5 * std::log(3.0)));
    CHECK(field == doctest::Approx(0.549306).epsilon(1e-5));
    CHECK(CouplingParams::from_error_rates(0.1, 0.1, 0.75, PriorMode::InitOnly).field() == 0.0);
    CHECK(CouplingParams::from_error_rates(0.1, 0.1, 0.5).field() == doctest::Approx(0.0));
    CouplingParams bad;
    bad.p_prior = 1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("local field sums deductive and abductive terms") {
    // C depends on A and B; D depends on C.
    const auto dag = from_edge_list("C: A B\nD: C\n");
    BeliefState s;
    s.spins.assign(dag.size(), 1);
    s.spins[*dag.find("D")] = -1;
    CouplingParams p;
    p.beta_dep = 1.0;
    p.beta_imp = 1.0;
    p.p_prior = 0.5;
    CHECK(local_field(dag, s, p, *dag.find("C")) == doctest::Approx(2.0 - 1.0));

    p.beta_imp = 0.25;
    p.p_prior = 0.75;
    CHECK(local_field(dag, s, p, *dag.find("C")) == doctest::Approx(0.549306 + 2.0 - 0.25).epsilon(1e-5));
    CHECK(local_field(dag, s, p, *dag.find("A")) == doctest::Approx(0.549306 + 0.25).epsilon(1e-5));
}

TEST_CASE("energy and flip penalty") {
    const auto dag = from_edge_list("B: A\n");
    auto s = BeliefState::uniform(2, 1);
    CHECK(energy(dag, s, 1.0) == doctest::Approx(-1.0));
    const std::vector<NodeIndex> a{*dag.find("A")};
    CHECK(flip_penalty(dag, s, 1.0, a) == doctest::Approx(2.0));
    const std::vector<NodeIndex> both{0, 1};
    CHECK(flip_penalty(dag, s, 1.0, both) == doctest::Approx(0.0));
    CHECK(flip_penalty(dag, s, 1.0, both, 0.3) == doctest::Approx(2 * 2 * 0.3));
}

TEST_CASE("flip penalty equals the change in full energy") {
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto dag = oracle::random_dag(40, 0.1, seed);
        Rng r(seed);
        const auto s = BeliefState::random(dag.size(), 0.5, r);
        std::vector<NodeIndex> all(dag.size());
        for (NodeIndex v = 0; v < dag.size(); ++v) all[v] = v;
        std::shuffle(all.begin(), all.end(), rng);
        const std::vector<NodeIndex> subset(all.begin(), all.begin() + static_cast<long>(1 + seed % 15));
        const double beta = 0.3 + 0.1 * static_cast<double>(seed), h = 0.1 * static_cast<double>(seed % 5) - 0.2;
        auto flipped = s;
        for (auto v : subset) flipped.spins[v] = static_cast<Spin>(-flipped.spins[v]);
        const double direct = energy(dag, flipped, beta, h) - energy(dag, s, beta, h);
        CHECK(flip_penalty(dag, s, beta, subset, h) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("symmetric couplings sample the Gibbs measure") {
    for (std::uint64_t seed : {3, 4}) {
        const auto dag = oracle::random_dag(10, 0.25, seed);
        const auto params = CouplingParams{0.4, 0.4, 0.6, PriorMode::Field};
        const auto exact = oracle::gibbs_marginals(dag, 0.4, params.field());
        const auto got = run_chain(dag, params, quick(4000, 4, seed), 1);
        for (NodeIndex v = 0; v < dag.size(); ++v) CHECK(std::fabs(got.belief[v] - exact[v]) < 0.02);
    }
}

TEST_CASE("an isolated node follows its prior") {
    DagBuilder b;
    b.add_node("x");
    b.add_node("y");
    b.add_edge(0, 1);
    b.add_node("alone");
    const auto dag = std::move(b).build();
    const auto got = run_chain(dag, CouplingParams{1.0, 1.0, 0.8, PriorMode::Field}, quick(8000, 4), 1);
    CHECK(std::fabs(got.belief[2] - 0.8) < 0.02);
}

TEST_CASE("zero coupling leaves nodes independent") {
    const auto dag = oracle::random_dag(30, 0.2, 8);
    const auto field = run_chain(dag, CouplingParams{0.0, 0.0, 0.7, PriorMode::Field}, quick(3000, 2), 1);
    CHECK(std::fabs(field.mean_all - 0.7) < 0.02);
    const auto init = run_chain(dag, CouplingParams{0.0, 0.0, 0.7, PriorMode::InitOnly}, quick(3000, 2), 1);
    CHECK(std::fabs(init.mean_all - 0.5) < 0.02);
}

TEST_CASE("results do not depend on the thread count") {
    const auto dag = oracle::random_dag(60, 0.08, 5);
    const CouplingParams p{1.2, 0.7, 0.65, PriorMode::Field};
    const auto one = run_chain(dag, p, quick(200, 5), 1);
    const auto four = run_chain(dag, p, quick(200, 5), 4);
    CHECK(one.belief == four.belief);
    CHECK(one.diagnostics.replica_theorem == four.diagnostics.replica_theorem);
    const auto other_seed = run_chain(dag, p, quick(200, 5, 2), 1);
    CHECK(one.belief != other_seed.belief);
}

TEST_CASE("summary fields") {
    const auto dag = from_edge_list("# theorem: C\nB: A\nC: B\n");
    const auto got = run_chain(dag, CouplingParams{1.0, 1.0, 0.6, PriorMode::Field}, quick(300, 3), 1);
    REQUIRE(got.theorem);
    CHECK(*got.theorem == got.belief[*dag.find("C")]);
    CHECK(got.mean_axioms == got.belief[*dag.find("A")]);
    CHECK(got.diagnostics.replica_theorem.size() == 3);
    CHECK(got.diagnostics.acceptance_rate > 0.0);
    CHECK(got.diagnostics.acceptance_rate <= 1.0);
    double sum = 0.0;
    for (double b : got.belief) {
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        sum += b;
    }
    CHECK(got.mean_all == doctest::Approx(sum / 3));

    const auto two_sinks = from_edge_list("B: A\nC: A\n");
    CHECK_FALSE(run_chain(two_sinks, CouplingParams{1.0, 1.0, 0.6}, quick(50, 1), 1).theorem);
}

TEST_CASE("sample_states visits every recorded state") {
    const auto dag = oracle::random_dag(12, 0.2, 1);
    std::size_t count = 0;
    std::vector<std::size_t> per(3, 0);
    sample_states(dag, CouplingParams{0.5, 0.5, 0.5}, quick(40, 3), [&](std::size_t r, const BeliefState& s) {
        ++count;
        ++per.at(r);
        CHECK(s.spins.size() == dag.size());
    });
    CHECK(count == 120);
    CHECK(per == std::vector<std::size_t>{40, 40, 40});
}

TEST_CASE("schedule validation") {
    Schedule s;
    s.n_replicas = 0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = Schedule{};
    s.n_samples = 0;
    CHECK_THROWS_AS(s.validate(), DomainError);
}
