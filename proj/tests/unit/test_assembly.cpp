#include <doctest.h>

#include "ept/assembly.hpp"
#include "ept/error.hpp"
#include "ept/graph_io.hpp"
#include "ept/netstats.hpp"

using namespace ept;

TEST_CASE("a single node has no edges") {
    const auto dag = generate({1, 10.0, 0.1, 1});
    CHECK(dag.size() == 1);
    CHECK(dag.edge_count() == 0);
    CHECK(dag.id(0) == "v0");
}

TEST_CASE("generation is deterministic per seed") {
    const AssemblyParams p{2000, 6.0, 0.15, 42};
    CHECK(to_json(generate(p)) == to_json(generate(p)));
    AssemblyParams q = p;
    q.seed = 43;
    CHECK(to_json(generate(p)) != to_json(generate(q)));
}

TEST_CASE("edges only point from earlier to later nodes") {
    for (double copy : {0.0, 0.3, 1.0})
        for (double mean : {0.0, 1.0, 4.0}) {
            const auto dag = generate({500, mean, copy, 7});
            for (const auto& e : dag.edges()) CHECK(e.dependency < e.dependent);
            CHECK(dag.topological_order().size() == dag.size());
        }
}

TEST_CASE("roles: the first node is the only axiom and the last is the theorem") {
    const auto dag = generate({300, 4.0, 0.2, 3});
    const auto roles = classify_roles(dag);
    REQUIRE(roles.axioms.size() == 1);
    CHECK(roles.axioms.front() == 0);
    CHECK(roles.theorem == 299);
    CHECK(dag.theorem() == NodeIndex{299});
}

TEST_CASE("without copying, in-degree follows the dependency-count law") {
    // Count = min(1 + Geometric0(mean - 1), k); the cap only bites for small k.
    const auto dag = generate({20000, 4.0, 0.0, 8});
    const auto t = degrees(dag);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t v = 100; v < dag.size(); ++v) {
        sum += static_cast<double>(t.in_degree[v]);
        ++n;
    }
    CHECK(sum / static_cast<double>(n) == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("mean below one means exactly one dependency") {
    const auto dag = generate({200, 0.5, 0.0, 2});
    const auto t = degrees(dag);
    for (std::size_t v = 1; v < dag.size(); ++v) CHECK(t.in_degree[v] == 1);
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(generate({0, 1.0, 0.1, 1}), DomainError);
    CHECK_THROWS_AS(generate({10, -1.0, 0.1, 1}), DomainError);
    CHECK_THROWS_AS(generate({10, 1.0, 1.5, 1}), DomainError);
}
