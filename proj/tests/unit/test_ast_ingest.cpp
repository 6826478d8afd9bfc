#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "ept/ast_ingest.hpp"
#include "ept/error.hpp"
#include "ept/proof_dag.hpp"

using namespace ept;

namespace {

const char* kEv4Dump = R"((Definition Top.ev_4
    (App Top.add_even_even
        (App S (App S O))
        (App S (App S O))
        Top.ev_2
        Top.ev_2))

(Definition Top.add_even_even
    (Lambda n_2 nat
    (Lambda m_22 nat
    (Lambda Hm_222 (App ev m_22)
    (Lambda Hn_2222 (App ev n_2)
        (App Top.ev_ind
            ...
            ))))))

(Definition Top.ev_2 (App ev_SS O ev_0))
)";

TermTree leaf(std::string s) { return TermTree{std::move(s), {}}; }
TermTree node(std::string s, std::vector<TermTree> c) { return TermTree{std::move(s), std::move(c)}; }

void collect_leaves(const TermTree& t, std::vector<std::string>& out) {
    if (t.is_leaf()) out.push_back(t.label);
    for (const auto& c : t.children) collect_leaves(c, out);
}

// Random term over a tiny alphabet so that repeats are common.
TermTree random_term(std::mt19937_64& rng, int depth) {
    static const char* leaves[] = {"O", "S", "nat", "ev"};
    static const char* heads[] = {"App", "Prod", "Case"};
    std::uniform_int_distribution<int> pick(0, 3);
    if (depth == 0 || pick(rng) == 0) return leaf(leaves[pick(rng)]);
    const int arity = 1 + pick(rng) % 3;
    TermTree t{heads[pick(rng) % 3], {}};
    for (int i = 0; i < arity; ++i) t.children.push_back(random_term(rng, depth - 1));
    return t;
}

void distinct_subtrees(const TermTree& t, std::set<std::string>& seen, std::map<std::string, std::set<std::string>>& kids) {
    const std::string key = print_term(t);
    seen.insert(key);
    for (const auto& c : t.children) {
        kids[key].insert(print_term(c));
        distinct_subtrees(c, seen, kids);
    }
}

}  // namespace

TEST_CASE("parse_sexpr reads definitions and skips comments") {
    const auto forest = parse_sexpr("; header\n(Definition A (App S O)) ; trailing\n(Definition B A)\n");
    REQUIRE(forest.definitions.size() == 2);
    CHECK(forest.definitions[0].name == "A");
    CHECK(forest.definitions[0].body().size() == 1);
    CHECK(forest.definitions[0].body()[0] == node("App", {leaf("S"), leaf("O")}));
    CHECK(forest.definitions[1].body()[0] == leaf("A"));
    CHECK(forest.find("B") != nullptr);
    CHECK(forest.find("C") == nullptr);
}

TEST_CASE("parse_sexpr handles the ev_4 depth-2 dump, including the elision marker") {
    const auto forest = parse_sexpr(kEv4Dump);
    REQUIRE(forest.definitions.size() == 3);
    CHECK(forest.definitions[0].name == "Top.ev_4");
    CHECK(forest.definitions[1].name == "Top.add_even_even");
    CHECK(forest.definitions[2].name == "Top.ev_2");
    std::vector<std::string> leaves;
    collect_leaves(forest.definitions[1].tree, leaves);
    CHECK(std::find(leaves.begin(), leaves.end(), "...") != leaves.end());
}

TEST_CASE("parse_sexpr errors carry positions") {
    SUBCASE("unbalanced at end of input") {
        try {
            parse_sexpr("(Definition A\n  (App S O)");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(e.column() == 12);
            CHECK(std::string(e.what()).find("opened at line 1") != std::string::npos);
        }
    }
    SUBCASE("stray closing parenthesis") {
        try {
            parse_sexpr("(Definition A O))");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
            CHECK(e.column() == 17);
        }
    }
    CHECK_THROWS_AS(parse_sexpr("()"), ParseError);
    CHECK_THROWS_AS(parse_sexpr("atom"), ParseError);
    CHECK_THROWS_AS(parse_sexpr("(Lemma A O)"), ParseError);
    CHECK_THROWS_AS(parse_sexpr("(Definition)"), ParseError);
    CHECK_THROWS_AS(parse_sexpr("((App) O)"), ParseError);
}

TEST_CASE("duplicate definition names are rejected") {
    CHECK_THROWS_AS(parse_sexpr("(Definition A O)\n(Definition A S)"), DuplicateNameError);
}

TEST_CASE("empty input is an empty forest") {
    CHECK(parse_sexpr("").definitions.empty());
    CHECK(parse_sexpr("  ; only a comment\n").definitions.empty());
}

TEST_CASE("print_sexpr round-trips random forests") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        DefinitionForest f;
        const int defs = 1 + trial % 4;
        for (int d = 0; d < defs; ++d) {
            const std::string name = "D" + std::to_string(d);
            f.definitions.push_back({name, node("Definition", {leaf(name), random_term(rng, 4)})});
        }
        CHECK(parse_sexpr(print_sexpr(f)) == f);
    }
}

TEST_CASE("alpha_number gives binders fresh names and rewrites bound uses only") {
    const auto f = parse_sexpr("(Definition A (Lambda x nat (App f x)) (App g x))");
    const auto g = alpha_number(f);
    const auto& body = g.definitions[0].body();
    REQUIRE(body.size() == 2);
    const auto& lam = body[0];
    REQUIRE(lam.children.size() == 3);
    const std::string fresh = lam.children[0].label;
    CHECK(fresh != "x");
    CHECK(lam.children[1] == leaf("nat"));
    CHECK(lam.children[2] == node("App", {leaf("f"), leaf(fresh)}));
    // x outside the binder is free and untouched.
    CHECK(body[1] == node("App", {leaf("g"), leaf("x")}));
}

TEST_CASE("alpha_number separates equally named binders in different scopes") {
    const auto f = parse_sexpr("(Definition A (App (Lambda x nat x) (Lambda x nat x)))");
    const auto g = alpha_number(f);
    const auto& app = g.definitions[0].body()[0];
    CHECK(app.children[0].children[0].label != app.children[1].children[0].label);
}

TEST_CASE("alpha_number handles shadowing and keeps the type outside the scope") {
    const auto f = parse_sexpr("(Definition A (Lambda x x (Lambda x x x)))");
    const auto g = alpha_number(f);
    const auto& outer = g.definitions[0].body()[0];
    const std::string x1 = outer.children[0].label;
    CHECK(outer.children[1] == leaf("x"));  // type position sees the free x
    const auto& inner = outer.children[2];
    const std::string x2 = inner.children[0].label;
    CHECK(x1 != x2);
    CHECK(inner.children[1] == leaf(x1));  // inner type sees the outer binder
    CHECK(inner.children[2] == leaf(x2));  // body sees the inner binder
}

TEST_CASE("alpha_number never reuses a label already present in the forest") {
    // Scan candidate spellings: pre-occupy the first few fresh names.
    for (int taken = 0; taken < 4; ++taken) {
        std::string text = "(Definition A (Lambda x nat x))\n(Definition B (App";
        for (int k = 1; k <= taken + 1; ++k) text += " x_" + std::to_string(k);
        text += "))";
        const auto g = alpha_number(parse_sexpr(text));
        const std::string fresh = g.definitions[0].body()[0].children[0].label;
        for (int k = 1; k <= taken + 1; ++k) CHECK(fresh != "x_" + std::to_string(k));
    }
}

TEST_CASE("alpha_number binder labels are configurable and definition names are untouched") {
    const auto f = parse_sexpr("(Definition x (Fun x nat x))");
    CHECK(alpha_number(f) == f);
    const auto g = alpha_number(f, BinderLabels{{"Fun"}});
    CHECK(g.definitions[0].name == "x");
    CHECK(g.definitions[0].body()[0].children[0].label != "x");
}

TEST_CASE("reify_dag on the ev_4 dump") {
    const auto dag = reify_dag(alpha_number(parse_sexpr(kEv4Dump)));
    REQUIRE(dag.theorem());
    CHECK(dag.id(*dag.theorem()) == "Top.ev_4");

    // Top.ev_2 is one node, used once by the add_even_even application.
    std::size_t ev2_nodes = 0;
    for (NodeIndex v = 0; v < dag.size(); ++v) ev2_nodes += dag.label(v) == "Top.ev_2";
    CHECK(ev2_nodes == 1);
    const auto ev2 = *dag.find("Top.ev_2");
    CHECK(dag.dependents(ev2).size() == 1);

    // (App S (App S O)) appears twice in the text and once in the graph.
    std::size_t app_s = 0;
    for (NodeIndex v = 0; v < dag.size(); ++v)
        if (dag.label(v) == "App" && dag.dependencies(v).size() == 2) {
            auto deps = dag.dependencies(v);
            app_s += dag.id(deps[0]) == "S" || dag.id(deps[1]) == "S";
        }
    CHECK(app_s == 2);  // (App S O) and (App S (App S O))

    // No two nodes share (label, children).
    std::set<std::pair<std::string, std::vector<NodeIndex>>> keys;
    for (NodeIndex v = 0; v < dag.size(); ++v) {
        auto deps = dag.dependencies(v);
        keys.insert({dag.label(v), {deps.begin(), deps.end()}});
    }
    CHECK(keys.size() == dag.size());
    CHECK(dag.topological_order().size() == dag.size());

    const auto roles = classify_roles(dag);
    std::set<std::string> axioms;
    for (auto a : roles.axioms) axioms.insert(dag.id(a));
    CHECK(axioms.count("ev_SS"));
    CHECK(axioms.count("ev_0"));
    CHECK(axioms.count("O"));
}

TEST_CASE("reify_dag node and edge counts match a brute-force subtree census") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        DefinitionForest f;
        const int defs = 1 + trial % 3;
        for (int d = 0; d < defs; ++d) {
            const std::string name = "Def" + std::to_string(d);
            f.definitions.push_back({name, node("Definition", {leaf(name), random_term(rng, 5)})});
        }
        std::set<std::string> seen;
        std::map<std::string, std::set<std::string>> kids;
        std::size_t def_edges = 0;
        for (const auto& d : f.definitions) {
            std::set<std::string> direct;
            for (const auto& b : d.body()) {
                distinct_subtrees(b, seen, kids);
                direct.insert(print_term(b));
            }
            def_edges += direct.size();
        }
        std::size_t edges = def_edges;
        for (const auto& [k, c] : kids) edges += c.size();

        const auto dag = reify_dag(f);
        CHECK(dag.size() == seen.size() + f.definitions.size());
        CHECK(dag.edge_count() == edges);
    }
}

TEST_CASE("reify_dag links leaves to definitions, including forward references") {
    const auto dag = reify_dag(parse_sexpr("(Definition T (App L O))\n(Definition L (App S O))"));
    const auto t = *dag.find("T");
    const auto l = *dag.find("L");
    CHECK(dag.theorem() == t);
    REQUIRE(dag.dependents(l).size() == 1);
    CHECK(dag.dependents(dag.dependents(l)[0]).front() == t);
    // L appears once even though it is both a definition and a leaf.
    std::size_t count = 0;
    for (NodeIndex v = 0; v < dag.size(); ++v) count += dag.label(v) == "L";
    CHECK(count == 1);
}

TEST_CASE("recursive definitions are a cycle error naming the chain") {
    try {
        reify_dag(parse_sexpr("(Definition A (App B))\n(Definition B (App A))"));
        FAIL("expected CycleError");
    } catch (const CycleError& e) {
        CHECK(e.cycle().size() == 2);
    }
    CHECK_THROWS_AS(reify_dag(parse_sexpr("(Definition A (App A O))")), CycleError);
}

TEST_CASE("reify_dag output is acyclic for random forests with references") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        DefinitionForest f;
        for (int d = 0; d < 4; ++d) {
            const std::string name = "D" + std::to_string(d);
            TermTree body = random_term(rng, 4);
            // Later definitions cite earlier ones only, so no recursion.
            if (d > 0) body = node("App", {body, leaf("D" + std::to_string(rng() % d))});
            f.definitions.push_back({name, node("Definition", {leaf(name), body})});
        }
        const auto dag = reify_dag(alpha_number(f));
        CHECK(dag.topological_order().size() == dag.size());
        CHECK(dag.theorem());
    }
}
