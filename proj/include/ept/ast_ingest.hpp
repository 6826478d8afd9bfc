#pragma once

// Ingestion of PrintAST-style term dumps:
//
//   (Definition Top.ev_2 (App ev_SS O ev_0))
//
// Each top-level form is a Definition whose body is a parenthesised term
// tree. Trees are alpha-numbered and then hash-consed into a ProofDag in
// which structurally identical subterms share one node.

#include <string>
#include <string_view>
#include <vector>

#include "ept/proof_dag.hpp"

namespace ept {

struct TermTree {
    std::string label;
    std::vector<TermTree> children;

    bool is_leaf() const noexcept { return children.empty(); }
    std::size_t node_count() const;

    friend bool operator==(const TermTree&, const TermTree&) = default;
};

/// One `(Definition name body...)` form. `tree` is the whole form, so its
/// root label is "Definition" and its first child is the name leaf.
struct Definition {
    std::string name;
    TermTree tree;

    /// Children after the name.
    std::span<const TermTree> body() const {
        return std::span<const TermTree>(tree.children).subspan(1);
    }

    friend bool operator==(const Definition&, const Definition&) = default;
};

struct DefinitionForest {
    std::vector<Definition> definitions;

    const Definition* find(std::string_view name) const;
    friend bool operator==(const DefinitionForest&, const DefinitionForest&) = default;
};

/// Parses zero or more `(Definition ...)` forms. `;` comments run to end of
/// line. Throws ParseError (with position) or DuplicateNameError.
DefinitionForest parse_sexpr(std::string_view text);

std::string print_term(const TermTree& tree);
/// Prints one form per line; parse_sexpr(print_sexpr(f)) == f.
std::string print_sexpr(const DefinitionForest& forest);

/// Labels that introduce a bound name: `(Binder name type body...)`.
struct BinderLabels {
    std::vector<std::string> labels{"Lambda"};

    bool contains(std::string_view label) const;
};

/// Gives every binder a fresh `name_k` spelling (k from a forest-wide counter,
/// skipping anything already used as a label) and rewrites bound occurrences
/// in the binder's body. The type position is outside the binder's scope.
DefinitionForest alpha_number(const DefinitionForest& forest, const BinderLabels& binders = {});

/// Bottom-up hash-consing of the forest into a dependency DAG.
///
/// - Definitions become nodes whose id and label are the definition name.
/// - A leaf naming a definition anywhere in the forest links to that node.
///   Other leaves become shared leaf nodes, i.e. axioms.
/// - Interior nodes are identified by a 64-bit structural hash of (label,
///   child hashes); hash hits are confirmed by full comparison.
/// - The theorem is the first definition, in forest order, that nothing uses.
///
/// Throws CycleError when definitions refer to each other recursively.
ProofDag reify_dag(const DefinitionForest& forest);

}  // namespace ept
