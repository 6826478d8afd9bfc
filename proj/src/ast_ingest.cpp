#include "ept/ast_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "ept/error.hpp"

namespace ept {

std::size_t TermTree::node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
}

const Definition* DefinitionForest::find(std::string_view name) const {
    for (const auto& d : definitions)
        if (d.name == name) return &d;
    return nullptr;
}

bool BinderLabels::contains(std::string_view label) const {
    return std::find(labels.begin(), labels.end(), label) != labels.end();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Position {
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    enum class Kind { Open, Close, Symbol, End };
    struct Token {
        Kind kind;
        std::string_view text;
        Position pos;
    };

    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_blank();
        Position at = pos_;
        if (i_ >= text_.size()) return {Kind::End, {}, at};
        char c = text_[i_];
        if (c == '(' || c == ')') {
            advance();
            return {c == '(' ? Kind::Open : Kind::Close, text_.substr(i_ - 1, 1), at};
        }
        std::size_t start = i_;
        while (i_ < text_.size() && !is_delim(text_[i_])) advance();
        return {Kind::Symbol, text_.substr(start, i_ - start), at};
    }

private:
    static bool is_delim(char c) {
        return c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c));
    }

    void advance() {
        if (text_[i_] == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        ++i_;
    }

    void skip_blank() {
        while (i_ < text_.size()) {
            char c = text_[i_];
            if (c == ';') {
                while (i_ < text_.size() && text_[i_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t i_ = 0;
    Position pos_;
};

// Reads one parenthesised form after its '(' has been consumed. Iterative so
// that deep terms cannot exhaust the call stack.
TermTree read_form(Lexer& lex, Position open_pos) {
    struct Frame {
        TermTree tree;
        bool has_label = false;
        Position open;
    };
    std::vector<Frame> stack;
    stack.push_back({{}, false, open_pos});
    for (;;) {
        auto tok = lex.next();
        Frame& top = stack.back();
        switch (tok.kind) {
            case Lexer::Kind::End:
                throw ParseError("unbalanced parentheses: '(' opened at line " +
                                     std::to_string(stack.back().open.line) + ", column " +
                                     std::to_string(stack.back().open.column) + " is never closed",
                                 tok.pos.line, tok.pos.column);
            case Lexer::Kind::Symbol:
                if (!top.has_label) {
                    top.tree.label = std::string(tok.text);
                    top.has_label = true;
                } else {
                    top.tree.children.push_back(TermTree{std::string(tok.text), {}});
                }
                break;
            case Lexer::Kind::Open:
                if (!top.has_label)
                    throw ParseError("expected a label, found '('", tok.pos.line, tok.pos.column);
                stack.push_back({{}, false, tok.pos});
                break;
            case Lexer::Kind::Close: {
                if (!top.has_label)
                    throw ParseError("empty label '()'", top.open.line, top.open.column);
                TermTree done = std::move(top.tree);
                stack.pop_back();
                if (stack.empty()) return done;
                stack.back().tree.children.push_back(std::move(done));
                break;
            }
        }
    }
}

}  // namespace

DefinitionForest parse_sexpr(std::string_view text) {
    DefinitionForest forest;
    std::unordered_set<std::string> names;
    Lexer lex(text);
    for (;;) {
        auto tok = lex.next();
        if (tok.kind == Lexer::Kind::End) break;
        if (tok.kind == Lexer::Kind::Close)
            throw ParseError("unbalanced parentheses: unexpected ')'", tok.pos.line, tok.pos.column);
        if (tok.kind == Lexer::Kind::Symbol)
            throw ParseError("expected '(' at top level, found '" + std::string(tok.text) + "'",
                             tok.pos.line, tok.pos.column);
        TermTree form = read_form(lex, tok.pos);
        if (form.label != "Definition")
            throw ParseError("top-level form must be (Definition ...), found (" + form.label + " ...)",
                             tok.pos.line, tok.pos.column);
        if (form.children.empty() || !form.children.front().is_leaf())
            throw ParseError("Definition needs a name", tok.pos.line, tok.pos.column);
        std::string name = form.children.front().label;
        if (!names.insert(name).second) throw DuplicateNameError(name);
        forest.definitions.push_back({std::move(name), std::move(form)});
    }
    return forest;
}

namespace {

void print_into(const TermTree& t, std::string& out) {
    if (t.is_leaf()) {
        out += t.label;
        return;
    }
    out += '(';
    out += t.label;
    for (const auto& c : t.children) {
        out += ' ';
        print_into(c, out);
    }
    out += ')';
}

}  // namespace

std::string print_term(const TermTree& tree) {
    std::string out;
    print_into(tree, out);
    return out;
}

std::string print_sexpr(const DefinitionForest& forest) {
    std::string out;
    for (const auto& d : forest.definitions) {
        // A Definition with only a name is still printed as a list.
        if (d.tree.is_leaf())
            out += "(" + d.tree.label + ")";
        else
            print_into(d.tree, out);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Alpha numbering

namespace {

void collect_labels(const TermTree& t, std::unordered_set<std::string>& out) {
    out.insert(t.label);
    for (const auto& c : t.children) collect_labels(c, out);
}

class AlphaRenamer {
public:
    AlphaRenamer(const BinderLabels& binders, std::unordered_set<std::string> used)
        : binders_(binders), used_(std::move(used)) {}

    TermTree rename(const TermTree& t) {
        if (t.is_leaf()) {
            for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
                if (it->first == t.label) return TermTree{it->second, {}};
            return t;
        }
        TermTree out{t.label, {}};
        out.children.reserve(t.children.size());
        const bool binds = binders_.contains(t.label) && t.children.size() >= 2 &&
                           t.children.front().is_leaf();
        if (!binds) {
            for (const auto& c : t.children) out.children.push_back(rename(c));
            return out;
        }
        const std::string& original = t.children[0].label;
        std::string fresh = fresh_name(original);
        out.children.push_back(TermTree{fresh, {}});
        out.children.push_back(rename(t.children[1]));  // type: outer scope
        scope_.emplace_back(original, fresh);
        for (std::size_t i = 2; i < t.children.size(); ++i) out.children.push_back(rename(t.children[i]));
        scope_.pop_back();
        return out;
    }

private:
    std::string fresh_name(const std::string& base) {
        for (;;) {
            std::string candidate = base + "_" + std::to_string(++counter_);
            if (used_.insert(candidate).second) return candidate;
        }
    }

    const BinderLabels& binders_;
    std::unordered_set<std::string> used_;
    std::vector<std::pair<std::string, std::string>> scope_;
    std::uint64_t counter_ = 0;
};

}  // namespace

DefinitionForest alpha_number(const DefinitionForest& forest, const BinderLabels& binders) {
    std::unordered_set<std::string> used;
    for (const auto& d : forest.definitions) collect_labels(d.tree, used);
    AlphaRenamer renamer(binders, std::move(used));
    DefinitionForest out;
    out.definitions.reserve(forest.definitions.size());
    for (const auto& d : forest.definitions) {
        // Definition names are not binders; only the body is rewritten.
        TermTree tree{d.tree.label, {d.tree.children.front()}};
        for (const auto& c : d.body()) tree.children.push_back(renamer.rename(c));
        out.definitions.push_back({d.name, std::move(tree)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reification

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h * 0xff51afd7ed558ccdULL;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

class Reifier {
public:
    explicit Reifier(const DefinitionForest& forest) : forest_(forest) {
        for (std::size_t i = 0; i < forest.definitions.size(); ++i)
            def_index_.emplace(forest.definitions[i].name, i);
        def_node_.assign(forest.definitions.size(), std::nullopt);
        state_.assign(forest.definitions.size(), State::Pending);
    }

    ProofDag run() {
        for (std::size_t i = 0; i < forest_.definitions.size(); ++i) reify_definition(i);
        for (std::size_t v = 0; v < children_.size(); ++v)
            for (NodeIndex c : children_[v]) builder_.add_edge(c, static_cast<NodeIndex>(v));
        // Designate before build so the choice is independent of unique-sink fallback.
        std::vector<bool> used(children_.size(), false);
        for (const auto& cs : children_)
            for (NodeIndex c : cs) used[c] = true;
        for (std::size_t i = 0; i < def_node_.size(); ++i) {
            if (!used[*def_node_[i]]) {
                builder_.set_theorem(*def_node_[i]);
                break;
            }
        }
        return std::move(builder_).build();
    }

private:
    enum class State { Pending, Active, Done };

    struct Key {
        std::string label;
        std::vector<NodeIndex> children;
    };

    NodeIndex reify_definition(std::size_t i) {
        if (state_[i] == State::Done) return *def_node_[i];
        const Definition& def = forest_.definitions[i];
        if (state_[i] == State::Active) {
            std::vector<std::string> cycle;
            bool on = false;
            for (std::size_t j : active_) {
                if (j == i) on = true;
                if (on) cycle.push_back(forest_.definitions[j].name);
            }
            throw CycleError("definition '" + def.name + "' depends on itself through its expansion",
                             std::move(cycle));
        }
        state_[i] = State::Active;
        active_.push_back(i);
        std::vector<NodeIndex> kids;
        std::uint64_t h = mix(fnv1a("Definition"), fnv1a(def.name));
        for (const auto& body : def.body()) {
            auto [node, hash] = reify_term(body);
            kids.push_back(node);
            h = mix(h, hash);
        }
        NodeIndex node = new_node(unique_id(def.name), def.name, std::move(kids), h);
        active_.pop_back();
        state_[i] = State::Done;
        def_node_[i] = node;
        return node;
    }

    // Post-order hash-consing. Returns (node, structural hash).
    std::pair<NodeIndex, std::uint64_t> reify_term(const TermTree& t) {
        if (t.is_leaf()) {
            if (auto it = def_index_.find(t.label); it != def_index_.end()) {
                NodeIndex n = reify_definition(it->second);
                return {n, hash_[n]};
            }
        }
        std::vector<NodeIndex> kids;
        kids.reserve(t.children.size());
        std::uint64_t h = fnv1a(t.label);
        h = mix(h, t.children.size());
        for (const auto& c : t.children) {
            auto [node, hash] = reify_term(c);
            kids.push_back(node);
            h = mix(h, hash);
        }
        auto& bucket = buckets_[h];
        for (NodeIndex candidate : bucket)
            if (builder_label(candidate) == t.label && children_[candidate] == kids) return {candidate, h};
        // Leaves keep their symbol as id; interior nodes are named by hash.
        std::string id = t.is_leaf() ? t.label : t.label + "#" + hex64(h);
        if (!bucket.empty()) id += "." + std::to_string(bucket.size());  // verified hash collision
        NodeIndex n = new_node(unique_id(std::move(id)), t.label, std::move(kids), h);
        bucket.push_back(n);
        return {n, h};
    }

    const std::string& builder_label(NodeIndex n) const { return labels_[n]; }

    std::string unique_id(std::string id) {
        if (!builder_.find(id)) return id;
        std::string base = id;
        for (int k = 1;; ++k) {
            id = base + "'" + std::to_string(k);
            if (!builder_.find(id)) return id;
        }
    }

    NodeIndex new_node(std::string id, const std::string& label, std::vector<NodeIndex> kids,
                       std::uint64_t hash) {
        NodeIndex n = builder_.add_node(std::move(id), label);
        labels_.push_back(label);
        children_.push_back(std::move(kids));
        hash_.push_back(hash);
        return n;
    }

    const DefinitionForest& forest_;
    std::unordered_map<std::string, std::size_t> def_index_;
    std::vector<std::optional<NodeIndex>> def_node_;
    std::vector<State> state_;
    std::vector<std::size_t> active_;

    DagBuilder builder_;
    std::vector<std::string> labels_;
    std::vector<std::vector<NodeIndex>> children_;  // ordered, with multiplicity
    std::vector<std::uint64_t> hash_;
    std::unordered_map<std::uint64_t, std::vector<NodeIndex>> buckets_;
};

}  // namespace

ProofDag reify_dag(const DefinitionForest& forest) {
    return Reifier(forest).run();
}

}  // namespace ept
