#include "ept/proof_dag.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <sstream>

#include "ept/error.hpp"

namespace ept {

AmbiguousTheoremError::AmbiguousTheoremError(std::vector<std::string> candidates)
    : Error([&] {
          std::string msg = "cannot determine the theorem: " + std::to_string(candidates.size()) +
                            " sink candidates";
          for (std::size_t i = 0; i < candidates.size() && i < 10; ++i)
              msg += (i == 0 ? " (" : ", ") + candidates[i];
          if (!candidates.empty()) msg += candidates.size() > 10 ? ", ...)" : ")";
          return msg;
      }()),
      candidates_(std::move(candidates)) {}

std::optional<NodeIndex> ProofDag::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<Edge> ProofDag::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeIndex u = 0; u < size(); ++u)
        for (NodeIndex v : dependents(u)) out.push_back({u, v});
    return out;
}

std::vector<NodeIndex> ProofDag::topological_order() const {
    std::vector<std::size_t> pending(size());
    std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
    for (NodeIndex n = 0; n < size(); ++n) {
        pending[n] = dependencies(n).size();
        if (pending[n] == 0) ready.push(n);
    }
    std::vector<NodeIndex> order;
    order.reserve(size());
    while (!ready.empty()) {
        NodeIndex n = ready.top();
        ready.pop();
        order.push_back(n);
        for (NodeIndex m : dependents(n))
            if (--pending[m] == 0) ready.push(m);
    }
    return order;
}

std::vector<NodeIndex> ProofDag::sinks() const {
    std::vector<NodeIndex> out;
    for (NodeIndex n = 0; n < size(); ++n)
        if (dependents(n).empty()) out.push_back(n);
    return out;
}

ProofDag ProofDag::with_theorem(std::optional<NodeIndex> theorem) const {
    if (theorem && *theorem >= size()) throw Error("theorem index out of range");
    ProofDag copy = *this;
    copy.theorem_ = theorem;
    return copy;
}

bool operator==(const ProofDag& a, const ProofDag& b) {
    return a.ids_ == b.ids_ && a.labels_ == b.labels_ && a.dep_offsets_ == b.dep_offsets_ &&
           a.dep_targets_ == b.dep_targets_ && a.theorem_ == b.theorem_;
}

// ---------------------------------------------------------------------------

NodeIndex DagBuilder::add_node(std::string id, std::string label) {
    if (index_.count(id)) throw Error("duplicate node id '" + id + "'");
    const auto n = static_cast<NodeIndex>(ids_.size());
    index_.emplace(id, n);
    ids_.push_back(std::move(id));
    labels_.push_back(std::move(label));
    return n;
}

NodeIndex DagBuilder::intern(std::string_view id) {
    if (auto n = find(id)) return *n;
    return add_node(std::string(id));
}

std::optional<NodeIndex> DagBuilder::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void DagBuilder::add_edge(NodeIndex dependency, NodeIndex dependent) {
    if (dependency >= ids_.size() || dependent >= ids_.size()) throw Error("edge endpoint out of range");
    if (dependency == dependent)
        throw CycleError("self-dependency on '" + ids_[dependent] + "'", {ids_[dependent]});
    edges_.push_back({dependency, dependent});
}

void DagBuilder::set_theorem(NodeIndex theorem) {
    if (theorem >= ids_.size()) throw Error("theorem index out of range");
    theorem_ = theorem;
}

namespace {

// Finds one cycle among nodes that Kahn's algorithm could not release.
std::vector<NodeIndex> find_cycle(const ProofDag& dag, const std::vector<std::size_t>& pending) {
    // Every stuck node has a stuck dependency; walking dependencies must revisit a node.
    NodeIndex start = 0;
    while (pending[start] == 0) ++start;
    std::vector<int> seen_at(dag.size(), -1);
    std::vector<NodeIndex> walk;
    NodeIndex cur = start;
    while (seen_at[cur] < 0) {
        seen_at[cur] = static_cast<int>(walk.size());
        walk.push_back(cur);
        for (NodeIndex d : dag.dependencies(cur)) {
            if (pending[d] != 0) {
                cur = d;
                break;
            }
        }
    }
    std::vector<NodeIndex> cycle(walk.begin() + seen_at[cur], walk.end());
    // Walk went dependent -> dependency; report in dependency -> dependent order.
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
}

}  // namespace

ProofDag DagBuilder::build(bool unique_sink_theorem) && {
    ProofDag dag;
    const std::size_t n = ids_.size();
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.dependent, a.dependency) < std::tie(b.dependent, b.dependency);
    });
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    dag.dep_offsets_.assign(n + 1, 0);
    dag.use_offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) {
        ++dag.dep_offsets_[e.dependent + 1];
        ++dag.use_offsets_[e.dependency + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        dag.dep_offsets_[i + 1] += dag.dep_offsets_[i];
        dag.use_offsets_[i + 1] += dag.use_offsets_[i];
    }
    dag.dep_targets_.resize(edges_.size());
    dag.use_targets_.resize(edges_.size());
    {
        std::vector<std::size_t> dfill(dag.dep_offsets_.begin(), dag.dep_offsets_.end() - 1);
        std::vector<std::size_t> ufill(dag.use_offsets_.begin(), dag.use_offsets_.end() - 1);
        // edges_ are sorted by dependent then dependency, so dependency lists come out ascending.
        for (const Edge& e : edges_) dag.dep_targets_[dfill[e.dependent]++] = e.dependency;
        std::vector<Edge> by_source = edges_;
        std::sort(by_source.begin(), by_source.end());
        for (const Edge& e : by_source) dag.use_targets_[ufill[e.dependency]++] = e.dependent;
    }
    dag.ids_ = std::move(ids_);
    dag.labels_ = std::move(labels_);
    dag.index_ = std::move(index_);
    dag.theorem_ = theorem_;

    // Acyclicity check.
    std::vector<std::size_t> pending(n);
    std::vector<NodeIndex> ready;
    for (NodeIndex v = 0; v < n; ++v) {
        pending[v] = dag.dependencies(v).size();
        if (pending[v] == 0) ready.push_back(v);
    }
    std::size_t released = 0;
    while (!ready.empty()) {
        NodeIndex v = ready.back();
        ready.pop_back();
        ++released;
        for (NodeIndex w : dag.dependents(v))
            if (--pending[w] == 0) ready.push_back(w);
    }
    if (released != n) {
        std::vector<std::string> names;
        for (NodeIndex v : find_cycle(dag, pending)) names.push_back(dag.ids_[v]);
        std::string msg = "dependency cycle:";
        for (const auto& s : names) msg += " " + s + " ->";
        msg += " " + names.front();
        throw CycleError(msg, std::move(names));
    }

    if (!dag.theorem_ && unique_sink_theorem) {
        auto sinks = dag.sinks();
        if (sinks.size() == 1) dag.theorem_ = sinks.front();
    }
    return dag;
}

ProofDag induced_subgraph(const ProofDag& dag, std::span<const NodeIndex> keep) {
    std::vector<NodeIndex> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    constexpr NodeIndex kAbsent = static_cast<NodeIndex>(-1);
    std::vector<NodeIndex> remap(dag.size(), kAbsent);
    DagBuilder b;
    for (NodeIndex v : sorted) remap[v] = b.add_node(dag.id(v), dag.label(v));
    for (NodeIndex v : sorted)
        for (NodeIndex d : dag.dependencies(v))
            if (remap[d] != kAbsent) b.add_edge(remap[d], remap[v]);
    if (auto t = dag.theorem(); t && remap[*t] != kAbsent) b.set_theorem(remap[*t]);
    return std::move(b).build();
}

// ---------------------------------------------------------------------------

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

ProofDag from_edge_list(std::string_view text) {
    struct Claim {
        std::string_view head;
        std::vector<std::string_view> deps;
    };
    DagBuilder b;
    std::vector<Claim> claims;
    std::optional<std::string> designated;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.front().front() == '#') {
            // "# theorem: NAME" is the one structured comment.
            if (tokens.size() == 3 && tokens[0] == "#" && tokens[1] == "theorem:")
                designated = std::string(tokens[2]);
            continue;
        }

        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos)
            throw ParseError("expected 'claim: dependencies' (missing ':')", line_no, 1);
        auto head = split_ws(line.substr(0, colon));
        if (head.size() != 1) {
            const std::size_t col = line.find_first_not_of(" \t") + 1;
            throw ParseError(head.empty() ? "missing claim name before ':'"
                                          : "claim name must be a single token",
                             line_no, head.empty() ? colon + 1 : col);
        }
        Claim claim{head.front(), {}};
        for (std::string_view dep : split_ws(line.substr(colon + 1))) {
            if (dep.front() == '#') break;  // trailing comment
            claim.deps.push_back(dep);
        }
        claims.push_back(std::move(claim));
    }
    // Claims take indices in file order; names only ever cited come after.
    for (const auto& c : claims) b.intern(c.head);
    for (const auto& c : claims) {
        const NodeIndex dependent = *b.find(c.head);
        for (auto dep : c.deps) b.add_edge(b.intern(dep), dependent);
    }
    if (designated) {
        auto t = b.find(*designated);
        if (!t) throw ParseError("theorem '" + *designated + "' is not a claim in the file", line_no, 1);
        b.set_theorem(*t);
    }
    return std::move(b).build(/*unique_sink_theorem=*/true);
}

std::string to_edge_list(const ProofDag& dag) {
    std::ostringstream os;
    if (auto t = dag.theorem()) os << "# theorem: " << dag.id(*t) << '\n';
    for (NodeIndex v = 0; v < dag.size(); ++v) {
        os << dag.id(v) << ':';
        for (NodeIndex d : dag.dependencies(v)) os << ' ' << dag.id(d);
        os << '\n';
    }
    return os.str();
}

DegreeTable degrees(const ProofDag& dag) {
    DegreeTable t;
    t.in_degree.resize(dag.size());
    t.out_degree.resize(dag.size());
    for (NodeIndex v = 0; v < dag.size(); ++v) {
        t.in_degree[v] = dag.dependencies(v).size();
        t.out_degree[v] = dag.dependents(v).size();
    }
    return t;
}

NodeRoles classify_roles(const ProofDag& dag) {
    NodeRoles roles;
    if (auto t = dag.theorem()) {
        roles.theorem = *t;
    } else {
        auto sinks = dag.sinks();
        if (sinks.size() != 1) {
            std::vector<std::string> names;
            for (NodeIndex s : sinks) names.push_back(dag.id(s));
            throw AmbiguousTheoremError(std::move(names));
        }
        roles.theorem = sinks.front();
    }
    for (NodeIndex v = 0; v < dag.size(); ++v) {
        if (v == roles.theorem) continue;
        (dag.dependencies(v).empty() ? roles.axioms : roles.interior).push_back(v);
    }
    return roles;
}

ProofDag truncate_by_depth(const ProofDag& dag, std::size_t limit) {
    const auto theorem = dag.theorem();
    if (!theorem) throw ConfigurationError("truncate_by_depth needs a designated theorem");
    std::vector<bool> seen(dag.size(), false);
    std::vector<NodeIndex> kept{*theorem};
    std::vector<NodeIndex> frontier{*theorem};
    seen[*theorem] = true;
    while (kept.size() <= limit) {
        std::vector<NodeIndex> next;
        for (NodeIndex v : frontier)
            for (NodeIndex d : dag.dependencies(v))
                if (!seen[d]) {
                    seen[d] = true;
                    next.push_back(d);
                }
        if (next.empty()) return dag;  // never exceeded the limit
        kept.insert(kept.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return induced_subgraph(dag, kept);
}

}  // namespace ept
