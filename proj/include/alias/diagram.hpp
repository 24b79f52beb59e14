// diagram.hpp
//
// Concrete semantics used as an oracle: object states, expression values,
// instruction execution, and alias diagrams (rooted labeled multigraphs)
// with their canonical form, the "holds" embedding check, the associated
// alias relation and the diagram form of the assignment rule.

#ifndef ALIAS_DIAGRAM_HPP
#define ALIAS_DIAGRAM_HPP

#include "alias/program.hpp"
#include "alias/relation.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace alias {

using ObjectId = std::uint32_t;
using NodeId = std::uint32_t;

/// Object -> Attr -/-> Object, restricted to a finite set of objects.
struct State {
    std::set<ObjectId> objects;
    std::map<std::pair<ObjectId, Tag>, ObjectId> transitions;

    ObjectId fresh_object() {
        ObjectId id = objects.empty() ? 0 : *objects.rbegin() + 1;
        objects.insert(id);
        return id;
    }

    std::optional<ObjectId> get(ObjectId o, Tag t) const {
        auto it = transitions.find({o, t});
        if (it == transitions.end()) return std::nullopt;
        return it->second;
    }

    void set(ObjectId o, Tag t, std::optional<ObjectId> v) {
        if (v)
            transitions[{o, t}] = *v;
        else
            transitions.erase({o, t});
    }

    friend auto operator<=>(const State&, const State&) = default;
    friend bool operator==(const State&, const State&) = default;
};

/// value(S, o, Current) = o; value(S, o, x.e) = value(S, S(o, x), e).
inline std::optional<ObjectId> value(const State& s, ObjectId o, const Expression& e) {
    std::optional<ObjectId> cur = o;
    for (Tag t : e.tags()) {
        if (t.negative()) return std::nullopt;
        cur = s.get(*cur, t);
        if (!cur) return std::nullopt;
    }
    return cur;
}

struct ExecConfig {
    std::size_t loop_unroll = 3;
    std::size_t max_call_depth = 16;
};

/// Set-valued execution: both branches of a choice and 0..K unrollings of a
/// loop are explored. Paths that call through a void target are dropped and
/// counted in `aborted`.
class Executor {
public:
    Executor(const Program& program, ExecConfig config = {}) : program_(program), config_(config) {}

    std::size_t aborted() const { return aborted_; }

    std::set<State> exec(const State& s, ObjectId o, const Instruction& i,
                         const std::string& owner) {
        return std::visit([&](const auto& n) { return run(s, o, n, owner); }, i.kind);
    }

    std::set<State> exec_all(const std::set<State>& in, ObjectId o, const Instruction& i,
                             const std::string& owner) {
        std::set<State> out;
        for (const auto& s : in) out.merge(exec(s, o, i, owner));
        return out;
    }

private:
    const Program& program_;
    ExecConfig config_;
    std::size_t aborted_ = 0;
    std::size_t depth_ = 0;

    std::set<State> run(State s, ObjectId o, const Assign& n, const std::string&) {
        // S - {[o, t, value(S, o, t)]} U {[o, t, value(S, o, e)]}
        s.set(o, n.target, value(s, o, n.source));
        return {std::move(s)};
    }
    std::set<State> run(State s, ObjectId o, const Create& n, const std::string&) {
        auto fresh = s.fresh_object();
        s.set(o, n.target, fresh);
        return {std::move(s)};
    }
    std::set<State> run(State s, ObjectId o, const Forget& n, const std::string&) {
        s.set(o, n.target, std::nullopt);
        return {std::move(s)};
    }
    std::set<State> run(const State& s, ObjectId, const Cut&, const std::string&) { return {s}; }
    std::set<State> run(const State& s, ObjectId, const Bind&, const std::string&) { return {s}; }
    std::set<State> run(const State& s, ObjectId o, const Seq& n, const std::string& owner) {
        std::set<State> cur{s};
        for (const auto& i : n.body) cur = exec_all(cur, o, *i, owner);
        return cur;
    }
    std::set<State> run(const State& s, ObjectId o, const Choice& n, const std::string& owner) {
        auto out = exec(s, o, *n.then_body, owner);
        out.merge(exec(s, o, *n.else_body, owner));
        return out;
    }
    std::set<State> run(const State& s, ObjectId o, const Loop& n, const std::string& owner) {
        std::set<State> out{s}, frontier{s};
        for (std::size_t k = 0; k < config_.loop_unroll && !frontier.empty(); ++k) {
            frontier = exec_all(frontier, o, *n.body, owner);
            std::set<State> fresh;
            for (const auto& st : frontier)
                if (out.insert(st).second) fresh.insert(st);
            frontier = std::move(fresh);
        }
        return out;
    }
    std::set<State> run(const State& s, ObjectId o, const Call& n, const std::string& owner) {
        return invoke(s, o, o, program_.resolve(owner, n.routine), n.actuals);
    }
    std::set<State> run(const State& s, ObjectId o, const QualifiedCall& n, const std::string&) {
        auto target = value(s, o, n.target);
        if (!target) {
            ++aborted_;
            return {};
        }
        return invoke(s, o, *target, program_.resolve_qualified(n.routine), n.actuals);
    }

    // Formals and locals live as transient fields of the callee's Current.
    std::set<State> invoke(State s, ObjectId caller, ObjectId target, const Routine& f,
                           const std::vector<Expression>& actuals) {
        if (depth_ >= config_.max_call_depth) {
            ++aborted_;
            return {};
        }
        std::vector<std::optional<ObjectId>> vals;
        for (const auto& a : actuals) vals.push_back(value(s, caller, a));
        for (Tag l : f.locals) s.set(target, l, std::nullopt);
        for (std::size_t k = 0; k < f.formals.size(); ++k) s.set(target, f.formals[k], vals[k]);
        ++depth_;
        auto results = exec(s, target, *f.body, f.owner);
        --depth_;
        std::set<State> out;
        for (auto st : results) {
            for (Tag t : f.formals) st.set(target, t, std::nullopt);
            for (Tag t : f.locals) st.set(target, t, std::nullopt);
            out.insert(std::move(st));
        }
        return out;
    }
};

struct Edge {
    NodeId source;
    Tag tag;
    NodeId target;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct AliasDiagram {
    std::set<NodeId> vertices;
    NodeId root = 0;
    std::set<Edge> edges;

    NodeId fresh_vertex() {
        NodeId id = vertices.empty() ? 0 : *vertices.rbegin() + 1;
        vertices.insert(id);
        return id;
    }

    /// De: terminal vertices of the paths labeled e.
    std::set<NodeId> terminals(const Expression& e) const {
        std::set<NodeId> cur{root};
        for (Tag t : e.tags()) {
            std::set<NodeId> next;
            for (const auto& ed : edges)
                if (ed.tag == t && cur.count(ed.source)) next.insert(ed.target);
            cur = std::move(next);
        }
        return cur;
    }

    friend bool operator==(const AliasDiagram&, const AliasDiagram&) = default;
};

/// Drops unreachable and unnecessary vertices until none remain. A vertex
/// is necessary if it is the root, has two or more incoming edges, or has
/// an outgoing edge.
inline AliasDiagram canonicalize_diagram(AliasDiagram d) {
    for (bool changed = true; changed;) {
        changed = false;
        std::set<NodeId> reach{d.root};
        std::vector<NodeId> work{d.root};
        while (!work.empty()) {
            auto v = work.back();
            work.pop_back();
            for (const auto& e : d.edges)
                if (e.source == v && reach.insert(e.target).second) work.push_back(e.target);
        }
        std::map<NodeId, int> in, out;
        for (const auto& e : d.edges) {
            if (!reach.count(e.source)) continue;
            ++in[e.target];
            ++out[e.source];
        }
        std::set<NodeId> keep;
        for (auto v : d.vertices)
            if (reach.count(v) && (v == d.root || in[v] >= 2 || out[v] >= 1)) keep.insert(v);
        if (keep.size() != d.vertices.size()) {
            changed = true;
            d.vertices = std::move(keep);
            for (auto it = d.edges.begin(); it != d.edges.end();)
                it = (d.vertices.count(it->source) && d.vertices.count(it->target))
                         ? std::next(it)
                         : d.edges.erase(it);
        }
    }
    return d;
}

/// D(S,o): root o, one vertex per object, one edge per transition, canonicalized.
inline AliasDiagram associated_diagram(const State& s, ObjectId o) {
    AliasDiagram d;
    d.vertices = s.objects;
    d.vertices.insert(o);
    d.root = o;
    for (const auto& [k, v] : s.transitions) d.edges.insert(Edge{k.first, k.second, v});
    return canonicalize_diagram(std::move(d));
}

/// Is there an injective, root- and edge-preserving map from D(S,o) into d?
inline bool holds(const State& s, ObjectId o, const AliasDiagram& d) {
    auto src = associated_diagram(s, o);

    // Discovery order from the root; each later vertex has a parent edge.
    std::vector<NodeId> order{src.root};
    std::map<NodeId, Edge> parent;
    for (std::size_t k = 0; k < order.size(); ++k)
        for (const auto& e : src.edges)
            if (e.source == order[k] && !parent.count(e.target) && e.target != src.root) {
                parent.emplace(e.target, e);
                order.push_back(e.target);
            }

    std::map<NodeId, std::set<std::pair<Tag, NodeId>>> succ;
    for (const auto& e : d.edges) succ[e.source].insert({e.tag, e.target});

    std::map<NodeId, NodeId> image;
    std::set<NodeId> used;
    auto consistent = [&](NodeId v) {
        for (const auto& e : src.edges) {
            if (e.source != v && e.target != v) continue;
            auto a = image.find(e.source), b = image.find(e.target);
            if (a == image.end() || b == image.end()) continue;
            if (!succ[a->second].count({e.tag, b->second})) return false;
        }
        return true;
    };
    auto search = [&](auto&& self, std::size_t k) -> bool {
        if (k == order.size()) return true;
        auto v = order[k];
        const auto& pe = parent.at(v);
        for (const auto& [tag, w] : succ[image.at(pe.source)]) {
            if (tag != pe.tag || used.count(w)) continue;
            image[v] = w;
            used.insert(w);
            if (consistent(v) && self(self, k + 1)) return true;
            image.erase(v);
            used.erase(w);
        }
        return false;
    };
    image[src.root] = d.root;
    used.insert(d.root);
    if (!consistent(src.root)) return false;
    return search(search, 1);
}

/// Pairs of distinct expressions (length <= cutoff) whose root paths share a
/// terminal vertex. Every such pair is enumerated, so the stored generators
/// are exactly the pairs not obtained by appending attributes to another.
inline AliasRelation diagram_alias_relation(const AliasDiagram& d, std::size_t cutoff,
                                            const std::set<Tag>& attributes) {
    std::map<NodeId, std::vector<Expression>> by_terminal;
    std::vector<std::pair<NodeId, Expression>> frontier{{d.root, Expression::current()}};
    by_terminal[d.root].push_back(Expression::current());
    for (std::size_t len = 0; len < cutoff; ++len) {
        std::vector<std::pair<NodeId, Expression>> next;
        for (const auto& [v, e] : frontier)
            for (const auto& ed : d.edges)
                if (ed.source == v) {
                    auto ext = e.dot(ed.tag);
                    by_terminal[ed.target].push_back(ext);
                    next.emplace_back(ed.target, std::move(ext));
                }
        frontier = std::move(next);
    }
    AliasRelation r(cutoff, std::make_shared<const std::set<Tag>>(attributes));
    for (const auto& [_, es] : by_terminal)
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j) r.insert(es[i], es[j]);
    return r;
}

/// D >> (t := e) for e = t1...tn: a fresh path v1..vn is grafted along e,
/// root t-edges are replaced by edges to De and to vn.
inline AliasDiagram diagram_assign(const AliasDiagram& d, Tag t, const Expression& e) {
    AliasDiagram out = d;
    std::vector<NodeId> fresh;
    for (std::size_t k = 0; k < e.size(); ++k) fresh.push_back(out.fresh_vertex());
    for (std::size_t k = 0; k < e.size(); ++k) {
        for (auto o : d.terminals(e.prefix(k))) out.edges.insert(Edge{o, e[k], fresh[k]});
        if (k > 0) out.edges.insert(Edge{fresh[k - 1], e[k], fresh[k]});
    }
    for (auto it = out.edges.begin(); it != out.edges.end();)
        it = (it->source == d.root && it->tag == t) ? out.edges.erase(it) : std::next(it);
    for (auto o : d.terminals(e)) out.edges.insert(Edge{d.root, t, o});
    if (!fresh.empty()) out.edges.insert(Edge{d.root, t, fresh.back()});
    return out;
}

inline std::string to_text(const State& s) {
    std::string out;
    for (const auto& [k, v] : s.transitions)
        out += (out.empty() ? "" : ", ") + std::to_string(k.first) + "." + k.second.str() + "->" +
               std::to_string(v);
    return "[" + out + "]";
}

} // namespace alias

#endif
