// Helpers shared by the test binaries.

#pragma once

#include "alias/calculus.hpp"
#include "alias/parser.hpp"

#include <memory>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace testing_support {

using namespace alias;

inline Expression E(const char* s) { return Expression::parse(s); }

inline AliasRelation::AttributeSet attrs(std::initializer_list<const char*> names) {
    std::set<Tag> s;
    for (const char* n : names) s.insert(Tag(n));
    return std::make_shared<const std::set<Tag>>(std::move(s));
}

// Every expression of length <= cutoff over heads followed by attributes,
// Current included.
inline std::vector<Expression> paths(const std::vector<Tag>& heads, const std::set<Tag>& attributes,
                                     std::size_t cutoff) {
    std::vector<Expression> out{Expression::current()};
    std::vector<Expression> level;
    for (Tag h : heads) level.push_back(Expression{h});
    for (std::size_t n = 1; n <= cutoff; ++n) {
        out.insert(out.end(), level.begin(), level.end());
        std::vector<Expression> next;
        for (const auto& e : level)
            for (Tag a : attributes) next.push_back(e.dot(a));
        level = std::move(next);
    }
    return out;
}

// The relation as a plain set of unordered pairs over a finite universe.
inline std::set<std::pair<Expression, Expression>> meaning(const AliasRelation& r,
                                                           const std::vector<Expression>& universe) {
    std::set<std::pair<Expression, Expression>> out;
    for (std::size_t i = 0; i < universe.size(); ++i)
        for (std::size_t j = i + 1; j < universe.size(); ++j)
            if (r.aliased(universe[i], universe[j]))
                out.emplace(std::min(universe[i], universe[j]), std::max(universe[i], universe[j]));
    return out;
}

inline bool includes(const std::set<std::pair<Expression, Expression>>& big,
                     const std::set<std::pair<Expression, Expression>>& small) {
    for (const auto& p : small)
        if (!big.count(p)) return false;
    return true;
}

// Random relation over heads/attributes with short members.
inline AliasRelation random_relation(std::mt19937_64& rng, const std::vector<Tag>& heads,
                                     const std::set<Tag>& attributes, std::size_t cutoff,
                                     std::size_t pairs, std::size_t max_len = 2) {
    auto pool = paths(heads, attributes, std::min(cutoff, max_len));
    AliasRelation r(cutoff, std::make_shared<const std::set<Tag>>(attributes));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t k = 0; k < pairs; ++k) r.insert(pool[pick(rng)], pool[pick(rng)]);
    return dot_complete(std::move(r), attributes);
}

// Structural comparison of instruction trees, independent of the printer.
inline bool same(const Instruction& a, const Instruction& b);

inline bool same(const InstructionPtr& a, const InstructionPtr& b) { return same(*a, *b); }

inline bool same(const Instruction& a, const Instruction& b) {
    if (a.kind.index() != b.kind.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using N = std::decay_t<decltype(x)>;
            const auto& y = std::get<N>(b.kind);
            if constexpr (std::is_same_v<N, Assign>) return x.target == y.target && x.source == y.source;
            else if constexpr (std::is_same_v<N, Create> || std::is_same_v<N, Forget>)
                return x.target == y.target;
            else if constexpr (std::is_same_v<N, Cut> || std::is_same_v<N, Bind>)
                return x.a == y.a && x.b == y.b;
            else if constexpr (std::is_same_v<N, Seq>) {
                if (x.body.size() != y.body.size()) return false;
                for (std::size_t i = 0; i < x.body.size(); ++i)
                    if (!same(x.body[i], y.body[i])) return false;
                return true;
            } else if constexpr (std::is_same_v<N, Choice>)
                return same(x.then_body, y.then_body) && same(x.else_body, y.else_body);
            else if constexpr (std::is_same_v<N, Loop>) return same(x.body, y.body);
            else if constexpr (std::is_same_v<N, Call>)
                return x.routine == y.routine && x.actuals == y.actuals;
            else
                return x.target == y.target && x.routine == y.routine && x.actuals == y.actuals;
        },
        a.kind);
}

inline bool same(const Program& a, const Program& b) {
    if (a.classes.size() != b.classes.size()) return false;
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
        const auto &x = a.classes[i], &y = b.classes[i];
        if (x.name != y.name || x.attributes != y.attributes || x.routines.size() != y.routines.size())
            return false;
        for (const auto& [name, r] : x.routines) {
            auto it = y.routines.find(name);
            if (it == y.routines.end()) return false;
            const auto& s = it->second;
            if (r.formals != s.formals || r.locals != s.locals ||
                r.declared_modifies != s.declared_modifies || !same(r.body, s.body))
                return false;
        }
    }
    return true;
}

} // namespace testing_support
