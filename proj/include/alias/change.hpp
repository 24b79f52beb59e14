// change.hpp
//
// May-change sets. An entry p.t records that the t field of the object
// denoted by p may be overwritten; every expression extending p.t may then
// change value as well.

#ifndef ALIAS_CHANGE_HPP
#define ALIAS_CHANGE_HPP

#include "alias/relation.hpp"

#include <set>

namespace alias {

struct ChangeSet {
    ExprSet expressions;
    bool includes_top = false;

    bool empty() const { return expressions.empty() && !includes_top; }

    void add(const Expression& e, std::size_t cutoff) {
        // Entries beyond the cutoff only concern expressions nobody tracks.
        if (e.length() <= cutoff) expressions.insert(e);
    }

    ChangeSet& operator|=(const ChangeSet& o) {
        expressions.insert(o.expressions.begin(), o.expressions.end());
        includes_top = includes_top || o.includes_top;
        return *this;
    }

    /// True when e, or one of its non-empty prefixes, may have changed.
    bool covers(const Expression& e) const {
        if (includes_top) return true;
        for (std::size_t k = 1; k <= e.size(); ++k)
            if (expressions.count(e.prefix(k))) return true;
        return false;
    }

    bool subset_of(const ChangeSet& o) const {
        if (includes_top && !o.includes_top) return false;
        for (const auto& e : expressions)
            if (!o.covers(e)) return false;
        return true;
    }

    friend bool operator==(const ChangeSet&, const ChangeSet&) = default;
};

/// Overwriting field t of Current changes c.t for every alias c of Current.
/// A local or formal only ever heads a path, so there t alone changes.
inline ChangeSet change_of_target(const AliasRelation& r, Tag t, bool attribute = true) {
    ChangeSet cs;
    if (!attribute) {
        cs.add(Expression{t}, r.cutoff());
        return cs;
    }
    auto cur = aliases_of(r, Expression::current());
    // Current may be any top member g, and then g.t changes too.
    cs.includes_top = cur.all || r.has_short_top();
    for (const auto& c : cur.members) cs.add(c.dot(t), r.cutoff());
    return cs;
}

/// A qualified call x.f changes y.u for every alias y of x and every u the
/// callee changes. Callee entries that refer back to the caller (negative
/// prefix) are translated through x and kept if they cancel.
inline ChangeSet change_of_qualified_call(const AliasRelation& r, const Expression& x,
                                          const ChangeSet& callee) {
    ChangeSet cs;
    auto targets = aliases_of(r, x);
    cs.includes_top = callee.includes_top ||
                      ((targets.all || r.has_short_top()) && !callee.expressions.empty());
    for (const auto& u : callee.expressions) {
        if (u.starts_negative()) {
            auto back = x.dot(u);
            if (!back.has_negative()) cs.add(back, r.cutoff());
            continue;
        }
        for (const auto& y : targets.members) cs.add(y.dot(u), r.cutoff());
    }
    return cs;
}

/// Drops entries rooted at tags that do not outlive a routine activation.
inline ChangeSet without_roots(ChangeSet cs, const std::set<Tag>& roots) {
    for (auto it = cs.expressions.begin(); it != cs.expressions.end();)
        it = (!it->is_current() && roots.count(it->front())) ? cs.expressions.erase(it)
                                                             : std::next(it);
    return cs;
}

} // namespace alias

#endif
