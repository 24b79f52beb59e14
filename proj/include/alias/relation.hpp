// relation.hpp
//
// Alias relations: finite symmetric irreflexive sets of expression pairs plus
// a "top" class of expressions that may be aliased to anything. Expressions
// longer than the cutoff are never stored; a pair that would mention one
// folds its other member into the top class.

#ifndef ALIAS_RELATION_HPP
#define ALIAS_RELATION_HPP

#include "alias/expression.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alias {

using ExprSet = std::set<Expression>;
using ExprPair = std::pair<Expression, Expression>;

class AliasRelation {
public:
    using AttributeSet = std::shared_ptr<const std::set<Tag>>;

    explicit AliasRelation(std::size_t cutoff = 4, AttributeSet attributes = nullptr)
        : cutoff_(cutoff), attrs_(std::move(attributes)) {
        if (cutoff == 0) throw std::invalid_argument("cutoff must be positive");
    }

    std::size_t cutoff() const { return cutoff_; }
    const AttributeSet& attribute_set() const { return attrs_; }
    bool too_long(const Expression& e) const { return e.length() > cutoff_; }

    /// Can w extend a pair? Only attribute tags may; without a known attribute
    /// set any positive tag is accepted.
    bool extends_by(std::span<const Tag> w) const {
        for (Tag t : w)
            if (t.negative() || (attrs_ && !attrs_->count(t))) return false;
        return true;
    }

    bool empty() const { return adj_.empty() && top_.empty(); }
    std::size_t pair_count() const {
        std::size_t n = 0;
        for (const auto& [_, s] : adj_) n += s.size();
        return n / 2;
    }

    /// Stored generator pair, no suffix reasoning.
    bool has_pair(const Expression& a, const Expression& b) const {
        auto it = adj_.find(a);
        return it != adj_.end() && it->second.count(b) != 0;
    }

    /// [a, b] = [p.w, q.w] for a stored [p, q] and an attribute string w.
    bool implies(const Expression& a, const Expression& b) const {
        if (a == b) return false;
        for (std::size_t k = 0; k <= std::min(a.size(), b.size()); ++k) {
            if (k > 0 && a[a.size() - k] != b[b.size() - k]) break;
            if (!extends_by(a.tags().subspan(a.size() - k))) break;
            if (has_pair(a.prefix(a.size() - k), b.prefix(b.size() - k))) return true;
        }
        return false;
    }

    /// Too long, an extension of an explicit top member, or the short side of
    /// a pair whose other side has been extended past the cutoff.
    bool is_top(const Expression& e) const {
        if (too_long(e)) return true;
        for (std::size_t k = e.size() + 1; k-- > 0;) {
            auto rest = e.tags().subspan(k);
            if (!extends_by(rest)) break;
            auto g = e.prefix(k);
            if (top_.count(g)) return true;
            if (rest.empty()) continue;
            for (const auto& p : partners(g))
                if (p.length() + rest.size() > cutoff_) return true;
        }
        return false;
    }

    /// Is some expression shorter than the cutoff in the top class?
    bool has_short_top() const {
        for (const auto& e : top_)
            if (e.length() < cutoff_) return true;
        for (const auto& [a, s] : adj_)
            for (const auto& b : s)
                if (a.length() >= b.length() + 2) return true;
        return false;
    }

    bool aliased(const Expression& a, const Expression& b) const {
        return a != b && (is_top(a) || is_top(b) || implies(a, b));
    }

    const ExprSet& partners(const Expression& e) const {
        static const ExprSet none;
        auto it = adj_.find(e);
        return it == adj_.end() ? none : it->second;
    }
    const ExprSet& top() const { return top_; }
    const std::map<Expression, ExprSet>& adjacency() const { return adj_; }

    /// Stored pairs, each once with first < second.
    std::vector<ExprPair> pairs() const {
        std::vector<ExprPair> out;
        for (const auto& [a, s] : adj_)
            for (const auto& b : s)
                if (a < b) out.emplace_back(a, b);
        return out;
    }

    /// Adds [a, b] unless already implied; stored pairs it implies are dropped.
    /// Returns true when the relation grew.
    bool insert(const Expression& a, const Expression& b) {
        if (a == b) return false;
        bool la = too_long(a), lb = too_long(b);
        if (la && lb) return false;
        if (la) return mark_top(b);
        if (lb) return mark_top(a);
        if ((covered_by_top(a) && covered_by_top(b)) || implies(a, b)) return false;
        std::vector<ExprPair> redundant;
        for_each_with_prefix(a, [&](const Expression& e, const ExprSet& vs) {
            if (e.size() == a.size() || !extends_by(e.tags().subspan(a.size()))) return;
            auto mate = b.dot(e.suffix_from(a.size()));
            if (vs.count(mate)) redundant.emplace_back(e, mate);
        });
        for (const auto& [x, y] : redundant) erase_pair(x, y);
        adj_[a].insert(b);
        adj_[b].insert(a);
        return true;
    }

    /// Too long, or an attribute extension of an explicit top member. Unlike
    /// the implicit top of is_top this only goes away with the member itself.
    bool covered_by_top(const Expression& e) const {
        if (too_long(e)) return true;
        for (std::size_t k = e.size() + 1; k-- > 0;) {
            if (!extends_by(e.tags().subspan(k))) break;
            if (top_.count(e.prefix(k))) return true;
        }
        return false;
    }

    /// Adds e to the top class. Top members it covers are dropped, and so are
    /// pairs it leaves covered on both sides. A pair covered on one side stays,
    /// since a later cycle through it can still fold the other side.
    bool mark_top(const Expression& e) {
        if (covered_by_top(e)) return false;
        for (auto it = top_.lower_bound(e); it != top_.end() && it->starts_with(e);)
            it = extends_by(it->tags().subspan(e.size())) ? top_.erase(it) : std::next(it);
        top_.insert(e);
        std::vector<ExprPair> covered;
        for_each_with_prefix(e, [&](const Expression& x, const ExprSet& vs) {
            if (!extends_by(x.tags().subspan(e.size()))) return;
            for (const auto& v : vs)
                if (covered_by_top(v)) covered.emplace_back(x, v);
        });
        for (const auto& [x, v] : covered) erase_pair(x, v);
        return true;
    }

    void erase_top(const Expression& e) { top_.erase(e); }

    void erase_pair(const Expression& a, const Expression& b) {
        auto drop = [&](const Expression& x, const Expression& y) {
            auto it = adj_.find(x);
            if (it == adj_.end()) return;
            it->second.erase(y);
            if (it->second.empty()) adj_.erase(it);
        };
        drop(a, b);
        drop(b, a);
    }

    /// Removes every stored pair and top entry mentioning an expression matching pred.
    template <typename Pred>
    void erase_if(Pred pred) {
        std::vector<ExprPair> doomed;
        for (const auto& [a, s] : adj_) {
            bool ka = pred(a);
            for (const auto& b : s)
                if (a < b && (ka || pred(b))) doomed.emplace_back(a, b);
        }
        for (const auto& [a, b] : doomed) erase_pair(a, b);
        for (auto it = top_.begin(); it != top_.end();)
            it = pred(*it) ? top_.erase(it) : std::next(it);
    }

    /// Stored expressions having `prefix` as a prefix (a contiguous range).
    template <typename F>
    void for_each_with_prefix(const Expression& prefix, F&& f) const {
        for (auto it = adj_.lower_bound(prefix); it != adj_.end() && it->first.starts_with(prefix);
             ++it)
            f(it->first, it->second);
    }
    template <typename F>
    void for_each_top_with_prefix(const Expression& prefix, F&& f) const {
        for (auto it = top_.lower_bound(prefix); it != top_.end() && it->starts_with(prefix); ++it)
            f(*it);
    }

    /// Every stored pair and top member of *this is an alias or top in other.
    bool subset_of(const AliasRelation& other) const {
        for (const auto& e : top_)
            if (!other.is_top(e)) return false;
        for (const auto& [a, s] : adj_)
            for (const auto& b : s)
                if (a < b && !other.aliased(a, b)) return false;
        return true;
    }

    // Not a full re-closure; only the top rules are applied across the two
    // sides, since a pair one side's top covers is otherwise lost.
    AliasRelation& operator|=(const AliasRelation& o);
    friend AliasRelation operator|(AliasRelation a, const AliasRelation& b) {
        a |= b;
        return a;
    }

    friend bool operator==(const AliasRelation& a, const AliasRelation& b) {
        return a.cutoff_ == b.cutoff_ && a.adj_ == b.adj_ && a.top_ == b.top_;
    }
    friend bool operator<(const AliasRelation& a, const AliasRelation& b) {
        if (a.cutoff_ != b.cutoff_) return a.cutoff_ < b.cutoff_;
        if (a.adj_ != b.adj_) return a.adj_ < b.adj_;
        return a.top_ < b.top_;
    }

private:
    std::size_t cutoff_;
    AttributeSet attrs_;
    std::map<Expression, ExprSet> adj_;
    ExprSet top_;
};

inline AliasRelation make_relation(std::initializer_list<std::pair<const char*, const char*>> ps,
                                   std::size_t cutoff = 4,
                                   AliasRelation::AttributeSet attributes = nullptr) {
    AliasRelation r(cutoff, std::move(attributes));
    for (const auto& [a, b] : ps) r.insert(Expression::parse(a), Expression::parse(b));
    return r;
}

/// r/e: e itself and every expression r aliases to it through a stored pair.
/// `all` is set when e is in the top class and is therefore aliased to
/// everything; top members are not listed, being aliased to anything anyway.
struct AliasSet {
    ExprSet members;
    bool all = false;
};

inline AliasSet aliases_of(const AliasRelation& r, const Expression& e) {
    AliasSet s;
    s.all = r.is_top(e);
    if (!r.too_long(e)) s.members.insert(e);
    for (std::size_t k = e.size() + 1; k-- > 0;) {
        auto rest = e.suffix_from(k);
        if (!r.extends_by(rest.tags())) break;
        for (const auto& q : r.partners(e.prefix(k))) {
            auto v = q.dot(rest);
            if (!r.too_long(v)) s.members.insert(std::move(v));
        }
    }
    return s;
}

/// How far `r - x` reaches. Rooted removes only pairs whose member starts with
/// x. CurrentAliases also removes e0.x.e for every e0 aliased to Current.
enum class MinusScope { Rooted, CurrentAliases };

inline bool minus_matches(const Expression& e, Tag x, const ExprSet& current_aliases,
                          MinusScope scope) {
    if (e.rooted_at(x)) return true;
    if (scope == MinusScope::Rooted) return false;
    for (std::size_t k = 1; k < e.size(); ++k)
        if (e[k] == x && current_aliases.count(e.prefix(k))) return true;
    return false;
}

inline ExprSet current_partners(const AliasRelation& r) {
    auto s = aliases_of(r, Expression::current()).members;
    s.erase(Expression::current());
    return s;
}

inline AliasRelation minus_tag(AliasRelation r, Tag x, MinusScope scope = MinusScope::Rooted) {
    ExprSet cur;
    if (scope == MinusScope::CurrentAliases) cur = current_partners(r);
    r.erase_if([&](const Expression& e) { return minus_matches(e, x, cur, scope); });
    return r;
}

/// Drops [a, b] and every [a.e, b.e]. A shorter stored pair that implies
/// [a, b] is first split into its one-attribute extensions. Top membership is
/// left alone.
inline AliasRelation minus_pair_closure(AliasRelation r, const Expression& a,
                                        const Expression& b) {
    const auto& attrs = r.attribute_set();
    for (bool split = true; split;) {
        split = false;
        for (std::size_t k = 1; k <= std::min(a.size(), b.size()) && !split; ++k) {
            if (a[a.size() - k] != b[b.size() - k]) break;
            if (!r.extends_by(a.tags().subspan(a.size() - k))) break;
            auto p = a.prefix(a.size() - k), q = b.prefix(b.size() - k);
            if (!r.has_pair(p, q)) continue;
            r.erase_pair(p, q);
            if (attrs)
                for (Tag t : *attrs) r.insert(p.dot(t), q.dot(t));
            else
                r.insert(p.dot(a[p.size()]), q.dot(a[p.size()]));
            split = true;
        }
    }
    std::vector<ExprPair> doomed;
    auto collect = [&](const Expression& x, const Expression& y) {
        r.for_each_with_prefix(x, [&](const Expression& e, const ExprSet& ps) {
            auto rest = e.suffix_from(x.size());
            auto mate = y.dot(rest);
            if (ps.count(mate) && r.extends_by(rest.tags())) doomed.emplace_back(e, mate);
        });
    };
    collect(a, b);
    collect(b, a);
    for (const auto& [x, y] : doomed) r.erase_pair(x, y);
    return r;
}

namespace detail {

// Worklist closure of the stored pairs under
//   (i)  [t, u] and [t.w, v]  =>  [u.w, v]
// Rule (ii), [t, u] => [t.a, u.a], holds implicitly through suffix reasoning.
// Top propagation: [t, u] with t.w top => u.w top, and t top => u.a top.
class Closure {
public:
    Closure(AliasRelation& r, const std::set<Tag>& attributes) : r_(r), attrs_(attributes) {}

    void add_pair(const Expression& a, const Expression& b) {
        if (a == b) return;
        bool ta = r_.covered_by_top(a), tb = r_.covered_by_top(b);
        if (ta != tb) {
            // [a, b] with a top: every a.c is aliased to anything, so is b.c.
            const auto& other = ta ? b : a;
            if (r_.too_long(ta ? a : b))
                add_top(other);
            else if (other.size() < (ta ? a : b).size() && (ta ? a : b).starts_with(other) &&
                     r_.extends_by((ta ? a : b).tags().subspan(other.size())))
                add_top(other);  // [t, t.w] chains t to an over-long t.w.w...
            else
                for (Tag c : attrs_) add_top(other.dot(c));
        }
        if (r_.insert(a, b)) pairs_.emplace_back(a, b);
    }

    void add_top(const Expression& e) {
        if (r_.covered_by_top(e)) return;
        // Consequences are read off the pairs before mark_top drops those e covers.
        std::vector<Expression> derived;
        for (std::size_t k = 0; k <= e.size(); ++k) {
            auto w = e.suffix_from(k);
            if (!r_.extends_by(w.tags())) continue;
            for (const auto& u : r_.partners(e.prefix(k))) {
                if (w.is_current())
                    for (Tag a : attrs_) derived.push_back(u.dot(a));
                else
                    derived.push_back(u.dot(w));
            }
        }
        r_.for_each_with_prefix(e, [&](const Expression& x, const ExprSet& vs) {
            if (x.size() == e.size() || !r_.extends_by(x.tags().subspan(e.size()))) return;
            for (const auto& v : vs)
                for (Tag a : attrs_) derived.push_back(v.dot(a));
        });
        r_.mark_top(e);
        for (auto& d : derived) tops_.push_back(std::move(d));
    }

    void seed_all() {
        for (const auto& p : r_.pairs()) pairs_.push_back(p);
        for (const auto& e : r_.top()) retop(e);
    }

    // Pairs already closed together in `base` need no second pass.
    void seed_new(const AliasRelation& base) {
        for (const auto& [a, b] : r_.pairs())
            if (!base.has_pair(a, b)) pairs_.emplace_back(a, b);
        for (const auto& e : r_.top())
            if (!base.top().count(e)) retop(e);
    }

    // Union step: [a, b] is stored without rule (i), but tops covering or
    // extending a member still hand their consequences to the other one.
    void join_pair(const Expression& a, const Expression& b) {
        if (r_.covered_by_top(a) || r_.covered_by_top(b)) {
            add_pair(a, b);
            return;
        }
        if (!r_.insert(a, b)) return;
        for (const auto& [p, q] : {std::pair{a, b}, std::pair{b, a}})
            r_.for_each_top_with_prefix(p, [&](const Expression& e) {
                auto rest = e.suffix_from(p.size());
                if (e.size() != p.size() && r_.extends_by(rest.tags())) tops_.push_back(q.dot(rest));
            });
    }

    // Re-derives the consequences of a member already in the top class.
    void retop(const Expression& e) { pending_retop_.push_back(e); }

    void run() {
        for (const auto& e : pending_retop_) {
            r_.erase_top(e);
            add_top(e);
        }
        pending_retop_.clear();
        while (!pairs_.empty() || !tops_.empty()) {
            if (!pairs_.empty()) {
                auto [a, b] = std::move(pairs_.front());
                pairs_.pop_front();
                if (!r_.has_pair(a, b)) continue;  // superseded by a shorter pair
                on_pair(a, b);
                on_pair(b, a);
            } else {
                auto e = std::move(tops_.front());
                tops_.pop_front();
                add_top(e);
            }
        }
    }

private:
    AliasRelation& r_;
    const std::set<Tag>& attrs_;
    std::deque<ExprPair> pairs_;
    std::deque<Expression> tops_;
    std::vector<Expression> pending_retop_;

    // Handles the stored pair [p, q] with p in the "t" role.
    void on_pair(const Expression& p, const Expression& q) {
        std::vector<ExprPair> derived;
        std::vector<Expression> derived_top;

        // Stored p.w with partner v gives [q.w, v].
        r_.for_each_with_prefix(p, [&](const Expression& e, const ExprSet& vs) {
            if (e.size() == p.size()) return;
            auto rest = e.suffix_from(p.size());
            if (!r_.extends_by(rest.tags())) return;
            auto qw = q.dot(rest);
            for (const auto& v : vs) derived.emplace_back(qw, v);
        });
        r_.for_each_top_with_prefix(p, [&](const Expression& e) {
            auto rest = e.suffix_from(p.size());
            if (e.size() != p.size() && r_.extends_by(rest.tags())) derived_top.push_back(q.dot(rest));
        });

        // [p, v.x'] extended by x is [p.x, v]; the cancellation hides it from
        // suffix matching, so it is stored outright.
        if (!q.is_current() && q.back().negative()) {
            Tag x = q.back().positive();
            if (r_.extends_by(std::span<const Tag>(&x, 1))) derived.emplace_back(p.dot(x), q.dot(x));
        }

        // A proper prefix t of p = t.w hands q to each partner u as [u.w, q].
        for (std::size_t k = 0; k < p.size(); ++k) {
            auto w = p.suffix_from(k);
            if (!r_.extends_by(w.tags())) continue;
            for (const auto& u : r_.partners(p.prefix(k))) derived.emplace_back(u.dot(w), q);
        }
        for (const auto& [x, y] : derived) add_pair(x, y);
        for (const auto& e : derived_top) add_top(e);
    }
};

} // namespace detail

inline AliasRelation& AliasRelation::operator|=(const AliasRelation& o) {
    if (!attrs_) attrs_ = o.attrs_;
    static const std::set<Tag> none;
    detail::Closure c(*this, attrs_ ? *attrs_ : none);
    for (const auto& e : o.top_) c.add_top(e);
    for (const auto& [a, s] : o.adj_)
        for (const auto& b : s)
            if (a < b) c.join_pair(a, b);
    c.run();
    return *this;
}

/// r[x = u]: r plus [x, y] for every y in u, closed under dot-completeness.
inline AliasRelation augment_dot_complete(AliasRelation r, const Expression& x, const ExprSet& u,
                                          const std::set<Tag>& attributes) {
    detail::Closure c(r, attributes);
    for (const auto& y : u) c.add_pair(x, y);
    c.run();
    return r;
}

/// Marks x as aliased to everything, propagating through the closure.
inline AliasRelation augment_top(AliasRelation r, const Expression& x,
                                 const std::set<Tag>& attributes) {
    detail::Closure c(r, attributes);
    c.add_top(x);
    c.run();
    return r;
}

inline AliasRelation dot_complete(AliasRelation r, const std::set<Tag>& attributes) {
    detail::Closure c(r, attributes);
    c.seed_all();
    c.run();
    return r;
}

/// Closes r assuming the pairs it shares with `base` were closed already.
inline AliasRelation dot_complete_from(AliasRelation r, const AliasRelation& base,
                                       const std::set<Tag>& attributes) {
    detail::Closure c(r, attributes);
    c.seed_new(base);
    c.run();
    return r;
}

/// Replaces the longest matching prefix olds[i] of every stored expression by news[i].
inline AliasRelation substitute(const AliasRelation& r, const std::vector<Expression>& olds,
                                const std::vector<Expression>& news) {
    if (olds.size() != news.size())
        throw std::invalid_argument("substitute: old and new lists differ in length");
    auto rename = [&](const Expression& e) {
        std::size_t best = olds.size();
        for (std::size_t i = 0; i < olds.size(); ++i)
            if (e.starts_with(olds[i]) && (best == olds.size() || olds[i].size() > olds[best].size()))
                best = i;
        if (best == olds.size()) return e;
        return news[best].dot(e.suffix_from(olds[best].size()));
    };
    AliasRelation out(r.cutoff(), r.attribute_set());
    for (const auto& [a, b] : r.pairs()) out.insert(rename(a), rename(b));
    for (const auto& e : r.top()) out.mark_top(rename(e));
    return out;
}

enum class Direction { IntoCallee, OutOfCallee };

/// Re-expresses r relative to the target of a qualified call x.f: into the
/// callee every expression e becomes x'.e; out of it, e becomes x.e. Inverse
/// tags cancel at the junction. Leading negative tags are the enclosing
/// callers' view and stay; an expression with a negative tag after a positive
/// one names no object path and is dropped.
inline AliasRelation transpose(const AliasRelation& r, const Expression& x, Direction dir) {
    auto prefix = dir == Direction::IntoCallee ? x.inverse() : x;
    AliasRelation out(r.cutoff(), r.attribute_set());
    auto move = [&](const Expression& e) { return prefix.dot(e); };
    auto visible = [&](const Expression& e) {
        auto tags = e.tags();
        auto first_positive = std::find_if(tags.begin(), tags.end(), [](Tag t) { return !t.negative(); });
        return std::none_of(first_positive, tags.end(), [](Tag t) { return t.negative(); });
    };
    for (const auto& [a, b] : r.pairs()) {
        auto ma = move(a), mb = move(b);
        if (visible(ma) && visible(mb)) out.insert(ma, mb);
    }
    for (const auto& e : r.top()) {
        auto me = move(e);
        if (visible(me)) out.mark_top(me);
    }
    return out;
}

/// Re-bounds r at a new cutoff; over-long members fold into the top class.
inline AliasRelation clamp(const AliasRelation& r, std::size_t cutoff) {
    AliasRelation out(cutoff, r.attribute_set());
    for (const auto& [a, b] : r.pairs()) out.insert(a, b);
    for (const auto& e : r.top()) out.mark_top(e);
    return out;
}

/// Canonical grouped form: the maximal cliques of the pair graph. Each group
/// is sorted by text; groups are ordered by their member lists.
inline std::vector<std::vector<Expression>> canonicalize(const AliasRelation& r) {
    using Group = std::vector<Expression>;
    std::vector<Group> cliques;
    // Pairs under the top class add nothing to the meaning and are left out.
    std::map<Expression, ExprSet> adj;
    for (const auto& [a, s] : r.adjacency()) {
        if (r.covered_by_top(a)) continue;
        for (const auto& b : s)
            if (!r.covered_by_top(b)) adj[a].insert(b);
    }

    // Bron-Kerbosch with pivoting.
    auto bk = [&](auto&& self, ExprSet R, ExprSet P, ExprSet X) -> void {
        if (P.empty() && X.empty()) {
            if (R.size() >= 2) cliques.emplace_back(R.begin(), R.end());
            return;
        }
        const Expression* pivot = nullptr;
        std::size_t best = 0;
        for (const auto* pool : {&P, &X})
            for (const auto& u : *pool) {
                std::size_t n = 0;
                for (const auto& v : adj.at(u)) n += P.count(v);
                if (!pivot || n > best) {
                    pivot = &u;
                    best = n;
                }
            }
        const auto& pn = adj.at(*pivot);
        std::vector<Expression> candidates;
        for (const auto& v : P)
            if (!pn.count(v)) candidates.push_back(v);
        for (const auto& v : candidates) {
            const auto& nv = adj.at(v);
            ExprSet R2 = R, P2, X2;
            R2.insert(v);
            for (const auto& w : P)
                if (nv.count(w)) P2.insert(w);
            for (const auto& w : X)
                if (nv.count(w)) X2.insert(w);
            self(self, std::move(R2), std::move(P2), std::move(X2));
            P.erase(v);
            X.insert(v);
        }
    };
    ExprSet all;
    for (const auto& [e, _] : adj) all.insert(e);
    bk(bk, {}, all, {});

    for (auto& g : cliques) std::sort(g.begin(), g.end(), TextOrder{});
    std::sort(cliques.begin(), cliques.end(), [](const Group& a, const Group& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), TextOrder{});
    });
    return cliques;
}

inline std::vector<Expression> sorted_text(const ExprSet& s) {
    std::vector<Expression> v(s.begin(), s.end());
    std::sort(v.begin(), v.end(), TextOrder{});
    return v;
}

/// "{x, y} {x, z}"; the top class, when present, follows as "top {a, b}".
inline std::string to_text(const AliasRelation& r) {
    std::string out;
    auto group = [](const std::vector<Expression>& g) {
        std::string s = "{";
        for (std::size_t i = 0; i < g.size(); ++i) s += (i ? ", " : "") + g[i].str();
        return s + "}";
    };
    for (const auto& g : canonicalize(r)) out += (out.empty() ? "" : " ") + group(g);
    if (!r.top().empty()) out += (out.empty() ? "top " : " top ") + group(sorted_text(r.top()));
    return out.empty() ? "{}" : out;
}

} // namespace alias

#endif
