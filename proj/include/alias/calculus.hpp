// calculus.hpp
//
// Transfer functions r >> p for every instruction kind. Each step returns the
// relation after the instruction together with the set of expressions the
// instruction may change, since loops and calls need both in lockstep.

#ifndef ALIAS_CALCULUS_HPP
#define ALIAS_CALCULUS_HPP

#include "alias/change.hpp"
#include "alias/program.hpp"
#include "alias/relation.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alias {

enum class AssignmentRule {
    OldValue,  // uses a fresh tag for the old target value
    Naive,     // removes the target first, then copies the source's aliases
};

struct AnalysisOptions {
    std::size_t cutoff = 4;
    MinusScope minus_scope = MinusScope::Rooted;
    AssignmentRule assignment = AssignmentRule::OldValue;
    std::size_t loop_safety_valve = 1'000'000;
    bool use_cache = true;
};

struct Diagnostic {
    enum class Severity { Note, Warning } severity;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct Outcome {
    AliasRelation relation;
    ChangeSet changes;
};

struct AnalysisStats {
    std::size_t max_loop_iterations = 0;
    std::size_t loops_analyzed = 0;
    std::size_t cache_hits = 0;
    std::size_t recursion_widenings = 0;
    std::size_t safety_valve_trips = 0;
};

class LoopDivergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Analyzer {
public:
    Analyzer(const Program& program, AnalysisOptions options = {})
        : program_(program),
          options_(options),
          attributes_(program.attributes()),
          attribute_ptr_(std::make_shared<const std::set<Tag>>(attributes_)) {}

    const Program& program() const { return program_; }
    const AnalysisOptions& options() const { return options_; }
    const std::set<Tag>& attributes() const { return attributes_; }
    const AnalysisStats& stats() const { return stats_; }
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

    AliasRelation empty_relation() const { return AliasRelation(options_.cutoff, attribute_ptr_); }

    /// Analyzes the body of an entry routine from the empty relation. Its
    /// locals and formals stay visible in the result.
    Outcome analyze_entry(const Routine& routine) {
        return step(empty_relation(), *routine.body, routine.owner);
    }

    Outcome step(const AliasRelation& r, const Instruction& i, const std::string& owner) {
        return std::visit([&](const auto& n) { return dispatch(r, n, owner); }, i.kind);
    }

    AliasRelation apply(const AliasRelation& r, const Instruction& i,
                        const std::string& owner) {
        return step(r, i, owner).relation;
    }

    // Per-kind rules, public so they can be exercised one at a time.

    AliasRelation apply_assign(const AliasRelation& r, Tag t, const Expression& s) const {
        if (options_.assignment == AssignmentRule::Naive) {
            auto r1 = minus_tag(r, t, options_.minus_scope);
            auto src = without_target(aliases_of(r1, s), t, r1);
            return bind_target(std::move(r1), t, src);
        }
        static const Tag old_value("$ot");
        // r1 = r[ot = t]; result = (r1 - t)[t = (r1 / s) - t] - ot
        auto r1 = augment_dot_complete(r, Expression{old_value}, {Expression{t}}, attributes_);
        auto src = without_target(aliases_of(r1, s), t, r1);
        auto r2 = bind_target(minus_tag(r1, t, options_.minus_scope), t, src);
        return minus_tag(std::move(r2), old_value, MinusScope::Rooted);
    }

    AliasRelation apply_create_forget(const AliasRelation& r, Tag x) const {
        return minus_tag(r, x, options_.minus_scope);
    }

    AliasRelation apply_cut(const AliasRelation& r, const Expression& a, const Expression& b) {
        if (r.is_top(a) || r.is_top(b))
            note(Diagnostic::Severity::Warning,
                 "cut " + a.str() + ", " + b.str() + " involves a top-class expression; "
                 "top membership is kept");
        return minus_pair_closure(r, a, b);
    }

    AliasRelation apply_bind(const AliasRelation& r, const Expression& a,
                             const Expression& b) const {
        return augment_dot_complete(r, a, {b}, attributes_);
    }

    Outcome apply_choice(const AliasRelation& r, const Instruction& then_body,
                         const Instruction& else_body, const std::string& owner) {
        auto a = step(r, then_body, owner);
        auto b = step(r, else_body, owner);
        a.relation |= b.relation;
        a.changes |= b.changes;
        return a;
    }

    /// t0 = r, t(n+1) = tn | (tn >> body), iterated until nothing grows.
    Outcome apply_loop(const AliasRelation& r, const Instruction& body, const std::string& owner) {
        Outcome acc{r, {}};
        std::size_t iterations = 0;
        for (;;) {
            if (++iterations > options_.loop_safety_valve) {
                ++stats_.safety_valve_trips;
                throw LoopDivergence("loop fixpoint did not converge within " +
                                     std::to_string(options_.loop_safety_valve) + " iterations");
            }
            auto next = step(acc.relation, body, owner);
            auto grown = acc.relation | next.relation;
            auto changes = acc.changes;
            changes |= next.changes;
            if (grown == acc.relation && changes == acc.changes) break;
            acc.relation = std::move(grown);
            acc.changes = std::move(changes);
        }
        ++stats_.loops_analyzed;
        stats_.max_loop_iterations = std::max(stats_.max_loop_iterations, iterations);
        return acc;
    }

    /// Formals are bound like assignments from the actuals, the body runs,
    /// and formals and locals are forgotten on exit.
    Outcome apply_call(const AliasRelation& r, const Routine& f,
                       const std::vector<Expression>& actuals) {
        if (actuals.size() != f.formals.size())
            throw ProgramError("call to " + f.qualified_name() + " passes " +
                               std::to_string(actuals.size()) + " arguments, expected " +
                               std::to_string(f.formals.size()));
        std::set<Tag> frame(f.formals.begin(), f.formals.end());
        frame.insert(f.locals.begin(), f.locals.end());

        auto bound = r;
        for (Tag l : f.locals) bound = minus_tag(std::move(bound), l, MinusScope::Rooted);
        bool clash = std::any_of(actuals.begin(), actuals.end(), [&](const Expression& a) {
            return !a.is_current() && frame.count(a.front());
        });
        if (clash) {
            // Recursive call passing its own frame: go through temporaries so
            // every actual is read before any formal is overwritten.
            std::vector<Tag> temps;
            for (std::size_t k = 0; k < actuals.size(); ++k) {
                temps.emplace_back("$arg" + std::to_string(k));
                bound = apply_assign(bound, temps.back(), actuals[k]);
            }
            for (std::size_t k = 0; k < actuals.size(); ++k)
                bound = apply_assign(bound, f.formals[k], Expression{temps[k]});
            for (Tag t : temps) bound = minus_tag(std::move(bound), t, MinusScope::Rooted);
        } else {
            for (std::size_t k = 0; k < actuals.size(); ++k)
                bound = apply_assign(bound, f.formals[k], actuals[k]);
        }

        auto key = std::make_pair(f.qualified_name(), bound);
        if (options_.use_cache) {
            std::lock_guard lock(cache_mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) {
                ++stats_.cache_hits;
                return it->second;
            }
        }

        Outcome out;
        if (std::find(stack_.begin(), stack_.end(), key) != stack_.end()) {
            out = widen(bound);
            ++stats_.recursion_widenings;
            note(Diagnostic::Severity::Warning,
                 "recursive call to " + f.qualified_name() + " widened to the top class");
        } else {
            stack_.push_back(key);
            try {
                out = step(bound, *f.body, f.owner);
            } catch (...) {
                stack_.pop_back();
                throw;
            }
            stack_.pop_back();
        }
        for (Tag t : frame) out.relation = minus_tag(std::move(out.relation), t, MinusScope::Rooted);
        out.changes = without_roots(std::move(out.changes), frame);

        if (options_.use_cache) {
            std::lock_guard lock(cache_mutex_);
            cache_.emplace(std::move(key), out);
        }
        return out;
    }

    /// r >> x.f(l) = x.((x'.r) >> f(x'.l))
    Outcome apply_qualified_call(const AliasRelation& r, const Expression& x, const Routine& f,
                                 const std::vector<Expression>& actuals) {
        auto inv = x.inverse();
        std::vector<Expression> moved;
        moved.reserve(actuals.size());
        for (const auto& a : actuals) moved.push_back(inv.dot(a));
        auto inner = apply_call(transpose(r, x, Direction::IntoCallee), f, moved);
        Outcome out;
        // Back in the caller, pairs with Current aliases need re-closing.
        out.relation = dot_complete_from(transpose(inner.relation, x, Direction::OutOfCallee), r,
                                         attributes_);
        out.changes = change_of_qualified_call(r, x, inner.changes);
        return out;
    }

private:
    const Program& program_;
    AnalysisOptions options_;
    std::set<Tag> attributes_;
    AliasRelation::AttributeSet attribute_ptr_;
    AnalysisStats stats_;
    std::vector<Diagnostic> diagnostics_;
    using CacheKey = std::pair<std::string, AliasRelation>;
    std::vector<CacheKey> stack_;
    std::map<CacheKey, Outcome> cache_;
    std::mutex cache_mutex_;

    void note(Diagnostic::Severity s, std::string msg) {
        Diagnostic d{s, std::move(msg)};
        if (std::find(diagnostics_.begin(), diagnostics_.end(), d) == diagnostics_.end())
            diagnostics_.push_back(std::move(d));
    }

    // (r / s) - t, where "- t" drops expressions the minus operator would drop.
    AliasSet without_target(AliasSet s, Tag t, const AliasRelation& r) const {
        ExprSet cur;
        if (options_.minus_scope == MinusScope::CurrentAliases) cur = current_partners(r);
        for (auto it = s.members.begin(); it != s.members.end();)
            it = minus_matches(*it, t, cur, options_.minus_scope) ? s.members.erase(it)
                                                                  : std::next(it);
        return s;
    }

    AliasRelation bind_target(AliasRelation r, Tag t, const AliasSet& src) const {
        r = augment_dot_complete(std::move(r), Expression{t}, src.members, attributes_);
        if (src.all) r = augment_top(std::move(r), Expression{t}, attributes_);
        return r;
    }

    // Conservative summary for a recursive activation: every field reachable
    // from a tracked expression may now point anywhere.
    Outcome widen(const AliasRelation& r) const {
        Outcome out{r, {}};
        ExprSet roots{Expression::current()};
        for (const auto& [e, _] : r.adjacency()) roots.insert(e);
        roots.insert(r.top().begin(), r.top().end());
        for (const auto& e : roots)
            for (Tag a : attributes_) out.relation = augment_top(std::move(out.relation), e.dot(a), attributes_);
        out.changes.includes_top = true;
        return out;
    }

    Outcome dispatch(const AliasRelation& r, const Assign& n, const std::string&) {
        return {apply_assign(r, n.target, n.source), change_of_target(r, n.target, attributes_.count(n.target) > 0)};
    }
    Outcome dispatch(const AliasRelation& r, const Create& n, const std::string&) {
        return {apply_create_forget(r, n.target), change_of_target(r, n.target, attributes_.count(n.target) > 0)};
    }
    Outcome dispatch(const AliasRelation& r, const Forget& n, const std::string&) {
        return {apply_create_forget(r, n.target), change_of_target(r, n.target, attributes_.count(n.target) > 0)};
    }
    Outcome dispatch(const AliasRelation& r, const Cut& n, const std::string&) {
        return {apply_cut(r, n.a, n.b), {}};
    }
    Outcome dispatch(const AliasRelation& r, const Bind& n, const std::string&) {
        return {apply_bind(r, n.a, n.b), {}};
    }
    Outcome dispatch(const AliasRelation& r, const Seq& n, const std::string& owner) {
        Outcome acc{r, {}};
        for (const auto& s : n.body) {
            auto next = step(acc.relation, *s, owner);
            acc.relation = std::move(next.relation);
            acc.changes |= next.changes;
        }
        return acc;
    }
    Outcome dispatch(const AliasRelation& r, const Choice& n, const std::string& owner) {
        return apply_choice(r, *n.then_body, *n.else_body, owner);
    }
    Outcome dispatch(const AliasRelation& r, const Loop& n, const std::string& owner) {
        return apply_loop(r, *n.body, owner);
    }
    Outcome dispatch(const AliasRelation& r, const Call& n, const std::string& owner) {
        return apply_call(r, program_.resolve(owner, n.routine), n.actuals);
    }
    Outcome dispatch(const AliasRelation& r, const QualifiedCall& n, const std::string&) {
        return apply_qualified_call(r, n.target, program_.resolve_qualified(n.routine), n.actuals);
    }
};

} // namespace alias

#endif
