// frames.hpp
//
// Frame inference and modifies-clause checking on top of the change rules.

#ifndef ALIAS_FRAMES_HPP
#define ALIAS_FRAMES_HPP

#include "alias/calculus.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace alias {

inline Outcome analyze_change(Analyzer& a, const AliasRelation& r, const Instruction& i,
                              const std::string& owner) {
    return a.step(r, i, owner);
}

struct InferredFrame {
    std::string routine;              // Class.name
    ChangeSet changes;                // caller-visible expressions
    std::set<Tag> attributes;         // projected to the root attribute
    ExprSet argument_changes;         // formal-rooted entries
    bool widened = false;             // includes_top forced "every attribute"
};

/// Runs every routine from a fresh activation and keeps the expressions a
/// caller can observe: Current-rooted attribute paths and formal-rooted ones.
inline InferredFrame infer_frame(Analyzer& a, const Routine& f) {
    InferredFrame out;
    out.routine = f.qualified_name();
    auto raw = a.analyze_entry(f).changes;
    std::set<Tag> formals(f.formals.begin(), f.formals.end());
    const auto& attrs = a.attributes();
    out.changes.includes_top = raw.includes_top;
    for (const auto& e : raw.expressions) {
        if (e.is_current() || e.starts_negative()) continue;
        if (formals.count(e.front())) {
            // a bare formal is never assigned; x.u is an argument side effect
            if (e.size() > 1) {
                out.changes.expressions.insert(e);
                out.argument_changes.insert(e);
            }
        } else if (attrs.count(e.front())) {
            out.changes.expressions.insert(e);
            out.attributes.insert(e.front());
        }
    }
    if (raw.includes_top) {
        out.widened = true;
        if (const auto* c = a.program().find_class(f.owner))
            out.attributes.insert(c->attributes.begin(), c->attributes.end());
    }
    return out;
}

/// Frames of every routine, keyed by qualified name.
inline std::map<std::string, InferredFrame> infer_frames(Analyzer& a) {
    std::map<std::string, InferredFrame> out;
    for (const Routine* f : a.program().routines()) out.emplace(f->qualified_name(), infer_frame(a, *f));
    return out;
}

struct FrameFinding {
    enum class Kind { Verified, MissingModifies, UnnecessaryModifies, NoClause };
    std::string class_name;
    std::string routine;
    Kind kind;
    std::vector<std::string> witnesses;  // sorted by name
};

inline const char* kind_name(FrameFinding::Kind k) {
    switch (k) {
    case FrameFinding::Kind::Verified: return "Verified";
    case FrameFinding::Kind::MissingModifies: return "MissingModifies";
    case FrameFinding::Kind::UnnecessaryModifies: return "UnnecessaryModifies";
    case FrameFinding::Kind::NoClause: return "NoClause";
    }
    return "?";
}

namespace detail {
inline std::vector<std::string> names_of(const std::set<Tag>& tags) {
    std::vector<std::string> v;
    for (Tag t : tags) v.push_back(t.str());
    std::sort(v.begin(), v.end());
    return v;
}
} // namespace detail

/// Compares inferred attribute-level changes with declared clauses. A routine
/// can be both missing and over-declaring; each gets its own finding.
inline std::vector<FrameFinding> check_frames(Analyzer& a) {
    std::vector<FrameFinding> out;
    std::vector<const Routine*> order = a.program().routines();
    std::sort(order.begin(), order.end(), [](const Routine* x, const Routine* y) {
        return std::tie(x->owner, x->name) < std::tie(y->owner, y->name);
    });
    for (const Routine* f : order) {
        auto frame = infer_frame(a, *f);
        if (!f->declared_modifies) {
            out.push_back({f->owner, f->name, FrameFinding::Kind::NoClause,
                           detail::names_of(frame.attributes)});
            continue;
        }
        const auto& declared = *f->declared_modifies;
        std::set<Tag> missing, extra;
        std::set_difference(frame.attributes.begin(), frame.attributes.end(), declared.begin(),
                            declared.end(), std::inserter(missing, missing.end()));
        std::set_difference(declared.begin(), declared.end(), frame.attributes.begin(),
                            frame.attributes.end(), std::inserter(extra, extra.end()));
        if (!missing.empty())
            out.push_back({f->owner, f->name, FrameFinding::Kind::MissingModifies,
                           detail::names_of(missing)});
        if (!extra.empty())
            out.push_back({f->owner, f->name, FrameFinding::Kind::UnnecessaryModifies,
                           detail::names_of(extra)});
        if (missing.empty() && extra.empty())
            out.push_back({f->owner, f->name, FrameFinding::Kind::Verified, {}});
    }
    return out;
}

} // namespace alias

#endif
