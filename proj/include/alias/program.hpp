// program.hpp
//
// Program model of the analyzed mini-language: classes, attributes, routines
// and a guard-free instruction tree.

#ifndef ALIAS_PROGRAM_HPP
#define ALIAS_PROGRAM_HPP

#include "alias/expression.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace alias {

struct Instruction;
using InstructionPtr = std::shared_ptr<const Instruction>;

struct Assign {
    Tag target;
    Expression source;
};
struct Create {
    Tag target;
};
struct Forget {
    Tag target;
};
struct Cut {
    Expression a, b;
};
struct Bind {
    Expression a, b;
};
struct Seq {
    std::vector<InstructionPtr> body;
};
struct Choice {
    InstructionPtr then_body, else_body;
};
struct Loop {
    InstructionPtr body;
};
struct Call {
    std::string routine;
    std::vector<Expression> actuals;
};
struct QualifiedCall {
    Expression target;
    std::string routine;
    std::vector<Expression> actuals;
};

struct Instruction {
    using Kind = std::variant<Assign, Create, Forget, Cut, Bind, Seq, Choice, Loop, Call,
                              QualifiedCall>;
    Kind kind;
};

template <typename T>
InstructionPtr make(T node) {
    return std::make_shared<const Instruction>(Instruction{std::move(node)});
}

inline InstructionPtr make_seq(std::vector<InstructionPtr> body) {
    return make(Seq{std::move(body)});
}

struct Routine {
    std::string name;
    std::string owner;
    std::vector<Tag> formals;
    std::vector<Tag> locals;
    InstructionPtr body = make_seq({});
    std::optional<std::set<Tag>> declared_modifies;

    std::string qualified_name() const { return owner + "." + name; }
};

struct ClassDecl {
    std::string name;
    std::vector<Tag> attributes;
    std::map<std::string, Routine> routines;
};

class ProgramError : public std::runtime_error {
public:
    ProgramError(const std::string& what, int line = 0, int column = 0)
        : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) +
                                            ": " + what
                                      : what),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

struct Program {
    std::vector<ClassDecl> classes;

    const ClassDecl* find_class(std::string_view name) const {
        for (const auto& c : classes)
            if (c.name == name) return &c;
        return nullptr;
    }

    /// Unqualified calls resolve inside the caller's class.
    const Routine& resolve(const std::string& owner, const std::string& name) const {
        if (const auto* c = find_class(owner)) {
            auto it = c->routines.find(name);
            if (it != c->routines.end()) return it->second;
        }
        throw ProgramError("unresolved routine '" + name + "' in class " + owner);
    }

    /// Qualified calls are untyped: the routine name must be unique program-wide.
    const Routine& resolve_qualified(const std::string& name) const {
        const Routine* found = nullptr;
        for (const auto& c : classes) {
            auto it = c.routines.find(name);
            if (it == c.routines.end()) continue;
            if (found) throw ProgramError("ambiguous qualified call target '" + name + "'");
            found = &it->second;
        }
        if (!found) throw ProgramError("unresolved routine '" + name + "'");
        return *found;
    }

    /// Every attribute declared anywhere; the domain used by dot-completeness.
    std::set<Tag> attributes() const {
        std::set<Tag> out;
        for (const auto& c : classes) out.insert(c.attributes.begin(), c.attributes.end());
        return out;
    }

    std::vector<const Routine*> routines() const {
        std::vector<const Routine*> out;
        for (const auto& c : classes)
            for (const auto& [_, r] : c.routines) out.push_back(&r);
        return out;
    }
};

/// Visits every expression syntactically present in an instruction tree.
template <typename F>
void for_each_expression(const Instruction& i, F&& f) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Assign>) {
                f(Expression{n.target});
                f(n.source);
            } else if constexpr (std::is_same_v<N, Create> || std::is_same_v<N, Forget>) {
                f(Expression{n.target});
            } else if constexpr (std::is_same_v<N, Cut> || std::is_same_v<N, Bind>) {
                f(n.a);
                f(n.b);
            } else if constexpr (std::is_same_v<N, Seq>) {
                for (const auto& s : n.body) for_each_expression(*s, f);
            } else if constexpr (std::is_same_v<N, Choice>) {
                for_each_expression(*n.then_body, f);
                for_each_expression(*n.else_body, f);
            } else if constexpr (std::is_same_v<N, Loop>) {
                for_each_expression(*n.body, f);
            } else if constexpr (std::is_same_v<N, Call>) {
                for (const auto& a : n.actuals) f(a);
            } else {
                f(n.target);
                for (const auto& a : n.actuals) f(a);
            }
        },
        i.kind);
}

/// M: the longest path appearing in routine bodies or modifies clauses.
inline std::size_t compute_M(const Program& p) {
    std::size_t m = 0;
    for (const auto* r : p.routines()) {
        for_each_expression(*r->body, [&](const Expression& e) { m = std::max(m, e.length()); });
        if (r->declared_modifies && !r->declared_modifies->empty()) m = std::max<std::size_t>(m, 1);
    }
    return m;
}

} // namespace alias

#endif
