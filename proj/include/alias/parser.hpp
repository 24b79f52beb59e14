// parser.hpp
//
// Recursive-descent parser and pretty-printer for the mini-language.
//
//   class C
//     attributes u, v
//     routine set_u (x) modifies u do u := x end
//   end
//
// Instructions: `t := e`, `create t`, `forget t`, `cut e, f`, `bind e, f`,
// `then ... else ... end`, `loop ... end`, `f (args)`, `e.f (args)`.
// Instructions are separated by newlines or `;`. Comments start with `--`.

#ifndef ALIAS_PARSER_HPP
#define ALIAS_PARSER_HPP

#include "alias/program.hpp"

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace alias {

namespace detail {

struct Token {
    enum class Kind { Ident, Assign, Dot, Comma, LParen, RParen, Semi, End } kind;
    std::string text;
    int line = 0, column = 0;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t{Token::Kind::End, {}, line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            t.kind = Token::Kind::Ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
            t.kind = Token::Kind::Assign;
            t.text = ":=";
            advance(2);
        } else {
            switch (c) {
            case '.': t.kind = Token::Kind::Dot; break;
            case ',': t.kind = Token::Kind::Comma; break;
            case '(': t.kind = Token::Kind::LParen; break;
            case ')': t.kind = Token::Kind::RParen; break;
            case ';': t.kind = Token::Kind::Semi; break;
            default:
                throw ProgramError(std::string("unexpected character '") + c + "'", line, col);
            }
            t.text = std::string(1, c);
            advance(1);
        }
        out.push_back(std::move(t));
    }
    out.push_back(Token{Token::Kind::End, "<end of input>", line, col});
    return out;
}

inline bool is_keyword(std::string_view s) {
    static constexpr std::string_view kws[] = {
        "class", "attributes", "routine", "local", "modifies", "do", "end",  "create",
        "forget", "cut",       "bind",    "then",  "else",     "loop", "Current"};
    for (auto k : kws)
        if (k == s) return true;
    return false;
}

// Name checks run after the whole text is read, since qualified calls may
// refer to classes declared later.
struct PendingUse {
    enum class Role { Read, Write, Call, QualifiedCall } role;
    std::string owner, routine;
    Expression expr;
    std::string callee;
    std::size_t arity = 0;
    int line, column;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    Program parse() {
        Program p;
        while (!at_end()) p.classes.push_back(parse_class());
        check(p);
        return p;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<PendingUse> uses_;
    std::string cls_, routine_;

    const Token& peek() const { return toks_[pos_]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    bool peek_kw(std::string_view kw) const {
        return peek().kind == Token::Kind::Ident && peek().text == kw;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ProgramError(msg + " (found '" + peek().text + "')", peek().line, peek().column);
    }
    void expect_kw(std::string_view kw) {
        if (!peek_kw(kw)) fail("expected '" + std::string(kw) + "'");
        ++pos_;
    }
    bool accept(Token::Kind k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    void expect(Token::Kind k, std::string_view what) {
        if (!accept(k)) fail("expected " + std::string(what));
    }
    std::string ident() {
        if (peek().kind != Token::Kind::Ident || is_keyword(peek().text)) fail("expected identifier");
        return toks_[pos_++].text;
    }
    std::vector<std::string> ident_list() {
        std::vector<std::string> out{ident()};
        while (accept(Token::Kind::Comma)) out.push_back(ident());
        return out;
    }

    ClassDecl parse_class() {
        expect_kw("class");
        ClassDecl c;
        c.name = ident();
        cls_ = c.name;
        if (peek_kw("attributes")) {
            ++pos_;
            for (auto& a : ident_list()) c.attributes.emplace_back(a);
        }
        while (peek_kw("routine")) {
            auto r = parse_routine();
            if (c.routines.count(r.name)) fail("duplicate routine '" + r.name + "'");
            c.routines.emplace(r.name, std::move(r));
        }
        expect_kw("end");
        return c;
    }

    Routine parse_routine() {
        expect_kw("routine");
        Routine r;
        r.owner = cls_;
        r.name = ident();
        routine_ = r.name;
        if (accept(Token::Kind::LParen)) {
            if (peek().kind != Token::Kind::RParen)
                for (auto& f : ident_list()) r.formals.emplace_back(f);
            expect(Token::Kind::RParen, "')'");
        }
        // "local" and "modifies" may come in either order, each at most once.
        for (bool more = true; more;) {
            more = false;
            if (r.locals.empty() && peek_kw("local")) {
                ++pos_;
                for (auto& l : ident_list()) r.locals.emplace_back(l);
                more = true;
            } else if (!r.declared_modifies && peek_kw("modifies")) {
                ++pos_;
                r.declared_modifies.emplace();
                if (!peek_kw("do") && !peek_kw("local"))
                    for (auto& m : ident_list()) r.declared_modifies->insert(Tag(m));
                more = true;
            }
        }
        expect_kw("do");
        r.body = parse_block();
        expect_kw("end");
        return r;
    }

    InstructionPtr parse_block() {
        std::vector<InstructionPtr> body;
        while (!peek_kw("end") && !peek_kw("else")) {
            if (accept(Token::Kind::Semi)) continue;
            if (at_end()) fail("unterminated block");
            body.push_back(parse_instruction());
        }
        return make_seq(std::move(body));
    }

    Expression parse_expression(PendingUse::Role role = PendingUse::Role::Read) {
        int line = peek().line, col = peek().column;
        std::vector<Tag> tags;
        if (peek_kw("Current")) {
            ++pos_;
        } else {
            tags.emplace_back(ident());
        }
        while (accept(Token::Kind::Dot)) tags.emplace_back(ident());
        Expression e(std::move(tags));
        if (role == PendingUse::Role::Read) note(role, e, {}, 0, line, col);
        return e;
    }

    std::vector<Expression> parse_args() {
        std::vector<Expression> args;
        if (!accept(Token::Kind::LParen)) return args;
        if (peek().kind != Token::Kind::RParen) {
            args.push_back(parse_expression());
            while (accept(Token::Kind::Comma)) args.push_back(parse_expression());
        }
        expect(Token::Kind::RParen, "')'");
        return args;
    }

    void note(PendingUse::Role role, Expression e, std::string callee, std::size_t arity,
              int line, int col) {
        uses_.push_back(PendingUse{role, cls_, routine_, std::move(e), std::move(callee), arity,
                                   line, col});
    }

    InstructionPtr parse_instruction() {
        int line = peek().line, col = peek().column;
        if (peek_kw("create") || peek_kw("forget")) {
            bool create = peek().text == "create";
            ++pos_;
            Tag t(ident());
            note(PendingUse::Role::Write, Expression{t}, {}, 0, line, col);
            return create ? make(Create{t}) : make(Forget{t});
        }
        if (peek_kw("cut") || peek_kw("bind")) {
            bool cut = peek().text == "cut";
            ++pos_;
            auto a = parse_expression();
            expect(Token::Kind::Comma, "','");
            auto b = parse_expression();
            return cut ? make(Cut{std::move(a), std::move(b)}) : make(Bind{std::move(a), std::move(b)});
        }
        if (peek_kw("then")) {
            ++pos_;
            auto then_body = parse_block();
            InstructionPtr else_body = make_seq({});
            if (peek_kw("else")) {
                ++pos_;
                else_body = parse_block();
            }
            expect_kw("end");
            return make(Choice{then_body, else_body});
        }
        if (peek_kw("loop")) {
            ++pos_;
            auto body = parse_block();
            expect_kw("end");
            return make(Loop{body});
        }
        auto path = parse_expression(PendingUse::Role::Call);
        if (accept(Token::Kind::Assign)) {
            if (path.size() != 1)
                throw ProgramError("remote field assignment '" + path.str() +
                                       " := ...' is not allowed; call a setter routine instead",
                                   line, col);
            auto src = parse_expression();
            note(PendingUse::Role::Write, path, {}, 0, line, col);
            return make(Assign{path.front(), std::move(src)});
        }
        if (path.is_current()) fail("expected instruction");
        auto args = parse_args();
        std::string name = path.back().name();
        auto target = path.prefix(path.size() - 1);
        if (target.is_current()) {
            note(PendingUse::Role::Call, {}, name, args.size(), line, col);
            return make(Call{name, std::move(args)});
        }
        note(PendingUse::Role::Read, target, {}, 0, line, col);
        note(PendingUse::Role::QualifiedCall, {}, name, args.size(), line, col);
        return make(QualifiedCall{std::move(target), name, std::move(args)});
    }

    static bool contains(const std::vector<Tag>& v, Tag t) {
        return std::find(v.begin(), v.end(), t) != v.end();
    }

    void check(const Program& p) const {
        auto all_attrs = p.attributes();
        for (const auto& c : p.classes) {
            if (std::count_if(p.classes.begin(), p.classes.end(),
                              [&](const ClassDecl& o) { return o.name == c.name; }) > 1)
                throw ProgramError("duplicate class '" + c.name + "'");
            for (const auto& [_, r] : c.routines) {
                std::set<Tag> seen;
                for (auto t : r.formals)
                    if (!seen.insert(t).second || contains(c.attributes, t))
                        throw ProgramError("formal '" + t.name() + "' of " + r.qualified_name() +
                                           " clashes with another name");
                for (auto t : r.locals)
                    if (!seen.insert(t).second || contains(c.attributes, t))
                        throw ProgramError("local '" + t.name() + "' of " + r.qualified_name() +
                                           " clashes with another name");
                if (r.declared_modifies)
                    for (auto t : *r.declared_modifies)
                        if (!contains(c.attributes, t))
                            throw ProgramError("modifies clause of " + r.qualified_name() +
                                               " names '" + t.name() +
                                               "', which is not an attribute of " + c.name);
            }
        }
        for (const auto& u : uses_) {
            const auto* c = p.find_class(u.owner);
            const auto& r = c->routines.at(u.routine);
            auto where = " in " + r.qualified_name();
            switch (u.role) {
            case PendingUse::Role::Read:
            case PendingUse::Role::Write: {
                if (u.expr.is_current()) break;
                Tag head = u.expr.front();
                bool local = contains(r.locals, head), attr = contains(c->attributes, head);
                if (u.role == PendingUse::Role::Write && !local && !attr)
                    throw ProgramError((contains(r.formals, head) ? "cannot assign formal '"
                                                                  : "unknown target '") +
                                           head.name() + "'" + where,
                                       u.line, u.column);
                if (!local && !attr && !contains(r.formals, head))
                    throw ProgramError("unknown name '" + head.name() + "'" + where, u.line,
                                       u.column);
                for (std::size_t i = 1; i < u.expr.size(); ++i)
                    if (!all_attrs.count(u.expr[i]))
                        throw ProgramError("unknown attribute '" + u.expr[i].name() + "'" + where,
                                           u.line, u.column);
                break;
            }
            case PendingUse::Role::Call:
            case PendingUse::Role::QualifiedCall: {
                const Routine* callee = nullptr;
                try {
                    callee = u.role == PendingUse::Role::Call ? &p.resolve(u.owner, u.callee)
                                                              : &p.resolve_qualified(u.callee);
                } catch (const ProgramError& e) {
                    throw ProgramError(e.what() + where, u.line, u.column);
                }
                if (callee->formals.size() != u.arity)
                    throw ProgramError("call to " + callee->qualified_name() + " passes " +
                                           std::to_string(u.arity) + " arguments, expected " +
                                           std::to_string(callee->formals.size()),
                                       u.line, u.column);
                break;
            }
            }
        }
    }
};

inline void print_instruction(std::ostream& os, const Instruction& i, int indent);

inline void print_block(std::ostream& os, const Instruction& i, int indent) {
    if (const auto* s = std::get_if<Seq>(&i.kind)) {
        for (const auto& c : s->body) print_instruction(os, *c, indent);
    } else {
        print_instruction(os, i, indent);
    }
}

inline std::string join(const std::vector<Expression>& es) {
    std::string s;
    for (std::size_t k = 0; k < es.size(); ++k) s += (k ? ", " : "") + es[k].str();
    return s;
}

inline void print_instruction(std::ostream& os, const Instruction& i, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Assign>) {
                os << pad << n.target.str() << " := " << n.source.str() << "\n";
            } else if constexpr (std::is_same_v<N, Create>) {
                os << pad << "create " << n.target.str() << "\n";
            } else if constexpr (std::is_same_v<N, Forget>) {
                os << pad << "forget " << n.target.str() << "\n";
            } else if constexpr (std::is_same_v<N, Cut>) {
                os << pad << "cut " << n.a.str() << ", " << n.b.str() << "\n";
            } else if constexpr (std::is_same_v<N, Bind>) {
                os << pad << "bind " << n.a.str() << ", " << n.b.str() << "\n";
            } else if constexpr (std::is_same_v<N, Seq>) {
                print_block(os, i, indent);
            } else if constexpr (std::is_same_v<N, Choice>) {
                os << pad << "then\n";
                print_block(os, *n.then_body, indent + 1);
                os << pad << "else\n";
                print_block(os, *n.else_body, indent + 1);
                os << pad << "end\n";
            } else if constexpr (std::is_same_v<N, Loop>) {
                os << pad << "loop\n";
                print_block(os, *n.body, indent + 1);
                os << pad << "end\n";
            } else if constexpr (std::is_same_v<N, Call>) {
                os << pad << n.routine << " (" << join(n.actuals) << ")\n";
            } else {
                os << pad << n.target.str() << "." << n.routine << " (" << join(n.actuals)
                   << ")\n";
            }
        },
        i.kind);
}

inline std::string tag_list(const std::vector<Tag>& tags) {
    std::string s;
    for (std::size_t k = 0; k < tags.size(); ++k) s += (k ? ", " : "") + tags[k].name();
    return s;
}

} // namespace detail

inline Program parse_program(std::string_view source) { return detail::Parser(source).parse(); }

inline std::string pretty_print(const Instruction& body, int indent = 0) {
    std::ostringstream os;
    detail::print_block(os, body, indent);
    return os.str();
}

inline std::string pretty_print(const Program& p) {
    std::ostringstream os;
    for (const auto& c : p.classes) {
        os << "class " << c.name << "\n";
        if (!c.attributes.empty()) os << "  attributes " << detail::tag_list(c.attributes) << "\n";
        for (const auto& [_, r] : c.routines) {
            os << "  routine " << r.name;
            if (!r.formals.empty()) os << " (" << detail::tag_list(r.formals) << ")";
            os << "\n";
            if (!r.locals.empty()) os << "    local " << detail::tag_list(r.locals) << "\n";
            if (r.declared_modifies) {
                std::vector<Tag> m(r.declared_modifies->begin(), r.declared_modifies->end());
                std::sort(m.begin(), m.end(),
                          [](Tag a, Tag b) { return a.name() < b.name(); });
                os << "    modifies" << (m.empty() ? "" : " " + detail::tag_list(m)) << "\n";
            }
            os << "    do\n";
            detail::print_block(os, *r.body, 3);
            os << "    end\n";
        }
        os << "end\n";
    }
    return os.str();
}

} // namespace alias

#endif
