#include "alias/fuzz.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace alias;
using namespace testing_support;

namespace {

const Instruction& body_of(const Program& p, const char* cls, const char* r) {
    return *p.resolve(cls, r).body;
}

const Instruction& only(const Instruction& i) {
    const auto& seq = std::get<Seq>(i.kind);
    EXPECT_EQ(seq.body.size(), 1u);
    return *seq.body.at(0);
}

} // namespace

TEST(Parser, Assignment) {
    auto p = parse_program("class C attributes x, y routine r do x := y end end");
    const auto& a = std::get<Assign>(only(body_of(p, "C", "r")).kind);
    EXPECT_EQ(a.target, Tag("x"));
    EXPECT_EQ(a.source, E("y"));
}

TEST(Parser, ConditionalBecomesChoice) {
    auto p = parse_program("class C attributes x, y, z routine r do then x := y else x := z end end end");
    const auto& c = std::get<Choice>(only(body_of(p, "C", "r")).kind);
    EXPECT_EQ(std::get<Assign>(only(*c.then_body).kind).source, E("y"));
    EXPECT_EQ(std::get<Assign>(only(*c.else_body).kind).source, E("z"));
}

TEST(Parser, QualifiedCallWithSelfArgument) {
    auto p = parse_program(
        "class C attributes a, u routine set_u (v) modifies u do u := v end "
        "routine r do a.set_u (a) end end");
    const auto& q = std::get<QualifiedCall>(only(body_of(p, "C", "r")).kind);
    EXPECT_EQ(q.target, E("a"));
    EXPECT_EQ(q.routine, "set_u");
    ASSERT_EQ(q.actuals.size(), 1u);
    EXPECT_EQ(q.actuals[0], E("a"));
    EXPECT_EQ(p.resolve("C", "set_u").declared_modifies, std::set<Tag>{Tag("u")});
}

TEST(Parser, StatementsAndComments) {
    auto p = parse_program(R"(
-- leading comment
class C
  attributes a, b
  routine r
    local t
    do
      create a; forget b  -- trailing
      cut a, b
      bind a, b.a
      loop t := a end
    end
end)");
    const auto& seq = std::get<Seq>(body_of(p, "C", "r").kind);
    ASSERT_EQ(seq.body.size(), 5u);
    EXPECT_TRUE(std::holds_alternative<Create>(seq.body[0]->kind));
    EXPECT_TRUE(std::holds_alternative<Forget>(seq.body[1]->kind));
    EXPECT_TRUE(std::holds_alternative<Cut>(seq.body[2]->kind));
    EXPECT_EQ(std::get<Bind>(seq.body[3]->kind).b, E("b.a"));
    EXPECT_TRUE(std::holds_alternative<Loop>(seq.body[4]->kind));
}

TEST(Parser, ModifiesAndLocalInEitherOrder) {
    auto p = parse_program(R"(class C attributes a
  routine r modifies a local t do t := a; a := t end
  routine s local t modifies do t := a end
end)");
    EXPECT_EQ(p.resolve("C", "r").locals, std::vector<Tag>{Tag("t")});
    EXPECT_EQ(p.resolve("C", "s").declared_modifies, std::set<Tag>{});
}

TEST(ParserErrors, SyntaxErrorCarriesPosition) {
    try {
        parse_program("class C attributes a\nroutine r do a := end end");
        FAIL() << "no error";
    } catch (const ProgramError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_GT(e.column(), 0);
    }
}

TEST(ParserErrors, RemoteFieldAssignmentRejected) {
    try {
        parse_program("class C attributes a, b routine r do a.b := a end end");
        FAIL() << "no error";
    } catch (const ProgramError& e) {
        EXPECT_NE(std::string(e.what()).find("remote field assignment"), std::string::npos);
    }
}

TEST(ParserErrors, UnresolvedNames) {
    EXPECT_THROW(parse_program("class C attributes a routine r do a := q end end"), ProgramError);
    EXPECT_THROW(parse_program("class C attributes a routine r do a := a.zz end end"), ProgramError);
    EXPECT_THROW(parse_program("class C attributes a routine r do nowhere end end"), ProgramError);
    EXPECT_THROW(parse_program("class C attributes a routine r do a.nowhere end end"), ProgramError);
}

TEST(ParserErrors, ArityMismatch) {
    EXPECT_THROW(parse_program("class C attributes a routine f (x) do end routine r do f end end"),
                 ProgramError);
}

TEST(ComputeM, Examples) {
    EXPECT_EQ(compute_M(parse_program(
                  "class C attributes a, right routine r do a := a.right end end")),
              2u);
    EXPECT_EQ(compute_M(parse_program("class C attributes a, b routine r do a := b end end")), 1u);
    EXPECT_EQ(compute_M(parse_program("class C attributes a routine r do end end")), 0u);
}

// Separate recursive walk over the tree, not for_each_expression.
TEST(ComputeM, MatchesRecursiveWalk) {
    FuzzConfig c;
    for (std::size_t trial = 0; trial < 200; ++trial) {
        auto text = gen::render(generate_program(c, trial));
        auto p = parse_program(text);
        std::size_t m = 0;
        auto walk = [&](auto&& self, const Instruction& i) -> void {
            std::visit(
                [&](const auto& n) {
                    using N = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<N, Assign>) m = std::max({m, std::size_t{1}, n.source.length()});
                    else if constexpr (std::is_same_v<N, Create> || std::is_same_v<N, Forget>) m = std::max<std::size_t>(m, 1);
                    else if constexpr (std::is_same_v<N, Cut> || std::is_same_v<N, Bind>) m = std::max({m, n.a.length(), n.b.length()});
                    else if constexpr (std::is_same_v<N, Seq>) for (const auto& s : n.body) self(self, *s);
                    else if constexpr (std::is_same_v<N, Choice>) { self(self, *n.then_body); self(self, *n.else_body); }
                    else if constexpr (std::is_same_v<N, Loop>) self(self, *n.body);
                    else if constexpr (std::is_same_v<N, Call>) { for (const auto& a : n.actuals) m = std::max(m, a.length()); }
                    else {
                        m = std::max(m, n.target.length());
                        for (const auto& a : n.actuals) m = std::max(m, a.length());
                    }
                },
                i.kind);
        };
        for (const Routine* r : p.routines()) {
            walk(walk, *r->body);
            if (r->declared_modifies && !r->declared_modifies->empty()) m = std::max<std::size_t>(m, 1);
        }
        ASSERT_EQ(compute_M(p), m) << text;
    }
}

TEST(RoundTrip, PrintedProgramReparsesIdentically) {
    FuzzConfig c;
    c.max_length = 10;
    for (std::size_t trial = 0; trial < 300; ++trial) {
        auto p = parse_program(gen::render(generate_program(c, trial)));
        auto printed = pretty_print(p);
        auto q = parse_program(printed);
        ASSERT_TRUE(same(p, q)) << printed;
        ASSERT_EQ(pretty_print(q), printed);
    }
}

TEST(RoundTrip, HandWrittenFeatures) {
    const char* src = R"(class A
  attributes x, y
  routine r (p, q)
    modifies x
    local t
    do
      t := p.x
      then x := t else cut x, y end
      loop bind x, y.x end
      y.r (x, Current)
      create y
      forget x
    end
end)";
    auto p = parse_program(src);
    EXPECT_TRUE(same(p, parse_program(pretty_print(p))));
}
