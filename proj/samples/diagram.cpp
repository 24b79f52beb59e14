// Runs an assignment concretely and on the associated diagram, then checks
// that the transformed diagram still holds in the new state.

#include "alias/diagram.hpp"
#include "alias/parser.hpp"

#include <iostream>

int main() {
    using namespace alias;
    auto program = parse_program(R"(
class C
  attributes a, b
  routine step
    do
      a := b.a
    end
end
)");
    State s;
    ObjectId cur = s.fresh_object(), x = s.fresh_object(), y = s.fresh_object();
    s.set(cur, Tag("a"), y);
    s.set(cur, Tag("b"), y);
    s.set(y, Tag("a"), x);

    auto d = associated_diagram(s, cur);
    Executor exec(program);
    auto after = exec.exec(s, cur, *program.resolve("C", "step").body, "C");
    auto d2 = diagram_assign(d, Tag("a"), Expression::parse("b.a"));
    for (const auto& t : after)
        std::cout << to_text(s) << " -> " << to_text(t) << " holds: " << std::boolalpha
                  << holds(t, cur, d2) << '\n';
    std::cout << "relation: " << to_text(diagram_alias_relation(d2, 3, program.attributes())) << '\n';
}
