// Analyzes a few routines and prints their canonical alias relations.

#include "alias/calculus.hpp"
#include "alias/parser.hpp"

#include <iostream>

int main() {
    auto program = alias::parse_program(R"(
class C
  attributes x, y, z, a, b, c
  routine branches
    do
      then y := x else z := x end
    end
  routine overwrite
    do
      a := b
      a := c
    end
end
)");
    alias::Analyzer analyzer(program);
    for (const char* name : {"branches", "overwrite"}) {
        auto out = analyzer.analyze_entry(program.resolve("C", name));
        std::cout << name << ": " << alias::to_text(out.relation) << '\n';
    }
}
