// Infers frames for a small class and compares them with its modifies clauses.

#include "alias/frames.hpp"
#include "alias/parser.hpp"

#include <iostream>

int main() {
    auto program = alias::parse_program(R"(
class Account
  attributes balance, owner, history
  routine set_owner (p)
    modifies owner
    do
      owner := p
    end
  routine transfer (p)
    modifies owner
    do
      history := owner
      set_owner (p)
    end
end
)");
    alias::Analyzer analyzer(program);
    for (const auto& [name, frame] : alias::infer_frames(analyzer)) {
        std::cout << name << " changes";
        for (auto t : frame.attributes) std::cout << ' ' << t.str();
        std::cout << '\n';
    }
    for (const auto& f : alias::check_frames(analyzer)) {
        std::cout << alias::kind_name(f.kind) << ' ' << f.class_name << '.' << f.routine;
        for (const auto& w : f.witnesses) std::cout << ' ' << w;
        std::cout << '\n';
    }
}
