// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance <path to alias-calc>

#include "alias/fuzz.hpp"
#include "alias/report.hpp"
#include "diagram_support.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

using namespace alias;
using namespace testing_support;

namespace {

// Tolerances. Every count below is exact; nothing is allowed to slip.
constexpr std::size_t fuzz_trials = 10'000;
constexpr std::size_t fuzz_alias_violations_allowed = 0;
constexpr std::size_t fuzz_change_violations_allowed = 0;
constexpr std::size_t diagram_samples = 1'000;
constexpr std::size_t determinism_runs = 3;

const std::string source_dir = ALIAS_SOURCE_DIR;

int failures = 0;
std::map<int, std::string> lines;  // printed in criterion order

void report(int n, const std::string& what, bool ok, const std::string& detail) {
    lines[n] = std::string(ok ? "PASS" : "FAIL") + " criterion " + std::to_string(n) + " (" + what +
               "): " + detail;
    if (!ok) ++failures;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<int, std::string> run_command(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return {-1, out};
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

AliasRelation analyze(const Program& p, const char* cls, const char* routine) {
    Analyzer an(p);
    return an.analyze_entry(p.resolve(cls, routine)).relation;
}

bool aliased(const AliasRelation& r, const char* a, const char* b) { return r.aliased(E(a), E(b)); }

void fuzz_criteria() {
    FuzzConfig c;
    c.trials = fuzz_trials;
    c.seed = 1;
    c.vars = 3;
    c.attrs = 2;
    c.max_length = 6;
    c.cutoff = 4;
    c.unroll = 3;
    c.threads = 1;
    auto r = soundness_fuzz(c);
    std::ostringstream a, ch, loop;
    a << r.alias_violations << " violations in " << r.trials_run << " trials, " << r.final_states
      << " final states, " << r.analysis_errors << " analysis errors";
    report(1, "soundness fuzz, alias",
           r.trials_run == fuzz_trials && r.alias_violations <= fuzz_alias_violations_allowed &&
               r.analysis_errors == 0,
           a.str());
    ch << r.change_violations << " violations in " << r.trials_run << " trials";
    report(2, "soundness fuzz, change",
           r.trials_run == fuzz_trials && r.change_violations <= fuzz_change_violations_allowed, ch.str());
    loop << r.loops_analyzed << " loop analyses, max " << r.max_loop_iterations
         << " iterations, bound " << r.loop_iteration_bound << ", safety valve trips "
         << r.safety_valve_trips;
    report(11, "loop fixpoint termination",
           r.loops_analyzed > 0 && r.max_loop_iterations <= r.loop_iteration_bound &&
               r.safety_valve_trips == 0,
           loop.str());
}

// Sources reaching back through the target, with the target (or the
// expression it is reached from) aliased to Current.
void assignment_regression() {
    const char* bodies[] = {
        "v2 := Current\n      v2 := v2.a2.a1",
        "v3 := a2\n      a2 := a2.a1.a2",
        "v3 := a2\n      v3 := v3.a1.a1",
    };
    std::size_t old_fail = 0, naive_fail = 0;
    for (const char* b : bodies) {
        auto p = parse_program(std::string("class C\n  attributes a1, a2\n  routine main\n"
                                           "    local v1, v2, v3\n    do\n      ") +
                               b + "\n    end\nend\n");
        FuzzConfig c;
        old_fail += check_program(p, c).alias ? 1 : 0;
        c.assignment = AssignmentRule::Naive;
        naive_fail += check_program(p, c).alias ? 1 : 0;
    }
    std::ostringstream d;
    d << "old-value rule fails " << old_fail << " of 3, naive rule fails " << naive_fail << " of 3";
    report(3, "assignment-rule regression", old_fail == 0 && naive_fail > 0, d.str());
}

void flow_sensitivity() {
    auto p = parse_program(read_file(source_dir + "/samples/programs/flow.al"));
    auto r = analyze(p, "C", "r");
    bool ok = aliased(r, "a", "c") && !aliased(r, "a", "b") && to_text(r) == "{a, c}";
    report(4, "flow sensitivity", ok, "a := b; a := c gives " + to_text(r));
}

void conditional_precision() {
    auto p = parse_program(read_file(source_dir + "/samples/programs/conditional.al"));
    auto r = analyze(p, "C", "r");
    auto groups = canonicalize(r);
    bool ok = to_text(r) == "{x, y} {x, z}" && groups.size() == 2 && !aliased(r, "y", "z");
    report(5, "conditional precision", ok, "groups " + to_text(r));
}

// n > L: a and b only meet through the top class. n <= L: no top class; equal
// walks alias a and b through an explicit pair, unequal walks do not alias them.
void chains() {
    auto p = parse_program(read_file(source_dir + "/samples/programs/chains.al"));
    auto lng = analyze(p, "List", "long_chains");
    auto loops = analyze(p, "List", "loops");
    auto shrt = analyze(p, "List", "short_chains");
    auto uneven = analyze(p, "List", "uneven_chains");
    bool ok_long = lng.is_top(E("a")) && lng.is_top(E("b")) && aliased(lng, "a", "b") &&
                   !lng.implies(E("a"), E("b"));
    bool ok_loops = loops.is_top(E("a")) && loops.is_top(E("b")) && aliased(loops, "a", "b");
    bool ok_short = shrt.top().empty() && !shrt.is_top(E("a")) && shrt.implies(E("a"), E("b")) &&
                    to_text(shrt) == "{a, b, first.right.right}";
    bool ok_uneven = uneven.top().empty() && !aliased(uneven, "a", "b");
    report(6, "chain and loop over-approximation", ok_long && ok_loops && ok_short && ok_uneven,
           "n=5: " + to_text(lng) + "; loops: " + to_text(loops) + "; n=2: " + to_text(shrt) +
               "; n=1 vs 2: " + to_text(uneven));
}

void self_aliasing() {
    auto p = parse_program(read_file(source_dir + "/samples/programs/set_u.al"));
    auto r = analyze(p, "C", "self_link");
    bool ok = aliased(r, "a", "a.u") && aliased(r, "a", "a.u.u") && aliased(r, "a.u", "a.u.u.u") &&
              r.is_top(E("a.u.u.u.u.u")) && r.is_top(E("a.u.u.u.u")) && !r.is_top(E("u"));
    report(7, "qualified-call self-aliasing", ok, "a.set_u (a) gives " + to_text(r));
}

void frame_corpus(const std::string& cli) {
    const std::string path = source_dir + "/samples/corpus/frames.al";
    auto text = read_file(path);

    // "-- seeded: <Kind> <attribute>" precedes the routine it describes.
    std::set<std::tuple<std::string, std::string, std::string, std::string>> seeded;
    std::regex seed_re(R"(^\s*-- seeded: (\w+) (\w+)\s*$)"), routine_re(R"(^\s*routine (\w+))"),
        class_re(R"(^class (\w+))");
    std::istringstream source_lines(text);
    std::string line, cls;
    std::optional<std::pair<std::string, std::string>> pending;
    std::smatch m;
    while (std::getline(source_lines, line)) {
        if (std::regex_search(line, m, class_re)) cls = m[1];
        else if (std::regex_search(line, m, seed_re)) pending = std::make_pair(m[1].str(), m[2].str());
        else if (pending && std::regex_search(line, m, routine_re)) {
            seeded.emplace(cls, m[1].str(), pending->first, pending->second);
            pending.reset();
        }
    }

    auto doc = build_report(text, ReportOptions{});
    std::set<std::tuple<std::string, std::string, std::string, std::string>> found;
    for (const auto& f : doc.at("findings")) {
        auto kind = f.at("kind").get<std::string>();
        if (kind != "MissingModifies" && kind != "UnnecessaryModifies") continue;
        for (const auto& a : f.at("attributes"))
            found.emplace(f.at("class"), f.at("routine"), kind, a.get<std::string>());
    }
    std::size_t missing = 0, superfluous = 0, with_clause = 0;
    for (const auto& s : seeded) (std::get<2>(s) == "MissingModifies" ? missing : superfluous)++;
    auto p = parse_program(text);
    for (const Routine* r : p.routines()) with_clause += r->declared_modifies ? 1 : 0;
    auto [code, _] = run_command(cli + " check-frames " + path);

    std::ostringstream d;
    d << p.classes.size() << " classes, " << p.routines().size() << " routines (" << with_clause
      << " with clauses), seeded " << missing << " missing + " << superfluous << " superfluous, reported "
      << found.size() << ", exact match " << (found == seeded ? "yes" : "no") << ", exit " << code;
    bool ok = p.classes.size() >= 10 && p.routines().size() >= 40 && with_clause == p.routines().size() &&
              missing >= 3 && superfluous >= 2 && found == seeded && code == 1;
    report(8, "frame corpus", ok, d.str());
}

void diagram_laws() {
    std::mt19937_64 rng(2024);
    std::size_t idem = 0, preserved = 0, own = 0;
    auto universe = paths(tags, tag_set, 3);
    for (std::size_t k = 0; k < diagram_samples; ++k) {
        auto d = random_diagram(rng);
        auto c = canonicalize_diagram(d);
        idem += canonicalize_diagram(c) == c;
        preserved += meaning(diagram_alias_relation(d, 3, tag_set), universe) ==
                     meaning(diagram_alias_relation(c, 3, tag_set), universe);
    }
    for (std::size_t k = 0; k < diagram_samples; ++k) {
        auto s = random_state(rng);
        own += holds(s, 0, associated_diagram(s, 0));
    }
    std::ostringstream d;
    d << "idempotent " << idem << "/" << diagram_samples << ", relation preserved " << preserved << "/"
      << diagram_samples << ", holds(S, o, D(S,o)) " << own << "/" << diagram_samples;
    report(9, "diagram laws",
           idem == diagram_samples && preserved == diagram_samples && own == diagram_samples, d.str());
}

void assignment_theorem() {
    std::mt19937_64 rng(2025);
    std::size_t checked = 0, violations = 0;
    for (std::size_t k = 0; k < diagram_samples; ++k) {
        auto s = random_state(rng);
        auto d = superdiagram(s, rng);
        if (!holds(s, 0, d)) {
            ++violations;
            continue;
        }
        Tag t = tags[rng() % tags.size()];
        auto e = random_path(rng, 3);
        Snippet snip(t.str() + " := " + e.str());
        auto after = diagram_assign(d, t, e);
        for (const auto& s2 : snip.run(s)) violations += holds(s2, 0, after) ? 0 : 1;
        ++checked;
    }
    std::ostringstream d;
    d << checked << " (S, o, D, t, e) samples, " << violations << " violations";
    report(10, "assignment theorem", checked == diagram_samples && violations == 0, d.str());
}

void determinism(const std::string& cli) {
    const std::string path = source_dir + "/samples/corpus/frames.al";
    std::set<std::string> outputs;
    int bad_exit = 0;
    for (std::size_t k = 0; k < determinism_runs; ++k) {
        auto [code, out] = run_command(cli + " analyze --format json " + path);
        bad_exit += code != 0;
        outputs.insert(out);
    }
    auto in_process = build_report(read_file(path), ReportOptions{}).dump(2) + "\n";
    bool same = outputs.size() == 1 && !outputs.begin()->empty();
    std::ostringstream d;
    d << determinism_runs << " runs, " << outputs.size() << " distinct output(s), "
      << outputs.begin()->size() << " bytes, matches in-process report "
      << (*outputs.begin() == in_process ? "yes" : "no");
    report(12, "determinism", same && bad_exit == 0 && *outputs.begin() == in_process, d.str());
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <alias-calc>\n";
        return 2;
    }
    std::string cli = argv[1];
    fuzz_criteria();
    assignment_regression();
    flow_sensitivity();
    conditional_precision();
    chains();
    self_aliasing();
    frame_corpus(cli);
    diagram_laws();
    assignment_theorem();
    determinism(cli);
    for (const auto& [_, l] : lines) std::cout << l << '\n';
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << " failing criteria" << std::endl;
    return failures ? 1 : 0;
}
