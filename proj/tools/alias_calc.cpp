// alias-calc: analyze programs of the mini-language, check modifies clauses,
// and run the soundness fuzzer.
//
// Exit codes: 0 ok, 1 missing modifies clause, 2 bad input, 3 fuzz violation.

#include "alias/fuzz.hpp"
#include "alias/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { Ok = 0, Missing = 1, BadInput = 2, Violation = 3 };

struct ProgramArgs {
    std::string input;
    std::string cutoff = "auto";
    std::string format = "text";
    std::string entry;
};

void add_program_args(CLI::App* cmd, ProgramArgs& a) {
    cmd->add_option("input", a.input, "Program source file")->required();
    cmd->add_option("--L", a.cutoff, "Maximum path length, or 'auto' for max(M, 4)")
        ->capture_default_str();
    cmd->add_option("--format", a.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    cmd->add_option("--entry", a.entry, "Routine to analyze (C.r or r); default: all");
}

std::optional<std::size_t> parse_cutoff(const std::string& s) {
    if (s == "auto") return std::nullopt;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) throw alias::CutoffError("--L expects a positive integer or 'auto'");
    return v;
}

// Shared by analyze and check-frames; returns the report or an exit code.
int run_report(const ProgramArgs& a, bool frames_only) {
    std::ifstream in(a.input, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << a.input << '\n';
        return BadInput;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    nlohmann::ordered_json doc;
    try {
        alias::ReportOptions opt;
        opt.cutoff = parse_cutoff(a.cutoff);
        opt.entry = a.entry;
        doc = alias::build_report(buf.str(), opt);
    } catch (const alias::ProgramError& e) {
        std::cerr << a.input << ':' << e.what() << '\n';
        return BadInput;
    } catch (const alias::CutoffError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return BadInput;
    }

    if (a.format == "json")
        std::cout << doc.dump(2) << '\n';
    else
        std::cout << alias::report_text(doc);
    return frames_only && alias::has_missing_modifies(doc) ? Missing : Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Alias and change calculus for a small object-oriented language"};
    app.require_subcommand(1);

    ProgramArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Report alias relations, change sets and findings");
    add_program_args(analyze, analyze_args);

    ProgramArgs frame_args;
    auto* frames = app.add_subcommand("check-frames", "Check declared modifies clauses");
    add_program_args(frames, frame_args);

    alias::FuzzConfig fc;
    std::string fuzz_format = "text";
    std::string assignment_rule = "old-value";
    auto* fuzz = app.add_subcommand("fuzz", "Compare the analysis against concrete execution");
    fuzz->add_option("--trials", fc.trials, "Number of random programs")->capture_default_str();
    fuzz->add_option("--seed", fc.seed, "Random seed")->capture_default_str();
    fuzz->add_option("--L", fc.cutoff, "Maximum path length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fuzz->add_option("--unroll", fc.unroll, "Concrete loop unrolling bound")->capture_default_str();
    fuzz->add_option("--vocab-vars", fc.vars, "Local variables of the entry routine")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fuzz->add_option("--vocab-attrs", fc.attrs, "Attributes of the generated class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fuzz->add_option("--max-length", fc.max_length, "Instructions per entry routine")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fuzz->add_option("--threads", fc.threads, "Worker threads, 0 for all cores");
    // The naive rule is known to be unsound; it is kept to show the fuzzer catching it.
    fuzz->add_option("--assignment-rule", assignment_rule, "Assignment rule under test")
        ->check(CLI::IsMember({"old-value", "naive"}))
        ->capture_default_str();
    fuzz->add_option("--format", fuzz_format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : BadInput;
    }

    if (*analyze) return run_report(analyze_args, false);
    if (*frames) return run_report(frame_args, true);

    if (assignment_rule == "naive") fc.assignment = alias::AssignmentRule::Naive;
    auto report = alias::soundness_fuzz(fc);
    auto j = alias::to_json(report);
    if (fuzz_format == "json")
        std::cout << j.dump(2) << '\n';
    else
        std::cout << alias::fuzz_text(j);
    return report.clean() ? Ok : Violation;
}
