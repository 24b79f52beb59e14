// report.hpp
//
// Report assembly for the command-line tool. The structured document is built
// first; the text form is rendered from it so both carry the same content.

#ifndef ALIAS_REPORT_HPP
#define ALIAS_REPORT_HPP

#include "alias/frames.hpp"
#include "alias/parser.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace alias {

inline constexpr const char* report_version = "1";

/// 64-bit FNV-1a of the program text, as 16 hex digits.
inline std::string fnv1a_digest(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class CutoffError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested L, or max(M, 4) when absent. L below M is refused.
inline std::size_t resolve_cutoff(const Program& p, std::optional<std::size_t> requested) {
    std::size_t m = compute_M(p);
    if (!requested) return std::max<std::size_t>(m, 4);
    if (*requested < m || *requested == 0)
        throw CutoffError("L = " + std::to_string(*requested) +
                          " is below M = " + std::to_string(m) +
                          ", the longest path in the program; L must satisfy L >= M");
    return *requested;
}

struct ReportOptions {
    std::optional<std::size_t> cutoff;  // nullopt: auto
    std::string entry;                  // "C.r", "r", or empty for every routine
};

namespace detail {

inline std::vector<const Routine*> select_entries(const Program& p, const std::string& entry) {
    std::vector<const Routine*> all = p.routines();
    std::sort(all.begin(), all.end(), [](const Routine* x, const Routine* y) {
        return std::tie(x->owner, x->name) < std::tie(y->owner, y->name);
    });
    if (entry.empty()) return all;
    std::vector<const Routine*> out;
    for (const Routine* r : all)
        if (r->qualified_name() == entry || r->name == entry) out.push_back(r);
    if (out.empty()) throw ProgramError("no routine matches entry '" + entry + "'");
    return out;
}

inline nlohmann::ordered_json expr_list(const std::vector<Expression>& v) {
    auto j = nlohmann::ordered_json::array();
    for (const auto& e : v) j.push_back(e.str());
    return j;
}

inline nlohmann::ordered_json tag_list(const std::set<Tag>& s) {
    auto j = nlohmann::ordered_json::array();
    for (const auto& n : names_of(s)) j.push_back(n);
    return j;
}

} // namespace detail

/// Analyzes `source` and assembles the structured report. Throws ProgramError
/// on parse and resolution failures and CutoffError on a bad L.
inline nlohmann::ordered_json build_report(const std::string& source, const ReportOptions& opt) {
    Program program = parse_program(source);
    std::size_t m = compute_M(program);
    std::size_t cutoff = resolve_cutoff(program, opt.cutoff);
    auto entries = detail::select_entries(program, opt.entry);

    AnalysisOptions aopt;
    aopt.cutoff = cutoff;
    Analyzer an(program, aopt);

    using json = nlohmann::ordered_json;
    json doc;
    doc["version"] = report_version;
    doc["program"] = {{"digest", "fnv1a:" + fnv1a_digest(source)},
                      {"classes", program.classes.size()},
                      {"routines", program.routines().size()},
                      {"M", m},
                      {"L", cutoff}};

    std::vector<std::string> notes;
    auto groups = json::array();
    for (const Routine* r : entries) {
        auto rel = an.analyze_entry(*r).relation;
        json g;
        g["entry"] = r->qualified_name();
        auto gs = json::array();
        for (const auto& c : canonicalize(rel)) gs.push_back(detail::expr_list(c));
        g["groups"] = std::move(gs);
        g["top"] = detail::expr_list(sorted_text(rel.top()));
        if (!rel.top().empty())
            notes.push_back(r->qualified_name() + ": " + std::to_string(rel.top().size()) +
                            " expression(s) folded into the top class at L = " +
                            std::to_string(cutoff));
        groups.push_back(std::move(g));
    }
    doc["aliasGroups"] = std::move(groups);

    json changes = json::object();
    for (const Routine* r : entries) {
        auto f = infer_frame(an, *r);
        json c;
        c["expressions"] = detail::expr_list(sorted_text(f.changes.expressions));
        c["includesTop"] = f.changes.includes_top;
        c["attributes"] = detail::tag_list(f.attributes);
        changes[f.routine] = std::move(c);
        if (f.widened) notes.push_back(f.routine + ": change set reaches the top class; frame widened "
                                                   "to every attribute");
    }
    doc["changeSets"] = std::move(changes);

    auto findings = json::array();
    std::vector<std::string> warnings;
    for (const auto& f : check_frames(an)) {
        findings.push_back({{"class", f.class_name},
                            {"routine", f.routine},
                            {"kind", kind_name(f.kind)},
                            {"attributes", f.witnesses}});
        if (f.kind == FrameFinding::Kind::UnnecessaryModifies)
            warnings.push_back(f.class_name + "." + f.routine + ": modifies clause lists "
                               "attributes that are never changed");
    }
    doc["findings"] = std::move(findings);

    // Analyzer notes repeat once per analysis pass; keep one of each.
    std::set<std::string> seen;
    auto diags = json::array();
    for (const auto& d : an.diagnostics()) {
        std::string msg = d.message;
        if (!seen.insert(msg).second) continue;
        diags.push_back({{"severity", d.severity == Diagnostic::Severity::Warning ? "warning" : "note"},
                         {"message", msg}});
    }
    for (const auto& w : warnings)
        if (seen.insert(w).second) diags.push_back({{"severity", "warning"}, {"message", w}});
    for (const auto& n : notes)
        if (seen.insert(n).second) diags.push_back({{"severity", "note"}, {"message", n}});
    doc["diagnostics"] = std::move(diags);
    return doc;
}

inline bool has_missing_modifies(const nlohmann::ordered_json& doc) {
    for (const auto& f : doc.at("findings"))
        if (f.at("kind") == "MissingModifies") return true;
    return false;
}

/// Line-oriented rendering of a report document.
inline std::string report_text(const nlohmann::ordered_json& doc) {
    std::ostringstream out;
    auto join = [](const nlohmann::ordered_json& arr) {
        std::string s;
        for (const auto& e : arr) s += (s.empty() ? "" : ", ") + e.get<std::string>();
        return s;
    };
    const auto& p = doc.at("program");
    out << "program " << p.at("digest").get<std::string>() << " classes " << p.at("classes")
        << " routines " << p.at("routines") << " M " << p.at("M") << " L " << p.at("L") << '\n';
    for (const auto& g : doc.at("aliasGroups")) {
        out << "aliases " << g.at("entry").get<std::string>() << ':';
        if (g.at("groups").empty() && g.at("top").empty()) out << " {}";
        for (const auto& grp : g.at("groups")) out << " {" << join(grp) << '}';
        if (!g.at("top").empty()) out << " top {" << join(g.at("top")) << '}';
        out << '\n';
    }
    for (const auto& [name, c] : doc.at("changeSets").items()) {
        out << "changes " << name << ": {" << join(c.at("expressions")) << '}';
        if (c.at("includesTop").get<bool>()) out << " +top";
        out << " attributes {" << join(c.at("attributes")) << "}\n";
    }
    for (const auto& f : doc.at("findings")) {
        out << f.at("kind").get<std::string>() << ' ' << f.at("class").get<std::string>() << '.'
            << f.at("routine").get<std::string>();
        if (!f.at("attributes").empty()) out << ": " << join(f.at("attributes"));
        out << '\n';
    }
    for (const auto& d : doc.at("diagnostics"))
        out << d.at("severity").get<std::string>() << ": " << d.at("message").get<std::string>()
            << '\n';
    return out.str();
}

/// Text summary of a fuzz report document.
inline std::string fuzz_text(const nlohmann::ordered_json& j) {
    std::ostringstream out;
    out << "trials " << j.at("trials") << " seed " << j.at("seed") << " L " << j.at("L")
        << " unroll " << j.at("unroll");
    if (j.value("assignmentRule", "old-value") != "old-value")
        out << " rule " << j.at("assignmentRule").get<std::string>();
    out << '\n';
    out << "alias violations " << j.at("aliasViolations") << '\n';
    out << "change violations " << j.at("changeViolations") << '\n';
    out << "analysis errors " << j.at("analysisErrors") << '\n';
    out << "loops analyzed " << j.at("loopsAnalyzed") << ", max iterations "
        << j.at("maxLoopIterations") << " (bound " << j.at("loopIterationBound")
        << "), safety valve trips " << j.at("safetyValveTrips") << '\n';
    for (const auto& c : j.at("counterexamples")) out << "counterexample\n" << c.dump(2) << '\n';
    return out.str();
}

} // namespace alias

#endif
