// fuzz.hpp
//
// Randomized differential testing of the abstract calculus against the
// concrete executor: random programs over a small vocabulary, run from a
// state where every variable and attribute holds its own fresh object.

#ifndef ALIAS_FUZZ_HPP
#define ALIAS_FUZZ_HPP

#include "alias/calculus.hpp"
#include "alias/diagram.hpp"
#include "alias/parser.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace alias {

struct FuzzConfig {
    std::size_t trials = 10'000;
    std::uint64_t seed = 1;
    std::size_t vars = 3;
    std::size_t attrs = 2;
    std::size_t max_length = 6;   // instructions in the entry routine, nested ones included
    std::size_t cutoff = 4;
    std::size_t unroll = 3;
    std::size_t helpers = 2;
    std::size_t max_counterexamples = 5;
    std::size_t threads = 0;      // 0: hardware concurrency
    AssignmentRule assignment = AssignmentRule::OldValue;
    MinusScope minus_scope = MinusScope::Rooted;
};

namespace gen {

struct Instr {
    enum class Kind { Assign, Create, Forget, Bind, Choice, Loop, Call, QualifiedCall } kind;
    std::string text;                       // leaf text, or the call text
    std::vector<std::vector<Instr>> blocks; // Choice: then/else, Loop: body
};
using Block = std::vector<Instr>;

struct RoutineText {
    std::string name;
    std::vector<std::string> formals, locals;
    Block body;
};

struct ProgramText {
    std::vector<std::string> attrs, vars;
    std::vector<RoutineText> helpers;
    Block main;
};

inline std::size_t count(const Block& b) {
    std::size_t n = 0;
    for (const auto& i : b) {
        ++n;
        for (const auto& c : i.blocks) n += count(c);
    }
    return n;
}

inline void render(const Block& b, int depth, std::string& out) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    for (const auto& i : b) {
        switch (i.kind) {
        case Instr::Kind::Choice:
            out += pad + "then\n";
            render(i.blocks[0], depth + 1, out);
            out += pad + "else\n";
            render(i.blocks[1], depth + 1, out);
            out += pad + "end\n";
            break;
        case Instr::Kind::Loop:
            out += pad + "loop\n";
            render(i.blocks[0], depth + 1, out);
            out += pad + "end\n";
            break;
        default:
            out += pad + i.text + "\n";
        }
    }
}

inline std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k];
    return s;
}

inline std::string render(const ProgramText& p) {
    std::string out = "class C\n  attributes " + join(p.attrs) + "\n";
    auto routine = [&](const std::string& head, const std::vector<std::string>& locals,
                       const Block& body) {
        out += "  routine " + head + "\n";
        if (!locals.empty()) out += "    local " + join(locals) + "\n";
        out += "    do\n";
        render(body, 3, out);
        out += "    end\n";
    };
    routine("main", p.vars, p.main);
    for (const auto& h : p.helpers)
        routine(h.formals.empty() ? h.name : h.name + " (" + join(h.formals) + ")", h.locals, h.body);
    out += "end\n";
    return out;
}

class Generator {
public:
    Generator(const FuzzConfig& c, std::mt19937_64& rng) : c_(c), rng_(rng) {}

    ProgramText program() {
        ProgramText p;
        for (std::size_t k = 1; k <= c_.attrs; ++k) p.attrs.push_back("a" + std::to_string(k));
        for (std::size_t k = 1; k <= c_.vars; ++k) p.vars.push_back("v" + std::to_string(k));
        attrs_ = p.attrs;
        for (std::size_t k = 1; k <= c_.helpers; ++k) {
            RoutineText h;
            h.name = "h" + std::to_string(k);
            for (std::size_t f = 0, n = pick(3); f < n; ++f)
                h.formals.push_back("p" + std::to_string(k) + std::to_string(f + 1));
            h.locals.push_back("l" + std::to_string(k));
            p.helpers.push_back(std::move(h));
        }
        // Helpers only call later helpers, so there is no recursion.
        for (std::size_t k = p.helpers.size(); k-- > 0;) {
            auto& h = p.helpers[k];
            Scope s;
            s.targets = attrs_;
            s.targets.insert(s.targets.end(), h.locals.begin(), h.locals.end());
            s.heads = s.targets;
            s.heads.insert(s.heads.end(), h.formals.begin(), h.formals.end());
            for (std::size_t j = k + 1; j < p.helpers.size(); ++j) s.callees.push_back(&p.helpers[j]);
            std::size_t budget = 1 + pick(3);
            h.body = block(s, budget, 1);
        }
        Scope s;
        s.targets = p.vars;
        s.targets.insert(s.targets.end(), attrs_.begin(), attrs_.end());
        s.heads = s.targets;
        for (auto& h : p.helpers) s.callees.push_back(&h);
        std::size_t budget = 1 + pick(c_.max_length);
        p.main = block(s, budget, 2, budget);
        return p;
    }

private:
    struct Scope {
        std::vector<std::string> targets, heads;
        std::vector<const RoutineText*> callees;
    };

    const FuzzConfig& c_;
    std::mt19937_64& rng_;
    std::vector<std::string> attrs_;

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    template <typename T>
    const T& choose(const std::vector<T>& v) { return v[pick(v.size())]; }

    std::string expression(const Scope& s, bool allow_current, std::size_t max_len) {
        std::string e;
        std::size_t len = 0;
        if (allow_current && pick(6) == 0) {
            e = "Current";
        } else {
            e = choose(s.heads);
            len = 1;
        }
        while (len < max_len && pick(3) == 0) {
            e += (e == "Current" ? "." : ".") + choose(attrs_);
            ++len;
        }
        if (e.rfind("Current.", 0) == 0) e = e.substr(8);
        return e;
    }

    std::string args(const Scope& s, const RoutineText& f) {
        std::vector<std::string> a;
        for (std::size_t k = 0; k < f.formals.size(); ++k) a.push_back(expression(s, true, 2));
        return a.empty() ? "" : " (" + join(a) + ")";
    }

    // Fills up to `budget` instructions; budget is shared with nested blocks.
    Block block(const Scope& s, std::size_t& budget, int nesting, std::size_t width = 3) {
        Block b;
        std::size_t n = 1 + pick(std::max<std::size_t>(1, std::min(budget, width)));
        for (std::size_t k = 0; k < n && budget > 0; ++k) b.push_back(instr(s, budget, nesting));
        return b;
    }

    Instr instr(const Scope& s, std::size_t& budget, int nesting) {
        --budget;
        std::size_t roll = pick(20);
        bool can_nest = nesting > 0 && budget > 0;
        if (roll < 2 && can_nest) {
            Instr i{Instr::Kind::Choice, "", {}};
            i.blocks.push_back(block(s, budget, nesting - 1));
            i.blocks.push_back(budget > 0 && pick(3) ? block(s, budget, nesting - 1) : Block{});
            return i;
        }
        if (roll < 4 && can_nest) {
            Instr i{Instr::Kind::Loop, "", {}};
            i.blocks.push_back(block(s, budget, nesting - 1));
            return i;
        }
        if (roll < 7 && !s.callees.empty()) {
            const auto* f = choose(s.callees);
            if (pick(2) == 0) return {Instr::Kind::Call, f->name + args(s, *f), {}};
            auto target = expression(s, false, 2);
            return {Instr::Kind::QualifiedCall, target + "." + f->name + args(s, *f), {}};
        }
        if (roll < 8) return {Instr::Kind::Create, "create " + choose(s.targets), {}};
        if (roll < 9) return {Instr::Kind::Forget, "forget " + choose(s.targets), {}};
        if (roll < 10) {
            auto a = expression(s, true, 2), b = expression(s, true, 2);
            return {Instr::Kind::Bind, "bind " + a + ", " + b, {}};
        }
        return {Instr::Kind::Assign, choose(s.targets) + " := " + expression(s, true, 3), {}};
    }
};

} // namespace gen

struct Counterexample {
    std::size_t trial = 0;
    std::string kind;     // "alias", "change" or "analysis"
    std::string program;
    std::string initial_state;
    std::string final_state;
    std::string detail;
    std::string relation;
};

struct FuzzReport {
    FuzzConfig config;
    std::size_t trials_run = 0;
    std::size_t alias_violations = 0;
    std::size_t change_violations = 0;
    std::size_t analysis_errors = 0;
    std::size_t final_states = 0;
    std::size_t aborted_paths = 0;
    std::size_t loops_analyzed = 0;
    std::size_t max_loop_iterations = 0;
    std::size_t loop_iteration_bound = 0;   // |universe(L)|^2 for the vocabulary
    std::size_t safety_valve_trips = 0;
    std::vector<Counterexample> counterexamples;

    bool clean() const { return alias_violations + change_violations + analysis_errors == 0; }
};

namespace detail {

// Expressions the oracle compares: Current and every head followed by
// attributes, up to the cutoff.
inline std::vector<Expression> universe(const std::vector<Tag>& heads, const std::vector<Tag>& attrs,
                                        std::size_t cutoff) {
    std::vector<Expression> out{Expression::current()};
    std::vector<Expression> frontier;
    for (Tag h : heads) frontier.push_back(Expression{h});
    for (std::size_t len = 1; len <= cutoff && !frontier.empty(); ++len) {
        out.insert(out.end(), frontier.begin(), frontier.end());
        std::vector<Expression> next;
        if (len < cutoff)
            for (const auto& e : frontier)
                for (Tag a : attrs) next.push_back(e.dot(a));
        frontier = std::move(next);
    }
    return out;
}

struct TrialOutcome {
    std::size_t alias = 0, change = 0, analysis = 0, finals = 0, aborted = 0;
    std::size_t loops = 0, max_iter = 0, valve = 0;
    std::string first_detail, first_kind, relation, final_state;
};

} // namespace detail

/// Initial state: object 0 is Current and every path of at most `depth`
/// tags, a slot followed by attributes, leads to its own fresh object. All
/// tracked expressions are defined and pairwise distinct, so the empty
/// relation describes it.
inline State fresh_state(const std::vector<Tag>& slots, const std::vector<Tag>& attrs,
                         std::size_t depth) {
    State s;
    auto root = s.fresh_object();
    std::vector<ObjectId> level;
    for (Tag t : slots) {
        auto o = s.fresh_object();
        s.set(root, t, o);
        level.push_back(o);
    }
    for (std::size_t d = 1; d < depth; ++d) {
        std::vector<ObjectId> next;
        for (ObjectId o : level)
            for (Tag a : attrs) {
                auto c = s.fresh_object();
                s.set(o, a, c);
                next.push_back(c);
            }
        level = std::move(next);
    }
    return s;
}

/// Runs one program against the oracle. Exposed for the pinned regressions.
inline detail::TrialOutcome check_program(const Program& program, const FuzzConfig& c,
                                          const std::string& entry = "main") {
    detail::TrialOutcome out;
    const auto& main = program.resolve("C", entry);
    const auto* cls = program.find_class("C");
    std::vector<Tag> heads(main.locals.begin(), main.locals.end());
    heads.insert(heads.end(), cls->attributes.begin(), cls->attributes.end());
    std::vector<Tag> attrs(cls->attributes.begin(), cls->attributes.end());

    AnalysisOptions opts;
    opts.cutoff = c.cutoff;
    opts.assignment = c.assignment;
    opts.minus_scope = c.minus_scope;
    Analyzer analyzer(program, opts);
    Outcome abstract;
    try {
        abstract = analyzer.analyze_entry(main);
    } catch (const std::exception& ex) {
        out.analysis = 1;
        out.first_kind = "analysis";
        out.first_detail = ex.what();
        out.valve = analyzer.stats().safety_valve_trips;
        return out;
    }
    out.loops = analyzer.stats().loops_analyzed;
    out.max_iter = analyzer.stats().max_loop_iterations;
    out.valve = analyzer.stats().safety_valve_trips;

    State init = fresh_state(heads, attrs, c.cutoff);
    Executor exec(program, ExecConfig{c.unroll, 16});
    auto finals = exec.exec(init, 0, *main.body, "C");
    out.finals = finals.size();
    out.aborted = exec.aborted();

    auto exprs = detail::universe(heads, attrs, c.cutoff);
    auto record = [&](const char* kind, std::string detail, const State& s) {
        if (out.first_kind.empty()) {
            out.first_kind = kind;
            out.first_detail = std::move(detail);
            out.relation = to_text(abstract.relation);
            out.final_state = to_text(s);
        }
    };
    for (const auto& s : finals) {
        std::map<ObjectId, std::vector<const Expression*>> by_value;
        for (const auto& e : exprs)
            if (auto v = value(s, 0, e)) by_value[*v].push_back(&e);
        for (const auto& [_, es] : by_value)
            for (std::size_t i = 0; i < es.size(); ++i)
                for (std::size_t j = i + 1; j < es.size(); ++j)
                    if (!abstract.relation.aliased(*es[i], *es[j])) {
                        ++out.alias;
                        record("alias", "[" + es[i]->str() + ", " + es[j]->str() + "] missing", s);
                    }
        for (const auto& e : exprs) {
            if (e.is_current()) continue;
            if (value(init, 0, e) != value(s, 0, e) && !abstract.changes.covers(e)) {
                ++out.change;
                record("change", e.str() + " changed but is not in the change set", s);
            }
        }
    }
    return out;
}

namespace detail {

inline bool violates(const gen::ProgramText& p, const FuzzConfig& c, const std::string& kind) {
    try {
        auto prog = parse_program(gen::render(p));
        auto o = check_program(prog, c);
        return o.first_kind == kind;
    } catch (const ProgramError&) {
        return false;
    }
}

// Greedy shrinking: drop instructions, splice compound bodies in place of the
// compound, and drop helper instructions, while the same kind of violation
// persists.
inline gen::ProgramText minimize(gen::ProgramText p, const FuzzConfig& c, const std::string& kind) {
    auto blocks = [](gen::ProgramText& q) {
        std::vector<gen::Block*> out;
        auto walk = [&](auto&& self, gen::Block& b) -> void {
            out.push_back(&b);
            for (auto& i : b)
                for (auto& sub : i.blocks) self(self, sub);
        };
        walk(walk, q.main);
        for (auto& h : q.helpers) walk(walk, h.body);
        return out;
    };
    for (bool progress = true; progress;) {
        progress = false;
        auto bs = blocks(p);
        for (std::size_t bi = 0; bi < bs.size() && !progress; ++bi) {
            for (std::size_t k = 0; k < bs[bi]->size() && !progress; ++k) {
                auto trial = p;
                auto& tb = *blocks(trial)[bi];
                auto removed = tb[k];
                tb.erase(tb.begin() + static_cast<std::ptrdiff_t>(k));
                if (violates(trial, c, kind)) {
                    p = std::move(trial);
                    progress = true;
                    break;
                }
                for (const auto& sub : removed.blocks) {
                    auto t2 = p;
                    auto& b2 = *blocks(t2)[bi];
                    b2.erase(b2.begin() + static_cast<std::ptrdiff_t>(k));
                    b2.insert(b2.begin() + static_cast<std::ptrdiff_t>(k), sub.begin(), sub.end());
                    if (violates(t2, c, kind)) {
                        p = std::move(t2);
                        progress = true;
                        break;
                    }
                }
            }
        }
    }
    return p;
}

inline std::size_t loop_bound(const FuzzConfig& c) {
    // heads: vars, attrs, helper formals and locals (at most 2 + 1 each), Current
    std::size_t heads = c.vars + c.attrs + c.helpers * 3;
    std::size_t n = 1, layer = heads;
    for (std::size_t len = 1; len <= c.cutoff; ++len) {
        n += layer;
        layer *= std::max<std::size_t>(c.attrs, 1);
    }
    return n * n;
}

} // namespace detail

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

inline gen::ProgramText generate_program(const FuzzConfig& c, std::size_t trial) {
    auto rng = trial_rng(c.seed, trial);
    gen::Generator g(c, rng);
    return g.program();
}

inline FuzzReport soundness_fuzz(const FuzzConfig& c) {
    FuzzReport report;
    report.config = c;
    report.loop_iteration_bound = detail::loop_bound(c);

    struct Slot {
        detail::TrialOutcome outcome;
        gen::ProgramText program;
    };
    std::vector<Slot> slots(c.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < c.trials;) {
            auto p = generate_program(c, t);
            auto text = gen::render(p);
            try {
                auto prog = parse_program(text);
                slots[t].outcome = check_program(prog, c);
            } catch (const std::exception& ex) {
                slots[t].outcome.analysis = 1;
                slots[t].outcome.first_kind = "analysis";
                slots[t].outcome.first_detail = ex.what();
            }
            if (!slots[t].outcome.first_kind.empty()) slots[t].program = std::move(p);
        }
    };
    std::size_t n = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<std::size_t>(n, std::max<std::size_t>(c.trials, 1));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    // Aggregate in trial order so the report does not depend on scheduling.
    for (std::size_t t = 0; t < c.trials; ++t) {
        const auto& o = slots[t].outcome;
        ++report.trials_run;
        report.alias_violations += o.alias;
        report.change_violations += o.change;
        report.analysis_errors += o.analysis;
        report.final_states += o.finals;
        report.aborted_paths += o.aborted;
        report.loops_analyzed += o.loops;
        report.max_loop_iterations = std::max(report.max_loop_iterations, o.max_iter);
        report.safety_valve_trips += o.valve;
        if (o.first_kind.empty() || report.counterexamples.size() >= c.max_counterexamples) continue;
        Counterexample cx;
        cx.trial = t;
        cx.kind = o.first_kind;
        auto small = o.first_kind == "analysis" ? slots[t].program
                                                : detail::minimize(slots[t].program, c, o.first_kind);
        cx.program = gen::render(small);
        try {
            auto prog = parse_program(cx.program);
            auto again = check_program(prog, c);
            const auto& main = prog.resolve("C", "main");
            std::vector<Tag> heads(main.locals.begin(), main.locals.end());
            const auto* cls = prog.find_class("C");
            heads.insert(heads.end(), cls->attributes.begin(), cls->attributes.end());
            std::vector<Tag> attrs(cls->attributes.begin(), cls->attributes.end());
            cx.initial_state = to_text(fresh_state(heads, attrs, c.cutoff));
            cx.final_state = again.final_state;
            cx.detail = again.first_detail;
            cx.relation = again.relation;
        } catch (const std::exception& ex) {
            cx.detail = o.first_detail + " (" + ex.what() + ")";
        }
        report.counterexamples.push_back(std::move(cx));
    }
    return report;
}

inline nlohmann::ordered_json to_json(const FuzzReport& r) {
    nlohmann::ordered_json j;
    j["trials"] = r.config.trials;
    j["seed"] = r.config.seed;
    j["vocabulary"] = {{"vars", r.config.vars}, {"attrs", r.config.attrs}};
    j["maxLength"] = r.config.max_length;
    j["L"] = r.config.cutoff;
    j["unroll"] = r.config.unroll;
    j["assignmentRule"] = r.config.assignment == AssignmentRule::OldValue ? "old-value" : "naive";
    j["aliasViolations"] = r.alias_violations;
    j["changeViolations"] = r.change_violations;
    j["analysisErrors"] = r.analysis_errors;
    j["finalStates"] = r.final_states;
    j["abortedPaths"] = r.aborted_paths;
    j["loopsAnalyzed"] = r.loops_analyzed;
    j["maxLoopIterations"] = r.max_loop_iterations;
    j["loopIterationBound"] = r.loop_iteration_bound;
    j["safetyValveTrips"] = r.safety_valve_trips;
    auto cxs = nlohmann::ordered_json::array();
    for (const auto& c : r.counterexamples)
        cxs.push_back({{"trial", c.trial},
                       {"kind", c.kind},
                       {"detail", c.detail},
                       {"program", c.program},
                       {"initialState", c.initial_state},
                       {"finalState", c.final_state},
                       {"relation", c.relation}});
    j["counterexamples"] = std::move(cxs);
    return j;
}

// Random states and diagrams for the diagram laws.

inline State random_state(std::mt19937_64& rng, const std::vector<Tag>& tags, std::size_t objects,
                          double density) {
    State s;
    for (std::size_t k = 0; k < objects; ++k) s.fresh_object();
    std::bernoulli_distribution edge(density);
    std::uniform_int_distribution<ObjectId> obj(0, static_cast<ObjectId>(objects - 1));
    for (ObjectId o = 0; o < objects; ++o)
        for (Tag t : tags)
            if (edge(rng)) s.set(o, t, obj(rng));
    return s;
}

/// A diagram that holds for (s, o): the associated diagram with extra
/// vertices and edges grafted on.
inline AliasDiagram random_cover(std::mt19937_64& rng, const State& s, ObjectId o,
                                 const std::vector<Tag>& tags, std::size_t extra) {
    auto d = associated_diagram(s, o);
    std::uniform_int_distribution<std::size_t> coin(0, 2);
    for (std::size_t k = 0; k < extra; ++k)
        if (coin(rng) == 0) d.fresh_vertex();
    std::vector<NodeId> vs(d.vertices.begin(), d.vertices.end());
    std::uniform_int_distribution<std::size_t> vi(0, vs.size() - 1), ti(0, tags.size() - 1);
    for (std::size_t k = 0; k < extra; ++k) d.edges.insert(Edge{vs[vi(rng)], tags[ti(rng)], vs[vi(rng)]});
    return d;
}

inline AliasDiagram random_diagram(std::mt19937_64& rng, const std::vector<Tag>& tags,
                                   std::size_t vertices, std::size_t edges) {
    AliasDiagram d;
    for (std::size_t k = 0; k < vertices; ++k) d.fresh_vertex();
    d.root = 0;
    std::uniform_int_distribution<NodeId> vi(0, static_cast<NodeId>(vertices - 1));
    std::uniform_int_distribution<std::size_t> ti(0, tags.size() - 1);
    for (std::size_t k = 0; k < edges; ++k) d.edges.insert(Edge{vi(rng), tags[ti(rng)], vi(rng)});
    return d;
}

} // namespace alias

#endif
