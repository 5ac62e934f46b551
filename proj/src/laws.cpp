#include "ccsp/analyzer.hpp"
#include "ccsp/dsl.hpp"

#include <array>
#include <functional>

namespace ccsp::analysis {

namespace {

// Generous bounds for law checking; depth-4 terms stay well inside them.
const Bounds kLawBounds{64, 1u << 20};

const Model& empty_model() {
    static const Model m;
    return m;
}

TraceSet eval_std(const StandardPtr& t) {
    return traces_standard(t, empty_model(), {}, kLawBounds);
}

TracePairSet eval_comp(const CompensablePtr& t) {
    return traces_compensable(t, empty_model(), {}, kLawBounds);
}

std::string describe(const char* role, const StandardPtr& t) {
    return std::string(role) + " = " + dsl::print_term(t);
}

std::string sync_text(const SyncSet& s) {
    std::string out = "{";
    bool first = true;
    for (const std::string& c : s.channels) {
        if (!first) out += ", ";
        first = false;
        out += c;
    }
    return out + "}";
}

struct LawRun {
    LawReport report;

    explicit LawRun(std::string law, std::size_t samples, std::uint64_t seed) {
        report.law = std::move(law);
        report.samples = samples;
        report.seed = seed;
        report.passed = true;
    }

    // Records a check; returns false once a failure is latched.
    bool check(bool ok, const std::function<std::string()>& describe_failure) {
        ++report.checked;
        if (!ok && report.passed) {
            report.passed = false;
            report.failure = describe_failure();
        }
        return report.passed;
    }
};

LawReport law_terminal_join_table(std::size_t samples, std::uint64_t seed) {
    LawRun run("terminal-join-table", samples, seed);
    const std::array<Terminal, 3> all = {Terminal::Throw, Terminal::Yield,
                                         Terminal::Commit};
    auto name = [](Terminal t) { return std::string(terminal_name(t)); };
    for (Terminal a : all) {
        run.check(join_terminals(a, Terminal::Commit) == a,
                  [&] { return "COMMIT is not an identity for " + name(a); });
        run.check(join_terminals(Terminal::Throw, a) == Terminal::Throw,
                  [&] { return "THROW does not absorb " + name(a); });
        for (Terminal b : all) {
            run.check(join_terminals(a, b) == join_terminals(b, a), [&] {
                return "join not commutative on (" + name(a) + ", " + name(b) + ")";
            });
            for (Terminal c : all) {
                run.check(join_terminals(a, join_terminals(b, c)) ==
                              join_terminals(join_terminals(a, b), c),
                          [&] {
                              return "join not associative on (" + name(a) + ", " +
                                     name(b) + ", " + name(c) + ")";
                          });
            }
        }
    }
    return run.report;
}

LawReport law_assoc_par(std::size_t samples, std::uint64_t seed) {
    LawRun run("assoc-par", samples, seed);
    TermGenerator gen(seed);
    for (std::size_t i = 0; i < samples && run.report.passed; ++i) {
        StandardPtr p = gen.standard_term();
        StandardPtr q = gen.standard_term();
        StandardPtr r = gen.standard_term();
        TraceSet left = eval_std(mk::par(p, SyncSet{}, mk::par(q, SyncSet{}, r)));
        TraceSet right = eval_std(mk::par(mk::par(p, SyncSet{}, q), SyncSet{}, r));
        run.check(left.exhaustive && right.exhaustive && left.traces == right.traces,
                  [&] {
                      return describe("P", p) + "\n" + describe("Q", q) + "\n" +
                             describe("R", r);
                  });
    }
    return run.report;
}

LawReport law_comm_par(std::size_t samples, std::uint64_t seed) {
    LawRun run("comm-par", samples, seed);
    TermGenerator gen(seed);
    for (std::size_t i = 0; i < samples && run.report.passed; ++i) {
        StandardPtr p = gen.standard_term();
        StandardPtr q = gen.standard_term();
        SyncSet sync = gen.sync_set();
        TraceSet left = eval_std(mk::par(p, sync, q));
        TraceSet right = eval_std(mk::par(q, sync, p));
        run.check(left.exhaustive && right.exhaustive && left.traces == right.traces,
                  [&] {
                      return describe("P", p) + "\n" + describe("Q", q) +
                             "\nX = " + sync_text(sync);
                  });
    }
    return run.report;
}

LawReport law_seq_unit(std::size_t samples, std::uint64_t seed) {
    LawRun run("seq-unit", samples, seed);
    TermGenerator gen(seed);
    for (std::size_t i = 0; i < samples && run.report.passed; ++i) {
        StandardPtr p = gen.standard_term();
        TraceSet base = eval_std(p);
        TraceSet left = eval_std(mk::seq(mk::skip(), p));
        TraceSet right = eval_std(mk::seq(p, mk::skip()));
        run.check(left.traces == base.traces && right.traces == base.traces,
                  [&] { return describe("P", p); });
    }
    return run.report;
}

LawReport law_choice_union(std::size_t samples, std::uint64_t seed) {
    LawRun run("choice-union", samples, seed);
    TermGenerator gen(seed);
    for (std::size_t i = 0; i < samples && run.report.passed; ++i) {
        StandardPtr p = gen.standard_term();
        StandardPtr q = gen.standard_term();
        TraceSet combined = eval_std(mk::choice(p, q));
        // Independent route: the plain set union.
        std::set<CompletedTrace> unioned = eval_std(p).traces;
        for (const CompletedTrace& t : eval_std(q).traces) unioned.insert(t);
        run.check(combined.traces == unioned,
                  [&] { return describe("P", p) + "\n" + describe("Q", q); });
    }
    return run.report;
}

LawReport law_derived_forms(std::size_t samples, std::uint64_t seed) {
    LawRun run("derived-forms", samples, seed);
    struct Form {
        const char* name;
        CompensablePtr keyword;
        CompensablePtr definition;
    };
    const Form forms[] = {
        {"SKIPP = SKIP % SKIP", mk::skipp(), mk::pair(mk::skip(), mk::skip())},
        {"THROWW = THROW % SKIP", mk::throww(), mk::pair(mk::thrw(), mk::skip())},
        {"YIELDD = YIELD % SKIP", mk::yieldd(), mk::pair(mk::yield(), mk::skip())},
    };
    for (const Form& f : forms) {
        run.check(eval_comp(f.keyword).pairs == eval_comp(f.definition).pairs,
                  [&] { return std::string(f.name); });
    }
    return run.report;
}

LawReport law_input_expansion(std::size_t samples, std::uint64_t seed) {
    LawRun run("input-expansion", samples, seed);
    TermGenerator gen(seed);
    for (std::size_t i = 0; i < samples && run.report.passed; ++i) {
        Model model;
        const int size = 1 + static_cast<int>(gen.rng()() % 4);
        std::vector<Atom> values;
        for (int v = 1; v <= size; ++v) values.push_back(Atom::integer(v));
        model.value_sets["S"] = values;

        // Body sequences the bound variable out on a fresh channel so the
        // binding is observable, then continues with a random tail.
        StandardPtr tail = gen.standard_term(2);
        StandardPtr body = mk::seq(mk::ev("got", {mk::var("x")}), tail);
        InputNode node{"in", "S", "x", body};
        StandardPtr direct = std::make_shared<const StandardTerm>(StandardTerm{node});
        TraceSet d = traces_standard(direct, model, {}, kLawBounds);
        TraceSet e = traces_standard(expand_input(node), model, {}, kLawBounds);
        run.check(d.traces == e.traces, [&] {
            return "in?x:S ; got.x ; T with |S| = " + std::to_string(size) +
                   "\nT = " + dsl::print_term(tail);
        });
    }
    return run.report;
}

LawReport law_compensation_reversal(std::size_t samples, std::uint64_t seed) {
    LawRun run("compensation-reversal", samples, seed);
    for (int n = 1; n <= 5 && run.report.passed; ++n) {
        CompensablePtr chain = mk::throww();
        // Build (A1 % A1c) ; ... ; (An % Anc) ; THROWW right to left.
        for (int i = n; i >= 1; --i) {
            std::string fwd = "A" + std::to_string(i);
            chain = mk::cseq(mk::pair(mk::ev(fwd), mk::ev(fwd + "c")), chain);
        }
        TraceSet closed = eval_std(mk::block(chain));
        CompletedTrace expected;
        expected.terminal = Terminal::Commit;
        for (int i = 1; i <= n; ++i)
            expected.events.push_back(make_event("A" + std::to_string(i)));
        for (int i = n; i >= 1; --i)
            expected.events.push_back(make_event("A" + std::to_string(i) + "c"));
        run.check(closed.traces == std::set<CompletedTrace>{expected}, [&] {
            std::string got;
            for (const CompletedTrace& t : closed.traces) got += t.render() + " ";
            return "n = " + std::to_string(n) + ": expected exactly " +
                   expected.render() + ", got " + got;
        });
    }
    return run.report;
}

} // namespace

const std::vector<std::string>& law_registry() {
    static const std::vector<std::string> laws = {
        "assoc-par",      "comm-par",        "seq-unit",
        "choice-union",   "derived-forms",   "input-expansion",
        "compensation-reversal", "terminal-join-table",
    };
    return laws;
}

LawReport check_law(const std::string& law, std::size_t samples, std::uint64_t seed) {
    if (law == "assoc-par") return law_assoc_par(samples, seed);
    if (law == "comm-par") return law_comm_par(samples, seed);
    if (law == "seq-unit") return law_seq_unit(samples, seed);
    if (law == "choice-union") return law_choice_union(samples, seed);
    if (law == "derived-forms") return law_derived_forms(samples, seed);
    if (law == "input-expansion") return law_input_expansion(samples, seed);
    if (law == "compensation-reversal") return law_compensation_reversal(samples, seed);
    if (law == "terminal-join-table") return law_terminal_join_table(samples, seed);
    throw EvalError("unknown law " + law);
}

} // namespace ccsp::analysis
