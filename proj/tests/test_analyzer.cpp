#include "ccsp/analyzer.hpp"
#include "ccsp/dsl.hpp"
#include "ccsp/reports.hpp"

#include <doctest.h>

using namespace ccsp;
using namespace ccsp::analysis;

namespace {

Model parse_ok(const std::string& text) {
    auto result = dsl::parse_model(text);
    CAPTURE(render_diagnostics(result.diagnostics));
    REQUIRE(result.ok());
    return *result.model;
}

const Bounds kBounds{};

std::set<CompletedTrace> run(const std::string& text, const std::string& entry,
                             std::vector<Atom> args = {}) {
    Model m = parse_ok(text);
    return enumerate_entry(m, entry, args, kBounds).traces.traces;
}

} // namespace

TEST_CASE("enumerate block semantics and plain entries") {
    CHECK(run("P = tx{ (A % A2) ; THROWW }", "P") ==
          std::set<CompletedTrace>{
              {{make_event("A"), make_event("A2")}, Terminal::Commit}});
    CHECK(run("P = SKIP", "P") ==
          std::set<CompletedTrace>{{{}, Terminal::Commit}});
}

TEST_CASE("a compensable entry is closed before enumeration") {
    std::set<CompletedTrace> traces = run("PP = (A % A2) ; THROWW", "PP");
    CHECK(traces == std::set<CompletedTrace>{
                        {{make_event("A"), make_event("A2")}, Terminal::Commit}});
}

TEST_CASE("enumerate rejects bad entries") {
    Model m = parse_ok("P(x) = c.x");
    CHECK_THROWS_WITH_AS((void)enumerate_entry(m, "Nope", {}, kBounds),
                         "undefined entry Nope", EvalError);
    CHECK_THROWS_AS((void)enumerate_entry(m, "P", {}, kBounds), EvalError);
}

TEST_CASE("enumeration stats and truncation flag") {
    Model m = parse_ok("P = a ; b ; c");
    EnumerationResult r = enumerate_entry(m, "P", {}, kBounds);
    CHECK(r.exhaustive);
    CHECK(r.stats.trace_count == 1);
    CHECK(r.stats.max_length == 3);

    Bounds tight{2, 100000};
    EnumerationResult truncated = enumerate_entry(m, "P", {}, tight);
    CHECK_FALSE(truncated.exhaustive);
}

TEST_CASE("equivalence: reflexive, counterexample, renaming") {
    Model m = parse_ok("P = A ; B\nQ = B ; A\nR = A ; B");
    CHECK(check_equivalence(m, "P", {}, m, "P", {}, kBounds).equal);
    CHECK(check_equivalence(m, "P", {}, m, "R", {}, kBounds).equal);

    EquivalenceVerdict v = check_equivalence(m, "P", {}, m, "Q", {}, kBounds);
    CHECK_FALSE(v.equal);
    REQUIRE(v.counterexample.has_value());
    CHECK(v.counterexample->render() == "⟨A,B⟩✓");
    CHECK(v.counterexample_side == 1);

    Model renamed = parse_ok("P = X ; Y");
    ChannelRenaming renaming{{"X", "A"}, {"Y", "B"}};
    CHECK(check_equivalence(m, "P", {}, renamed, "P", {}, kBounds, renaming).equal);
}

TEST_CASE("equivalence flags bound truncation") {
    Model m = parse_ok("P = a ; b ; c\nQ = a ; b ; c");
    Bounds tight{2, 100000};
    EquivalenceVerdict v = check_equivalence(m, "P", {}, m, "Q", {}, tight);
    CHECK(v.up_to_bound);
    CHECK(v.equal);  // equivalent up to the bound
}

TEST_CASE("equivalence behaves as an equivalence relation on sampled terms") {
    TermGenerator gen(7);
    Model empty;
    for (int i = 0; i < 12; ++i) {
        Model m;
        m.standard_defs["P"] = {{}, gen.standard_term(3)};
        m.standard_defs["Q"] = {{}, gen.standard_term(3)};
        m.standard_defs["R"] = {{}, gen.standard_term(3)};
        auto eq = [&](const char* a, const char* b) {
            return check_equivalence(m, a, {}, m, b, {}, kBounds).equal;
        };
        CHECK(eq("P", "P"));
        CHECK(eq("Q", "Q"));
        CHECK(eq("P", "Q") == eq("Q", "P"));
        if (eq("P", "Q") && eq("Q", "R")) CHECK(eq("P", "R"));
    }
}

TEST_CASE("law registry runs clean on the real semantics") {
    for (const std::string& law : law_registry()) {
        LawReport r = check_law(law, 60, 42);
        CAPTURE(law);
        CAPTURE(r.failure);
        CHECK(r.passed);
        CHECK(r.checked > 0);
    }
}

TEST_CASE("unknown law names are rejected") {
    CHECK_THROWS_WITH_AS((void)check_law("no-such", 10, 1), "unknown law no-such",
                         EvalError);
}

TEST_CASE("every law is falsifiable under a deliberate mutation") {
    struct Case {
        const char* law;
        testing::Mutation mutation;
    };
    const Case cases[] = {
        {"terminal-join-table", testing::Mutation::JoinMax},
        {"assoc-par", testing::Mutation::ParTruncatesMerges},
        {"comm-par", testing::Mutation::ParTruncatesMerges},
        {"seq-unit", testing::Mutation::SeqIgnoresTerminal},
        {"choice-union", testing::Mutation::ChoiceDropsRight},
        {"derived-forms", testing::Mutation::SkippThrowCompensation},
        {"input-expansion", testing::Mutation::InputSkipsLastValue},
        {"compensation-reversal", testing::Mutation::CompSeqForwardOrder},
    };
    for (const Case& c : cases) {
        CAPTURE(c.law);
        testing::ScopedMutation guard(c.mutation);
        LawReport r = check_law(c.law, 200, 42);
        CHECK_FALSE(r.passed);
        CHECK_FALSE(r.failure.empty());
    }
}

TEST_CASE("law checks are deterministic for a fixed seed") {
    LawReport a = check_law("assoc-par", 40, 1234);
    LawReport b = check_law("assoc-par", 40, 1234);
    CHECK(a.passed == b.passed);
    CHECK(a.checked == b.checked);
    CHECK(a.failure == b.failure);
}

TEST_CASE("compensation consistency on sequential blocks") {
    Model m = parse_ok(
        "P = tx{ (A % A2) ; (B % B2) ; THROWW }\n"
        "Q = tx{ (A % A2) }\n"
        "R = tx{ THROWW ; (A % A2) }\n");

    ConsistencyReport rp = check_compensation_consistency(m, "P", {}, kBounds);
    CHECK(rp.consistent);
    CHECK(rp.blocks_checked == 1);
    CHECK(rp.throw_traces_checked > 0);

    // No throwing trace at all: vacuously consistent.
    ConsistencyReport rq = check_compensation_consistency(m, "Q", {}, kBounds);
    CHECK(rq.consistent);
    CHECK(rq.throw_traces_checked == 0);

    // Interruption before any pair completed: the suffix is empty.
    ConsistencyReport rr = check_compensation_consistency(m, "R", {}, kBounds);
    CHECK(rr.consistent);
    CHECK(rr.throw_traces_checked > 0);
}

TEST_CASE("compensation consistency covers parallel compensations and nesting") {
    Model m = parse_ok(
        "System = start ; tx{ ((A % A2) || (B % B2)) ; THROWW } ; finish\n");
    ConsistencyReport r = check_compensation_consistency(m, "System", {}, kBounds);
    CHECK(r.consistent);
    CHECK(r.blocks_checked == 1);
    CHECK(r.throw_traces_checked > 0);
}

TEST_CASE("consistency detects a broken compensation order") {
    Model m = parse_ok("P = tx{ (A % A2) ; (B % B2) ; THROWW }");
    testing::ScopedMutation guard(testing::Mutation::CompSeqForwardOrder);
    ConsistencyReport r = check_compensation_consistency(m, "P", {}, kBounds);
    CHECK_FALSE(r.consistent);
    CHECK_FALSE(r.violation.empty());
}

TEST_CASE("enumeration and reports are deterministic") {
    Model m = parse_ok("set S = {1, 2}\nP = [] x : S @ a.x ; (b [] c)");
    EnumerationResult r1 = enumerate_entry(m, "P", {}, kBounds);
    EnumerationResult r2 = enumerate_entry(m, "P", {}, kBounds);
    CHECK(r1.traces == r2.traces);
    CHECK(reports::enumeration_json("P", r1, kBounds).dump() ==
          reports::enumeration_json("P", r2, kBounds).dump());
}
