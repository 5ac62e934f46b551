#include "ccsp/semantics.hpp"

#include <doctest.h>

#include <atomic>
#include <thread>

using namespace ccsp;

namespace {

const Bounds kBounds{};

Event E(const std::string& ch) { return make_event(ch); }
Event Ei(const std::string& ch, std::int64_t v) {
    return make_event(ch, {Atom::integer(v)});
}
Event Ea(const std::string& ch, const std::string& a) {
    return make_event(ch, {Atom::ident(a)});
}

CompletedTrace T(std::vector<Event> events, Terminal t) {
    return make_trace(std::move(events), t);
}

TraceSet ts(std::initializer_list<CompletedTrace> traces) {
    TraceSet s;
    for (const auto& t : traces) s.traces.insert(t);
    return s;
}

TracePairSet tps(std::initializer_list<TracePair> pairs) {
    TracePairSet s;
    for (const auto& p : pairs) s.pairs.insert(p);
    return s;
}

const CompletedTrace kEmptyCommit = T({}, Terminal::Commit);
const CompletedTrace kEmptyThrow = T({}, Terminal::Throw);
const CompletedTrace kEmptyYield = T({}, Terminal::Yield);
const TracePair kYieldPair{kEmptyYield, kEmptyCommit};

Model empty_model() { return Model{}; }

TraceSet eval(const StandardPtr& t, const Model& m = empty_model(),
              const Env& env = {}) {
    return traces_standard(t, m, env, kBounds);
}

TracePairSet ceval(const CompensablePtr& t, const Model& m = empty_model(),
                   const Env& env = {}) {
    return traces_compensable(t, m, env, kBounds);
}

} // namespace

TEST_CASE("base processes") {
    CHECK(eval(mk::skip()).traces == ts({kEmptyCommit}).traces);
    CHECK(eval(mk::thrw()).traces == ts({kEmptyThrow}).traces);
    CHECK(eval(mk::yield()).traces == ts({kEmptyYield, kEmptyCommit}).traces);
    CHECK(eval(mk::ev("Order", {mk::lit("m1")})).traces ==
          ts({T({Ea("Order", "m1")}, Terminal::Commit)}).traces);
    // A THROW ending does not continue into the rest of a sequence.
    CHECK(eval(mk::seq(mk::thrw(), mk::ev("A"))).traces == ts({kEmptyThrow}).traces);
}

TEST_CASE("seq_compose") {
    TraceSet a = ts({T({E("A")}, Terminal::Commit)});
    TraceSet b = ts({T({E("B")}, Terminal::Commit)});
    CHECK(seq_compose(a, b, kBounds).traces ==
          ts({T({E("A"), E("B")}, Terminal::Commit)}).traces);

    TraceSet thrown = ts({kEmptyThrow});
    CHECK(seq_compose(thrown, b, kBounds).traces == ts({kEmptyThrow}).traces);

    // A ; YIELD ; B is willing to yield between the two events.
    TraceSet mid = eval(mk::seq(mk::ev("A"), mk::seq(mk::yield(), mk::ev("B"))));
    CHECK(mid.traces == ts({T({E("A")}, Terminal::Yield),
                            T({E("A"), E("B")}, Terminal::Commit)}).traces);
}

TEST_CASE("choice_compose") {
    TraceSet a = ts({T({E("A")}, Terminal::Commit)});
    TraceSet b = ts({T({E("B")}, Terminal::Commit)});
    CHECK(choice_compose(a, b, kBounds).traces ==
          ts({T({E("A")}, Terminal::Commit), T({E("B")}, Terminal::Commit)}).traces);
    CHECK(choice_compose(a, a, kBounds).traces == a.traces);
}

TEST_CASE("indexed choice over a declared set") {
    Model m;
    m.value_sets["S"] = {Atom::ident("s1"), Atom::ident("s2")};
    StandardPtr indexed = mk::ichoice("x", "S", mk::ev("P", {mk::var("x")}));
    TraceSet direct = eval(indexed, m);
    TraceSet expanded = choice_compose(eval(mk::ev("P", {mk::lit("s1")})),
                                       eval(mk::ev("P", {mk::lit("s2")})), kBounds);
    CHECK(direct.traces == expanded.traces);
}

TEST_CASE("par_compose") {
    TraceSet a = ts({T({E("a")}, Terminal::Commit)});
    TraceSet b = ts({T({E("b")}, Terminal::Commit)});
    CHECK(par_compose(a, b, SyncSet{}, kBounds).traces ==
          ts({T({E("a"), E("b")}, Terminal::Commit),
              T({E("b"), E("a")}, Terminal::Commit)}).traces);

    SyncSet on_c{{"c"}};
    TraceSet c1 = ts({T({Ei("c", 1)}, Terminal::Commit)});
    TraceSet c2 = ts({T({Ei("c", 2)}, Terminal::Commit)});
    CHECK(par_compose(c1, c1, on_c, kBounds).traces ==
          ts({T({Ei("c", 1)}, Terminal::Commit)}).traces);
    // Payload mismatch on a synchronised channel blocks the pair entirely.
    CHECK(par_compose(c1, c2, on_c, kBounds).traces.empty());
    CHECK(par_compose(c1, c2, on_c, kBounds).exhaustive);
}

TEST_CASE("par_compose joins terminals") {
    TraceSet a = ts({T({E("a")}, Terminal::Throw)});
    TraceSet b = ts({T({E("b")}, Terminal::Commit)});
    TraceSet r = par_compose(a, b, SyncSet{}, kBounds);
    CHECK(r.traces == ts({T({E("a"), E("b")}, Terminal::Throw),
                          T({E("b"), E("a")}, Terminal::Throw)}).traces);
}

TEST_CASE("interrupt_compose") {
    TraceSet thrown = ts({T({E("A")}, Terminal::Throw)});
    TraceSet handler = ts({T({E("H")}, Terminal::Commit)});
    CHECK(interrupt_compose(thrown, handler, kBounds).traces ==
          ts({T({E("A"), E("H")}, Terminal::Commit)}).traces);

    TraceSet committed = ts({T({E("A")}, Terminal::Commit)});
    CHECK(interrupt_compose(committed, handler, kBounds).traces == committed.traces);

    // Yield is not handled by the interrupt handler.
    TraceSet yielded = ts({kEmptyYield});
    CHECK(interrupt_compose(yielded, handler, kBounds).traces == yielded.traces);
}

TEST_CASE("compensation pair denotation") {
    TracePairSet skipp = ceval(mk::skipp());
    CHECK(skipp.pairs ==
          tps({{kEmptyCommit, kEmptyCommit}, kYieldPair}).pairs);
    CHECK(skipp.pairs == ceval(mk::pair(mk::skip(), mk::skip())).pairs);
    CHECK(ceval(mk::throww()).pairs ==
          ceval(mk::pair(mk::thrw(), mk::skip())).pairs);
    CHECK(ceval(mk::yieldd()).pairs ==
          ceval(mk::pair(mk::yield(), mk::skip())).pairs);

    TracePairSet pa = ceval(mk::pair(mk::ev("A"), mk::ev("A2")));
    CHECK(pa.pairs == tps({{T({E("A")}, Terminal::Commit), T({E("A2")}, Terminal::Commit)},
                           kYieldPair}).pairs);

    // The forward behaviour never committed, so nothing is installed.
    TracePairSet pt = ceval(mk::pair(mk::thrw(), mk::ev("A2")));
    CHECK(pt.pairs == tps({{kEmptyThrow, kEmptyCommit}, kYieldPair}).pairs);
}

TEST_CASE("comp_seq_compose accumulates compensations in reverse") {
    CompensablePtr first = mk::pair(mk::ev("A"), mk::ev("A2"));
    CompensablePtr second = mk::pair(mk::ev("B"), mk::ev("B2"));
    TracePairSet r = ceval(mk::cseq(first, second));
    CHECK(r.pairs == tps({{T({E("A"), E("B")}, Terminal::Commit),
                           T({E("B2"), E("A2")}, Terminal::Commit)},
                          {T({E("A")}, Terminal::Yield), T({E("A2")}, Terminal::Commit)},
                          kYieldPair}).pairs);

    // THROWW aborts the forward behaviour; A's compensation is retained.
    TracePairSet aborted = ceval(mk::cseq(first, mk::throww()));
    CHECK(aborted.pairs ==
          tps({{T({E("A")}, Terminal::Throw), T({E("A2")}, Terminal::Commit)},
               {T({E("A")}, Terminal::Yield), T({E("A2")}, Terminal::Commit)},
               kYieldPair}).pairs);

    // SKIPP ; QQ adds only the standing yield pair (already present in QQ).
    TracePairSet lhs = ceval(mk::cseq(mk::skipp(), first));
    CHECK(lhs.pairs == ceval(first).pairs);
}

TEST_CASE("comp_par_compose interleaves forwards and compensations") {
    CompensablePtr pa = mk::pair(mk::ev("A"), mk::ev("A2"));
    CompensablePtr pb = mk::pair(mk::ev("B"), mk::ev("B2"));
    TracePairSet r = ceval(mk::cpar(pa, pb));
    CHECK(r.pairs ==
          tps({{T({E("A"), E("B")}, Terminal::Commit), T({E("A2"), E("B2")}, Terminal::Commit)},
               {T({E("A"), E("B")}, Terminal::Commit), T({E("B2"), E("A2")}, Terminal::Commit)},
               {T({E("B"), E("A")}, Terminal::Commit), T({E("A2"), E("B2")}, Terminal::Commit)},
               {T({E("B"), E("A")}, Terminal::Commit), T({E("B2"), E("A2")}, Terminal::Commit)},
               {T({E("A")}, Terminal::Yield), T({E("A2")}, Terminal::Commit)},
               {T({E("B")}, Terminal::Yield), T({E("B2")}, Terminal::Commit)},
               kYieldPair}).pairs);

    // A sibling THROWW interrupts the pair, before or after it ran.
    TracePairSet vs_throw = ceval(mk::cpar(pa, mk::throww()));
    CHECK(vs_throw.pairs ==
          tps({{T({E("A")}, Terminal::Throw), T({E("A2")}, Terminal::Commit)},
               {T({E("A")}, Terminal::Yield), T({E("A2")}, Terminal::Commit)},
               {kEmptyThrow, kEmptyCommit},
               kYieldPair}).pairs);

    // PP || SKIPP: PP's trace pairs with terminals joined against
    // {COMMIT, YIELD}.
    TracePairSet vs_skipp = ceval(mk::cpar(pa, mk::skipp()));
    CHECK(vs_skipp.pairs ==
          tps({{T({E("A")}, Terminal::Commit), T({E("A2")}, Terminal::Commit)},
               {T({E("A")}, Terminal::Yield), T({E("A2")}, Terminal::Commit)},
               kYieldPair}).pairs);
}

TEST_CASE("block_close") {
    CompensablePtr pa = mk::pair(mk::ev("A"), mk::ev("A2"));
    CHECK(eval(mk::block(mk::cseq(pa, mk::throww()))).traces ==
          ts({T({E("A"), E("A2")}, Terminal::Commit)}).traces);
    CHECK(eval(mk::block(mk::skipp())).traces == ts({kEmptyCommit}).traces);
    CHECK(eval(mk::block(pa)).traces == ts({T({E("A")}, Terminal::Commit)}).traces);
}

TEST_CASE("input evaluation and expansion agree") {
    Model m;
    m.value_sets["S"] = {Atom::integer(1), Atom::integer(2)};
    InputNode node{"in", "S", "x", mk::output("out", mk::var("x"))};
    StandardPtr direct = std::make_shared<const StandardTerm>(StandardTerm{node});
    TraceSet d = eval(direct, m);
    CHECK(d.traces == ts({T({Ei("in", 1), Ei("out", 1)}, Terminal::Commit),
                          T({Ei("in", 2), Ei("out", 2)}, Terminal::Commit)}).traces);
    CHECK(eval(expand_input(node), m).traces == d.traces);

    Model singleton;
    singleton.value_sets["S"] = {Atom::integer(1)};
    CHECK(eval(direct, singleton).traces ==
          ts({T({Ei("in", 1), Ei("out", 1)}, Terminal::Commit)}).traces);
}

TEST_CASE("input-bound compensation pair expands like the indexed form") {
    Model m;
    m.value_sets["S"] = {Atom::ident("s1"), Atom::ident("s2")};
    CompensablePtr sugar =
        mk::cinput("A", "S", "x", mk::ev("B", {mk::var("x")}), mk::skipp());

    auto branch = [&](const char* v) {
        return ceval(mk::cseq(mk::pair(mk::ev("A", {mk::lit(v)}),
                                       mk::ev("B", {mk::lit(v)})),
                              mk::skipp()),
                     m);
    };
    TracePairSet expected = branch("s1");
    for (const auto& p : branch("s2").pairs) expected.pairs.insert(p);
    CHECK(ceval(sugar, m).pairs == expected.pairs);
}

TEST_CASE("calls bind parameters") {
    Model m;
    m.value_sets["M"] = {Atom::ident("m1"), Atom::ident("m2")};
    m.standard_defs["P"] = {{"x"}, mk::ev("c", {mk::var("x")})};
    CHECK(eval(mk::call("P", {mk::lit("m1")}), m).traces ==
          ts({T({Ea("c", "m1")}, Terminal::Commit)}).traces);
    CHECK_THROWS_AS((void)eval(mk::call("Nope"), m), EvalError);
    CHECK_THROWS_AS((void)eval(mk::call("P"), m), EvalError);  // arity
    CHECK_THROWS_AS((void)eval(mk::ichoice("x", "Missing", mk::skip()), m), EvalError);
    CHECK_THROWS_AS((void)eval(mk::ev("c", {mk::var("free")}), m), EvalError);
}

TEST_CASE("bounds: length cap drops traces and clears exhaustive") {
    Bounds tight{1, 100000};
    TraceSet r = traces_standard(mk::seq(mk::ev("A"), mk::ev("B")), empty_model(), {},
                                 tight);
    CHECK(r.traces.empty());
    CHECK_FALSE(r.exhaustive);
}

TEST_CASE("bounds: size cap keeps the least traces deterministically") {
    Bounds cap{24, 2};
    StandardPtr t = mk::choice(mk::ev("c"), mk::choice(mk::ev("a"), mk::ev("b")));
    TraceSet r = traces_standard(t, empty_model(), {}, cap);
    CHECK(r.traces == ts({T({E("a")}, Terminal::Commit),
                          T({E("b")}, Terminal::Commit)}).traces);
    CHECK_FALSE(r.exhaustive);
}

TEST_CASE("evaluation is deterministic") {
    Model m;
    m.value_sets["S"] = {Atom::integer(1), Atom::integer(2), Atom::integer(3)};
    StandardPtr t = mk::par(
        mk::ichoice("x", "S", mk::ev("c", {mk::var("x")})), SyncSet{},
        mk::seq(mk::ev("A"), mk::choice(mk::ev("B"), mk::yield())));
    TraceSet first = eval(t, m);
    TraceSet second = eval(t, m);
    CHECK(first == second);
}

TEST_CASE("scoped mutations change the semantics and restore it") {
    {
        testing::ScopedMutation guard(testing::Mutation::JoinMax);
        CHECK(join_terminals(Terminal::Throw, Terminal::Commit) == Terminal::Commit);
    }
    CHECK(join_terminals(Terminal::Throw, Terminal::Commit) == Terminal::Throw);
}

TEST_CASE("independent models evaluate safely from multiple threads") {
    Model m1;
    m1.value_sets["S"] = {Atom::integer(1), Atom::integer(2)};
    m1.standard_defs["P"] = {{}, mk::ichoice("x", "S", mk::ev("c", {mk::var("x")}))};
    Model m2;
    m2.standard_defs["Q"] = {{}, mk::block(mk::cseq(
        mk::pair(mk::ev("A"), mk::ev("A2")), mk::throww()))};

    TraceSet expect1 = traces_standard(m1.standard_defs.at("P").body, m1, {}, kBounds);
    TraceSet expect2 = traces_standard(m2.standard_defs.at("Q").body, m2, {}, kBounds);

    std::vector<std::thread> workers;
    std::atomic<int> mismatches{0};
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&] {
            for (int i = 0; i < 50; ++i) {
                if (!(traces_standard(m1.standard_defs.at("P").body, m1, {}, kBounds) ==
                      expect1))
                    ++mismatches;
                if (!(traces_standard(m2.standard_defs.at("Q").body, m2, {}, kBounds) ==
                      expect2))
                    ++mismatches;
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(mismatches == 0);
}
