#ifndef CCSP_SEMANTICS_HPP
#define CCSP_SEMANTICS_HPP

#include "ccsp/model.hpp"

namespace ccsp {

// ---------------------------------------------------------------------------
// Trace-set combinators. Each computes the exact denotational set of its
// operator; the bounds cap trace length and set size, and any drop clears
// the exhaustive flag on the result.
// ---------------------------------------------------------------------------

// { p ++ q | p commits } ∪ { p | p does not commit }
TraceSet seq_compose(const TraceSet& s1, const TraceSet& s2, const Bounds& bounds);

// Plain union.
TraceSet choice_compose(const TraceSet& s1, const TraceSet& s2, const Bounds& bounds);

// Interleaving with simultaneous engagement on channels in `sync`;
// terminals joined. Pairs that disagree on a synchronised event contribute
// nothing.
TraceSet par_compose(const TraceSet& s1, const TraceSet& s2, const SyncSet& sync,
                     const Bounds& bounds);

// { p ++ q | p throws } ∪ { p | p does not throw }
TraceSet interrupt_compose(const TraceSet& s1, const TraceSet& s2, const Bounds& bounds);

// Sequential composition of compensable denotations; compensations of
// completed stages accumulate in reverse order.
TracePairSet comp_seq_compose(const TracePairSet& t1, const TracePairSet& t2,
                              const Bounds& bounds);

// Asynchronous parallel: forwards interleave (terminals joined) and the
// compensations interleave.
TracePairSet comp_par_compose(const TracePairSet& t1, const TracePairSet& t2,
                              const Bounds& bounds);

// Close a transaction block: committed forwards pass through, throwing
// forwards run their compensation (the interrupt is not observable), and
// yielding forwards are dropped.
TraceSet block_close(const TracePairSet& t, const Bounds& bounds);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

TraceSet traces_standard(const StandardTerm& term, const Model& model, const Env& env,
                         const Bounds& bounds);
TracePairSet traces_compensable(const CompensableTerm& term, const Model& model,
                                const Env& env, const Bounds& bounds);

inline TraceSet traces_standard(const StandardPtr& term, const Model& model,
                                const Env& env, const Bounds& bounds) {
    return traces_standard(*term, model, env, bounds);
}
inline TracePairSet traces_compensable(const CompensablePtr& term, const Model& model,
                                       const Env& env, const Bounds& bounds) {
    return traces_compensable(*term, model, env, bounds);
}

// Resolve a payload/argument position against the environment.
Atom resolve_arg(const Arg& arg, const Env& env);

// Rewrite c?x:S ; body into [] x : S @ (c.x ; body). The direct Input
// evaluation and this expansion are two independent routes to the same
// trace set; the input-expansion law compares them.
StandardPtr expand_input(const InputNode& node);

// ---------------------------------------------------------------------------
// Deliberate semantic mutations, used by the law falsifiability tests.
// Production code never arms these; the flag is thread-local so armed
// tests cannot leak into concurrent evaluations.
// ---------------------------------------------------------------------------
namespace testing {

enum class Mutation {
    None,
    JoinMax,                // join_terminals takes the max instead of the min
    SeqIgnoresTerminal,     // sequence continues past non-COMMIT endings
    ParTruncatesMerges,     // parallel keeps only the first two interleavings
    ChoiceDropsRight,       // choice forgets its right operand
    SkippThrowCompensation, // SKIPP gets a throwing compensation
    InputSkipsLastValue,    // direct input evaluation drops the last set value
    CompSeqForwardOrder,    // compensations accumulate in forward order
    BlockKeepsThrow,        // a closed block leaks the interrupt
};

Mutation active_mutation();

struct ScopedMutation {
    explicit ScopedMutation(Mutation m);
    ~ScopedMutation();
    ScopedMutation(const ScopedMutation&) = delete;
    ScopedMutation& operator=(const ScopedMutation&) = delete;

private:
    Mutation previous_;
};

} // namespace testing

} // namespace ccsp

#endif
