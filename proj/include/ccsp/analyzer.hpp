#ifndef CCSP_ANALYZER_HPP
#define CCSP_ANALYZER_HPP

#include "ccsp/bpel.hpp"
#include "ccsp/model.hpp"
#include "ccsp/semantics.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ccsp::analysis {

struct EnumerationStats {
    std::size_t trace_count = 0;
    std::size_t max_length = 0;
    double elapsed_seconds = 0.0;  // not serialized; reports must be reproducible
};

struct EnumerationResult {
    TraceSet traces;
    bool exhaustive = true;
    EnumerationStats stats;
};

// Evaluate a named entry. A compensable entry is wrapped in a transaction
// block first, so the result is always a plain trace set.
EnumerationResult enumerate_entry(const Model& model, const std::string& entry,
                                  const std::vector<Atom>& args, const Bounds& bounds);

// Channel renaming applied to one side of an equivalence check.
using ChannelRenaming = std::map<std::string, std::string>;

CompletedTrace rename_trace(const CompletedTrace& t, const ChannelRenaming& renaming);

struct EquivalenceVerdict {
    bool equal = false;
    bool up_to_bound = false;           // some side hit a bound
    std::optional<CompletedTrace> counterexample;
    int counterexample_side = 0;        // 1 or 2 when present
};

// Finite-trace-set equality of two entries, optionally renaming side 2's
// channels first. The counterexample is the least trace owned by only one
// side.
EquivalenceVerdict check_equivalence(const Model& m1, const std::string& e1,
                                     const std::vector<Atom>& args1, const Model& m2,
                                     const std::string& e2,
                                     const std::vector<Atom>& args2,
                                     const Bounds& bounds,
                                     const ChannelRenaming& renaming = {});

// ---------------------------------------------------------------------------
// Algebraic law checking
// ---------------------------------------------------------------------------

struct LawReport {
    std::string law;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool passed = false;
    std::size_t checked = 0;       // instances actually evaluated
    std::string failure;           // first failing instance, DSL syntax
};

// Registered laws: assoc-par, comm-par, seq-unit, choice-union,
// derived-forms, input-expansion, compensation-reversal,
// terminal-join-table.
const std::vector<std::string>& law_registry();

// Runs one law over `samples` seeded random instances (exhaustively where
// the law is finite). Throws EvalError for an unknown law name.
LawReport check_law(const std::string& law, std::size_t samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Compensation-order consistency
// ---------------------------------------------------------------------------

struct ConsistencyReport {
    std::string entry;
    std::size_t blocks_checked = 0;       // block evaluations encountered
    std::size_t throw_traces_checked = 0; // throwing forwards verified
    bool consistent = true;
    std::string violation;                // first offending trace, rendered
};

// For every transaction block evaluated under the entry, re-derives the
// expected compensation runs from an instrumented enumeration (which pairs
// completed, in which order/structure) and checks each throwing trace's
// suffix against them.
ConsistencyReport check_compensation_consistency(const Model& model,
                                                 const std::string& entry,
                                                 const std::vector<Atom>& args,
                                                 const Bounds& bounds);

// ---------------------------------------------------------------------------
// Random term generation (seeded, reproducible)
// ---------------------------------------------------------------------------

struct GeneratorOptions {
    int max_depth = 4;
    int alphabet = 4;              // channels a, b, c, d
    bool payloads = true;          // sprinkle c.1 / c.2 events
    bool allow_throw = true;
    bool allow_yield = true;
};

class TermGenerator {
public:
    TermGenerator(std::uint64_t seed, GeneratorOptions options = {});

    StandardPtr standard_term(int depth);
    StandardPtr standard_term() { return standard_term(options_.max_depth); }
    // Compensations restricted to committing behaviour when
    // `committing_compensations` is set.
    CompensablePtr compensable_term(int depth, bool committing_compensations = false);
    SyncSet sync_set();

    std::mt19937& rng() { return rng_; }

private:
    std::mt19937 rng_;
    GeneratorOptions options_;
    std::string channel(int index) const;
    StandardPtr committing_term(int depth);
};

} // namespace ccsp::analysis

#endif
