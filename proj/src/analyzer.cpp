#include "ccsp/analyzer.hpp"

#include <algorithm>
#include <chrono>

namespace ccsp::analysis {

namespace {

Env bind_entry_args(const std::vector<std::string>& params,
                    const std::vector<Atom>& args, const std::string& entry) {
    if (params.size() != args.size())
        throw EvalError("bad arguments for " + entry + ": expected " +
                        std::to_string(params.size()) + ", got " +
                        std::to_string(args.size()));
    Env env;
    for (std::size_t i = 0; i < params.size(); ++i) env[params[i]] = args[i];
    return env;
}

} // namespace

EnumerationResult enumerate_entry(const Model& model, const std::string& entry,
                                  const std::vector<Atom>& args, const Bounds& bounds) {
    const auto start = std::chrono::steady_clock::now();
    EnumerationResult result;

    if (auto it = model.standard_defs.find(entry); it != model.standard_defs.end()) {
        Env env = bind_entry_args(it->second.params, args, entry);
        result.traces = traces_standard(it->second.body, model, env, bounds);
    } else if (auto cit = model.compensable_defs.find(entry);
               cit != model.compensable_defs.end()) {
        // A compensable entry is observed through a closing transaction block.
        Env env = bind_entry_args(cit->second.params, args, entry);
        result.traces =
            block_close(traces_compensable(cit->second.body, model, env, bounds), bounds);
    } else {
        throw EvalError("undefined entry " + entry);
    }

    result.exhaustive = result.traces.exhaustive;
    result.stats.trace_count = result.traces.traces.size();
    for (const CompletedTrace& t : result.traces.traces)
        result.stats.max_length = std::max(result.stats.max_length, t.events.size());
    result.stats.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

CompletedTrace rename_trace(const CompletedTrace& t, const ChannelRenaming& renaming) {
    CompletedTrace out = t;
    for (Event& e : out.events) {
        auto it = renaming.find(e.channel);
        if (it != renaming.end()) e.channel = it->second;
    }
    return out;
}

EquivalenceVerdict check_equivalence(const Model& m1, const std::string& e1,
                                     const std::vector<Atom>& args1, const Model& m2,
                                     const std::string& e2,
                                     const std::vector<Atom>& args2,
                                     const Bounds& bounds,
                                     const ChannelRenaming& renaming) {
    EnumerationResult r1 = enumerate_entry(m1, e1, args1, bounds);
    EnumerationResult r2 = enumerate_entry(m2, e2, args2, bounds);

    const std::set<CompletedTrace>& side1 = r1.traces.traces;
    std::set<CompletedTrace> side2;
    for (const CompletedTrace& t : r2.traces.traces)
        side2.insert(rename_trace(t, renaming));

    EquivalenceVerdict verdict;
    verdict.up_to_bound = !r1.exhaustive || !r2.exhaustive;
    verdict.equal = side1 == side2;
    if (!verdict.equal) {
        // The least trace owned by exactly one side.
        auto it1 = side1.begin();
        auto it2 = side2.begin();
        while (it1 != side1.end() && it2 != side2.end()) {
            if (*it1 == *it2) {
                ++it1;
                ++it2;
            } else if (*it1 < *it2) {
                verdict.counterexample = *it1;
                verdict.counterexample_side = 1;
                return verdict;
            } else {
                verdict.counterexample = *it2;
                verdict.counterexample_side = 2;
                return verdict;
            }
        }
        if (it1 != side1.end()) {
            verdict.counterexample = *it1;
            verdict.counterexample_side = 1;
        } else {
            verdict.counterexample = *it2;
            verdict.counterexample_side = 2;
        }
    }
    return verdict;
}

// ---------------------------------------------------------------------------
// Random term generation
// ---------------------------------------------------------------------------

TermGenerator::TermGenerator(std::uint64_t seed, GeneratorOptions options)
    : rng_(static_cast<std::mt19937::result_type>(seed)), options_(options) {}

std::string TermGenerator::channel(int index) const {
    return std::string(1, static_cast<char>('a' + index));
}

namespace {
int pick(std::mt19937& rng, int n) {
    return static_cast<int>(rng() % static_cast<unsigned>(n));
}
} // namespace

SyncSet TermGenerator::sync_set() {
    SyncSet s;
    for (int i = 0; i < options_.alphabet; ++i)
        if (pick(rng_, 3) == 0) s.channels.insert(channel(i));
    return s;
}

StandardPtr TermGenerator::standard_term(int depth) {
    if (depth <= 0 || pick(rng_, 3) == 0) {
        switch (pick(rng_, 4)) {
        case 0: {
            std::string ch = channel(pick(rng_, options_.alphabet));
            if (options_.payloads && pick(rng_, 3) == 0)
                return mk::ev(ch, {Atom::integer(1 + pick(rng_, 2))});
            return mk::ev(ch);
        }
        case 1:
            return mk::skip();
        case 2:
            return options_.allow_throw ? mk::thrw() : mk::skip();
        default:
            return options_.allow_yield ? mk::yield() : mk::skip();
        }
    }
    switch (pick(rng_, 4)) {
    case 0:
        return mk::seq(standard_term(depth - 1), standard_term(depth - 1));
    case 1:
        return mk::choice(standard_term(depth - 1), standard_term(depth - 1));
    case 2: {
        SyncSet sync = pick(rng_, 2) == 0 ? SyncSet{} : sync_set();
        return mk::par(standard_term(depth - 1), sync, standard_term(depth - 1));
    }
    default:
        return mk::interrupt(standard_term(depth - 1), standard_term(depth - 1));
    }
}

StandardPtr TermGenerator::committing_term(int depth) {
    if (depth <= 0 || pick(rng_, 3) == 0) {
        if (pick(rng_, 3) == 0) return mk::skip();
        return mk::ev(channel(pick(rng_, options_.alphabet)));
    }
    switch (pick(rng_, 3)) {
    case 0:
        return mk::seq(committing_term(depth - 1), committing_term(depth - 1));
    case 1:
        return mk::choice(committing_term(depth - 1), committing_term(depth - 1));
    default:
        return mk::par(committing_term(depth - 1), SyncSet{}, committing_term(depth - 1));
    }
}

CompensablePtr TermGenerator::compensable_term(int depth, bool committing_compensations) {
    auto compensation = [&](int d) {
        return committing_compensations ? committing_term(d) : standard_term(d);
    };
    if (depth <= 0 || pick(rng_, 3) == 0) {
        switch (pick(rng_, 4)) {
        case 0: return mk::skipp();
        case 1: return mk::throww();
        case 2: return mk::yieldd();
        default: return mk::pair(standard_term(0), compensation(0));
        }
    }
    switch (pick(rng_, 4)) {
    case 0:
        return mk::pair(standard_term(depth - 1), compensation(depth - 1));
    case 1:
        return mk::cseq(compensable_term(depth - 1, committing_compensations),
                        compensable_term(depth - 1, committing_compensations));
    case 2:
        return mk::cpar(compensable_term(depth - 1, committing_compensations),
                        compensable_term(depth - 1, committing_compensations));
    default:
        return mk::cchoice(compensable_term(depth - 1, committing_compensations),
                           compensable_term(depth - 1, committing_compensations));
    }
}

} // namespace ccsp::analysis
