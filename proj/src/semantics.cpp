#include "ccsp/semantics.hpp"

#include <algorithm>

namespace ccsp {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

thread_local testing::Mutation g_mutation = testing::Mutation::None;

bool mutated(testing::Mutation m) { return g_mutation == m; }

// Inserts into a canonical set while honouring the bounds: oversized traces
// are dropped and, once the set is full, only traces below the current
// maximum displace it, so the surviving set is always the least N traces
// regardless of insertion order.
struct TraceSink {
    std::set<CompletedTrace>& out;
    const Bounds& bounds;
    bool& exhaustive;

    void insert(CompletedTrace t) {
        if (t.events.size() > bounds.max_events) {
            exhaustive = false;
            return;
        }
        if (out.size() < bounds.max_traces) {
            out.insert(std::move(t));
            return;
        }
        if (out.count(t)) return;
        exhaustive = false;
        auto last = std::prev(out.end());
        if (t < *last) {
            out.erase(last);
            out.insert(std::move(t));
        }
    }
};

struct PairSink {
    std::set<TracePair>& out;
    const Bounds& bounds;
    bool& exhaustive;

    void insert(TracePair p) {
        if (p.forward.events.size() > bounds.max_events ||
            p.compensation.events.size() > bounds.max_events) {
            exhaustive = false;
            return;
        }
        if (out.size() < bounds.max_traces) {
            out.insert(std::move(p));
            return;
        }
        if (out.count(p)) return;
        exhaustive = false;
        auto last = std::prev(out.end());
        if (p < *last) {
            out.erase(last);
            out.insert(std::move(p));
        }
    }
};

// Sequential composition of two completed traces.
CompletedTrace seq_traces(const CompletedTrace& p, const CompletedTrace& q) {
    CompletedTrace r;
    r.events = p.events;
    r.events.insert(r.events.end(), q.events.begin(), q.events.end());
    r.terminal = q.terminal;
    return r;
}

// All interleavings of u and v where channels in `sync` engage both sides
// simultaneously with equal payloads. Dead ends contribute nothing.
void merge_events(const std::vector<Event>& u, std::size_t i,
                  const std::vector<Event>& v, std::size_t j, const SyncSet& sync,
                  std::vector<Event>& prefix, Terminal terminal, TraceSink& sink,
                  const Bounds& bounds, std::size_t* emitted, std::size_t emit_cap) {
    if (emitted && *emitted >= emit_cap) return;
    // The merged result has at least max(remaining) further events.
    const std::size_t remaining = std::max(u.size() - i, v.size() - j);
    if (prefix.size() + remaining > bounds.max_events) {
        sink.exhaustive = false;
        return;
    }
    if (i == u.size() && j == v.size()) {
        sink.insert(CompletedTrace{prefix, terminal});
        if (emitted) ++*emitted;
        return;
    }
    const bool have_u = i < u.size();
    const bool have_v = j < v.size();
    if (have_u && !sync.contains(u[i].channel)) {
        prefix.push_back(u[i]);
        merge_events(u, i + 1, v, j, sync, prefix, terminal, sink, bounds, emitted, emit_cap);
        prefix.pop_back();
    }
    if (have_v && !sync.contains(v[j].channel)) {
        prefix.push_back(v[j]);
        merge_events(u, i, v, j + 1, sync, prefix, terminal, sink, bounds, emitted, emit_cap);
        prefix.pop_back();
    }
    if (have_u && have_v && sync.contains(u[i].channel) && sync.contains(v[j].channel) &&
        u[i] == v[j]) {
        prefix.push_back(u[i]);
        merge_events(u, i + 1, v, j + 1, sync, prefix, terminal, sink, bounds, emitted, emit_cap);
        prefix.pop_back();
    }
}

void merge_into(const CompletedTrace& p, const CompletedTrace& q, const SyncSet& sync,
                TraceSink& sink, const Bounds& bounds) {
    std::vector<Event> prefix;
    const Terminal t = join_terminals(p.terminal, q.terminal);
    if (mutated(testing::Mutation::ParTruncatesMerges)) {
        std::size_t emitted = 0;
        merge_events(p.events, 0, q.events, 0, sync, prefix, t, sink, bounds, &emitted, 2);
    } else {
        merge_events(p.events, 0, q.events, 0, sync, prefix, t, sink, bounds, nullptr, 0);
    }
}

const CompletedTrace& empty_commit() {
    static const CompletedTrace t{{}, Terminal::Commit};
    return t;
}
const CompletedTrace& empty_yield() {
    static const CompletedTrace t{{}, Terminal::Yield};
    return t;
}

} // namespace

Terminal join_terminals(Terminal a, Terminal b) {
    if (mutated(testing::Mutation::JoinMax))
        return static_cast<int>(a) > static_cast<int>(b) ? a : b;
    return static_cast<int>(a) < static_cast<int>(b) ? a : b;
}

TraceSet seq_compose(const TraceSet& s1, const TraceSet& s2, const Bounds& bounds) {
    TraceSet r;
    r.exhaustive = s1.exhaustive && s2.exhaustive;
    TraceSink sink{r.traces, bounds, r.exhaustive};
    for (const auto& p : s1.traces) {
        const bool continues =
            p.terminal == Terminal::Commit || mutated(testing::Mutation::SeqIgnoresTerminal);
        if (continues) {
            for (const auto& q : s2.traces) sink.insert(seq_traces(p, q));
        } else {
            sink.insert(p);
        }
    }
    return r;
}

TraceSet choice_compose(const TraceSet& s1, const TraceSet& s2, const Bounds& bounds) {
    TraceSet r;
    r.exhaustive = s1.exhaustive && s2.exhaustive;
    TraceSink sink{r.traces, bounds, r.exhaustive};
    for (const auto& p : s1.traces) sink.insert(p);
    if (!mutated(testing::Mutation::ChoiceDropsRight))
        for (const auto& q : s2.traces) sink.insert(q);
    return r;
}

TraceSet par_compose(const TraceSet& s1, const TraceSet& s2, const SyncSet& sync,
                     const Bounds& bounds) {
    TraceSet r;
    r.exhaustive = s1.exhaustive && s2.exhaustive;
    TraceSink sink{r.traces, bounds, r.exhaustive};
    for (const auto& p : s1.traces)
        for (const auto& q : s2.traces) merge_into(p, q, sync, sink, bounds);
    return r;
}

TraceSet interrupt_compose(const TraceSet& s1, const TraceSet& s2, const Bounds& bounds) {
    TraceSet r;
    r.exhaustive = s1.exhaustive && s2.exhaustive;
    TraceSink sink{r.traces, bounds, r.exhaustive};
    for (const auto& p : s1.traces) {
        if (p.terminal == Terminal::Throw) {
            for (const auto& q : s2.traces) sink.insert(seq_traces(p, q));
        } else {
            sink.insert(p);
        }
    }
    return r;
}

TracePairSet comp_seq_compose(const TracePairSet& t1, const TracePairSet& t2,
                              const Bounds& bounds) {
    TracePairSet r;
    r.exhaustive = t1.exhaustive && t2.exhaustive;
    PairSink sink{r.pairs, bounds, r.exhaustive};
    const bool forward_order = mutated(testing::Mutation::CompSeqForwardOrder);
    for (const auto& p : t1.pairs) {
        if (p.forward.terminal == Terminal::Commit) {
            for (const auto& q : t2.pairs) {
                TracePair combined;
                combined.forward = seq_traces(p.forward, q.forward);
                combined.compensation = forward_order
                                            ? seq_traces(p.compensation, q.compensation)
                                            : seq_traces(q.compensation, p.compensation);
                // COMMIT-gating: a non-committing first stage of the
                // compensation cuts the rest, as in seq_compose.
                const CompletedTrace& head = forward_order ? p.compensation : q.compensation;
                if (head.terminal != Terminal::Commit) combined.compensation = head;
                sink.insert(std::move(combined));
            }
        } else {
            sink.insert(p);
        }
    }
    return r;
}

TracePairSet comp_par_compose(const TracePairSet& t1, const TracePairSet& t2,
                              const Bounds& bounds) {
    TracePairSet r;
    r.exhaustive = t1.exhaustive && t2.exhaustive;
    PairSink sink{r.pairs, bounds, r.exhaustive};
    const SyncSet none{};
    for (const auto& p : t1.pairs) {
        for (const auto& q : t2.pairs) {
            std::set<CompletedTrace> fwd, comp;
            bool fwd_exh = true, comp_exh = true;
            TraceSink fwd_sink{fwd, bounds, fwd_exh};
            TraceSink comp_sink{comp, bounds, comp_exh};
            merge_into(p.forward, q.forward, none, fwd_sink, bounds);
            merge_into(p.compensation, q.compensation, none, comp_sink, bounds);
            if (!fwd_exh || !comp_exh) r.exhaustive = false;
            for (const auto& f : fwd)
                for (const auto& c : comp) sink.insert(TracePair{f, c});
        }
    }
    return r;
}

TraceSet block_close(const TracePairSet& t, const Bounds& bounds) {
    TraceSet r;
    r.exhaustive = t.exhaustive;
    TraceSink sink{r.traces, bounds, r.exhaustive};
    for (const auto& p : t.pairs) {
        switch (p.forward.terminal) {
        case Terminal::Commit:
            sink.insert(p.forward);
            break;
        case Terminal::Throw:
            if (mutated(testing::Mutation::BlockKeepsThrow))
                sink.insert(p.forward);
            else
                sink.insert(seq_traces(p.forward, p.compensation));
            break;
        case Terminal::Yield:
            // A closed block has nothing to yield to.
            break;
        }
    }
    return r;
}

Atom resolve_arg(const Arg& arg, const Env& env) {
    if (const Atom* a = std::get_if<Atom>(&arg)) return *a;
    const VarRef& v = std::get<VarRef>(arg);
    auto it = env.find(v.name);
    if (it == env.end()) throw EvalError("unbound variable " + v.name);
    return it->second;
}

StandardPtr expand_input(const InputNode& node) {
    StandardPtr prefixed =
        mk::seq(mk::ev(node.channel, {VarRef{node.var}}), node.body);
    return mk::ichoice(node.var, node.set_name, std::move(prefixed));
}

namespace {

const std::vector<Atom>& lookup_set(const Model& model, const std::string& name) {
    auto it = model.value_sets.find(name);
    if (it == model.value_sets.end()) throw EvalError("unknown set " + name);
    if (it->second.empty()) throw EvalError("set " + name + " is empty");
    return it->second;
}

Event eval_event(const std::string& channel, const std::vector<Arg>& payload,
                 const Env& env) {
    Event e;
    e.channel = channel;
    e.payload.reserve(payload.size());
    for (const Arg& a : payload) e.payload.push_back(resolve_arg(a, env));
    return e;
}

TraceSet singleton(CompletedTrace t, const Bounds& bounds) {
    TraceSet r;
    bool exh = true;
    TraceSink sink{r.traces, bounds, exh};
    sink.insert(std::move(t));
    r.exhaustive = exh;
    return r;
}

Env bind_params(const std::vector<std::string>& params, const std::vector<Arg>& args,
                const Env& caller_env, const std::string& name) {
    if (params.size() != args.size())
        throw EvalError("arity mismatch calling " + name);
    Env env;
    for (std::size_t i = 0; i < params.size(); ++i)
        env[params[i]] = resolve_arg(args[i], caller_env);
    return env;
}

} // namespace

TraceSet traces_standard(const StandardTerm& term, const Model& model, const Env& env,
                         const Bounds& bounds) {
    return std::visit(
        overloaded{
            [&](const AtomicEventNode& n) {
                return singleton({{eval_event(n.channel, n.payload, env)}, Terminal::Commit},
                                 bounds);
            },
            [&](const SkipNode&) { return singleton({{}, Terminal::Commit}, bounds); },
            [&](const ThrowNode&) { return singleton({{}, Terminal::Throw}, bounds); },
            [&](const YieldNode&) {
                TraceSet r = singleton({{}, Terminal::Yield}, bounds);
                bool exh = r.exhaustive;
                TraceSink sink{r.traces, bounds, exh};
                sink.insert({{}, Terminal::Commit});
                r.exhaustive = exh;
                return r;
            },
            [&](const SeqNode& n) {
                return seq_compose(traces_standard(n.left, model, env, bounds),
                                   traces_standard(n.right, model, env, bounds), bounds);
            },
            [&](const ChoiceNode& n) {
                return choice_compose(traces_standard(n.left, model, env, bounds),
                                      traces_standard(n.right, model, env, bounds), bounds);
            },
            [&](const ParNode& n) {
                return par_compose(traces_standard(n.left, model, env, bounds),
                                   traces_standard(n.right, model, env, bounds), n.sync,
                                   bounds);
            },
            [&](const InterruptNode& n) {
                return interrupt_compose(traces_standard(n.body, model, env, bounds),
                                         traces_standard(n.handler, model, env, bounds),
                                         bounds);
            },
            [&](const BlockNode& n) {
                return block_close(traces_compensable(n.body, model, env, bounds), bounds);
            },
            [&](const InputNode& n) {
                const auto& values = lookup_set(model, n.set_name);
                std::size_t limit = values.size();
                if (mutated(testing::Mutation::InputSkipsLastValue) && limit > 1) --limit;
                TraceSet r;
                for (std::size_t i = 0; i < limit; ++i) {
                    Env e2 = env;
                    e2[n.var] = values[i];
                    TraceSet prefixed = seq_compose(
                        singleton({{Event{n.channel, {values[i]}}}, Terminal::Commit},
                                  bounds),
                        traces_standard(n.body, model, e2, bounds), bounds);
                    r = choice_compose(r, prefixed, bounds);
                }
                return r;
            },
            [&](const OutputNode& n) {
                return singleton(
                    {{Event{n.channel, {resolve_arg(n.message, env)}}}, Terminal::Commit},
                    bounds);
            },
            [&](const IndexedChoiceNode& n) {
                const auto& values = lookup_set(model, n.set_name);
                TraceSet r;
                for (const Atom& v : values) {
                    Env e2 = env;
                    e2[n.var] = v;
                    r = choice_compose(r, traces_standard(n.body, model, e2, bounds),
                                       bounds);
                }
                return r;
            },
            [&](const CallNode& n) {
                auto it = model.standard_defs.find(n.name);
                if (it == model.standard_defs.end())
                    throw EvalError("undefined name " + n.name);
                Env e2 = bind_params(it->second.params, n.args, env, n.name);
                return traces_standard(it->second.body, model, e2, bounds);
            },
        },
        term.node);
}

namespace {

// Denotation of a compensation pair with already-computed operand sets.
TracePairSet pair_denotation(const TraceSet& forward, const TraceSet& compensation,
                             const Bounds& bounds) {
    TracePairSet r;
    r.exhaustive = forward.exhaustive && compensation.exhaustive;
    PairSink sink{r.pairs, bounds, r.exhaustive};
    for (const auto& p : forward.traces) {
        if (p.terminal == Terminal::Commit) {
            for (const auto& q : compensation.traces) sink.insert({p, q});
        } else {
            // Compensation is installed only by completed work.
            sink.insert({p, empty_commit()});
        }
    }
    // A pair not yet started is willing to yield.
    sink.insert({empty_yield(), empty_commit()});
    return r;
}

TracePairSet keyword_pairs(Terminal forward_terminal, const Bounds& bounds,
                           bool throwing_compensation = false) {
    TracePairSet r;
    PairSink sink{r.pairs, bounds, r.exhaustive};
    CompletedTrace comp = empty_commit();
    if (throwing_compensation) comp.terminal = Terminal::Throw;
    if (forward_terminal == Terminal::Commit)
        sink.insert({empty_commit(), comp});
    else if (forward_terminal == Terminal::Throw)
        sink.insert({CompletedTrace{{}, Terminal::Throw}, empty_commit()});
    // YIELD and the not-yet-started case coincide on the empty yield pair.
    sink.insert({empty_yield(), empty_commit()});
    return r;
}

} // namespace

TracePairSet traces_compensable(const CompensableTerm& term, const Model& model,
                                const Env& env, const Bounds& bounds) {
    return std::visit(
        overloaded{
            [&](const PairNode& n) {
                return pair_denotation(traces_standard(n.forward, model, env, bounds),
                                       traces_standard(n.compensation, model, env, bounds),
                                       bounds);
            },
            [&](const SkippNode&) {
                return keyword_pairs(Terminal::Commit, bounds,
                                     mutated(testing::Mutation::SkippThrowCompensation));
            },
            [&](const ThrowwNode&) { return keyword_pairs(Terminal::Throw, bounds); },
            [&](const YielddNode&) {
                // YIELD % SKIP: the committing branch of YIELD gives the
                // committed empty pair; the yielding branch collapses into
                // the standing yield pair.
                return keyword_pairs(Terminal::Commit, bounds);
            },
            [&](const CSeqNode& n) {
                return comp_seq_compose(traces_compensable(n.left, model, env, bounds),
                                        traces_compensable(n.right, model, env, bounds),
                                        bounds);
            },
            [&](const CParNode& n) {
                return comp_par_compose(traces_compensable(n.left, model, env, bounds),
                                        traces_compensable(n.right, model, env, bounds),
                                        bounds);
            },
            [&](const CChoiceNode& n) {
                TracePairSet a = traces_compensable(n.left, model, env, bounds);
                TracePairSet b = traces_compensable(n.right, model, env, bounds);
                TracePairSet r;
                r.exhaustive = a.exhaustive && b.exhaustive;
                PairSink sink{r.pairs, bounds, r.exhaustive};
                for (const auto& p : a.pairs) sink.insert(p);
                for (const auto& p : b.pairs) sink.insert(p);
                return r;
            },
            [&](const CInputPairNode& n) {
                const auto& values = lookup_set(model, n.set_name);
                TracePairSet r;
                bool first = true;
                for (const Atom& v : values) {
                    Env e2 = env;
                    e2[n.var] = v;
                    TracePairSet head = pair_denotation(
                        singleton({{Event{n.channel, {v}}}, Terminal::Commit}, bounds),
                        traces_standard(n.compensation, model, e2, bounds), bounds);
                    TracePairSet branch = comp_seq_compose(
                        head, traces_compensable(n.continuation, model, e2, bounds),
                        bounds);
                    if (first) {
                        r = std::move(branch);
                        first = false;
                    } else {
                        TracePairSet merged;
                        merged.exhaustive = r.exhaustive && branch.exhaustive;
                        PairSink sink{merged.pairs, bounds, merged.exhaustive};
                        for (const auto& p : r.pairs) sink.insert(p);
                        for (const auto& p : branch.pairs) sink.insert(p);
                        r = std::move(merged);
                    }
                }
                return r;
            },
            [&](const CCallNode& n) {
                auto it = model.compensable_defs.find(n.name);
                if (it == model.compensable_defs.end())
                    throw EvalError("undefined name " + n.name);
                Env e2 = bind_params(it->second.params, n.args, env, n.name);
                return traces_compensable(it->second.body, model, e2, bounds);
            },
        },
        term.node);
}

namespace testing {

Mutation active_mutation() { return g_mutation; }

ScopedMutation::ScopedMutation(Mutation m) : previous_(g_mutation) { g_mutation = m; }
ScopedMutation::~ScopedMutation() { g_mutation = previous_; }

} // namespace testing

} // namespace ccsp
