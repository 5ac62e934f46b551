#include "ccsp/analyzer.hpp"

#include <map>

namespace ccsp::analysis {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// The compensation program a compensable run has installed, in execution
// order: which pairs completed and how their compensations compose.
struct CompLog;
using LogPtr = std::shared_ptr<const CompLog>;

struct CompLog {
    enum class Kind { Empty, Leaf, Seq, Par };
    Kind kind = Kind::Empty;
    int pair_id = -1;             // Leaf: stable id of the syntactic pair
    CompletedTrace compensation;  // Leaf: the installed compensation run
    LogPtr first, second;
};

const LogPtr& empty_log() {
    static const LogPtr log = std::make_shared<const CompLog>();
    return log;
}

LogPtr leaf_log(int id, CompletedTrace comp) {
    auto log = std::make_shared<CompLog>();
    log->kind = CompLog::Kind::Leaf;
    log->pair_id = id;
    log->compensation = std::move(comp);
    return log;
}

LogPtr node_log(CompLog::Kind kind, LogPtr a, LogPtr b) {
    auto log = std::make_shared<CompLog>();
    log->kind = kind;
    log->first = std::move(a);
    log->second = std::move(b);
    return log;
}

std::string log_key(const LogPtr& log) {
    switch (log->kind) {
    case CompLog::Kind::Empty: return "E";
    case CompLog::Kind::Leaf:
        return "L" + std::to_string(log->pair_id) + ":" + log->compensation.render();
    case CompLog::Kind::Seq:
        return "S(" + log_key(log->first) + "," + log_key(log->second) + ")";
    case CompLog::Kind::Par:
        return "P(" + log_key(log->first) + "," + log_key(log->second) + ")";
    }
    return "?";
}

struct IPair {
    CompletedTrace forward;
    CompletedTrace compensation;
    LogPtr log;
    std::string key;  // log_key, cached for ordering
};

struct IPairLess {
    bool operator()(const IPair& a, const IPair& b) const {
        if (a.forward < b.forward) return true;
        if (b.forward < a.forward) return false;
        if (a.compensation < b.compensation) return true;
        if (b.compensation < a.compensation) return false;
        return a.key < b.key;
    }
};

using IPairSet = std::set<IPair, IPairLess>;

void insert_ipair(IPairSet& out, CompletedTrace f, CompletedTrace c, LogPtr log,
                  const Bounds& bounds) {
    if (f.events.size() > bounds.max_events || c.events.size() > bounds.max_events)
        return;
    if (out.size() >= bounds.max_traces * 4) return;
    IPair p{std::move(f), std::move(c), log, log_key(log)};
    out.insert(std::move(p));
}

CompletedTrace concat(const CompletedTrace& p, const CompletedTrace& q) {
    CompletedTrace r;
    r.events = p.events;
    r.events.insert(r.events.end(), q.events.begin(), q.events.end());
    r.terminal = q.terminal;
    return r;
}

// An independent transcription of the denotational rules that tracks, for
// every trace pair, which syntactic compensation pairs completed. Transaction
// blocks reached during evaluation check each throwing trace against the
// compensation program re-derived from that record.
struct Instrumenter {
    const Model& model;
    const Bounds& bounds;
    ConsistencyReport& report;
    std::map<const void*, int> ids;

    int id_of(const void* node) {
        auto [it, inserted] = ids.emplace(node, static_cast<int>(ids.size()));
        return it->second;
    }

    void record_violation(const std::string& message) {
        report.consistent = false;
        if (report.violation.empty() || message < report.violation)
            report.violation = message;
    }

    // Expected compensation runs reconstructed from the completion record.
    TraceSet expected_runs(const LogPtr& log) {
        switch (log->kind) {
        case CompLog::Kind::Empty: {
            TraceSet r;
            r.traces.insert(CompletedTrace{{}, Terminal::Commit});
            return r;
        }
        case CompLog::Kind::Leaf: {
            TraceSet r;
            r.traces.insert(log->compensation);
            return r;
        }
        case CompLog::Kind::Seq:
            return seq_compose(expected_runs(log->first), expected_runs(log->second),
                               bounds);
        case CompLog::Kind::Par:
            return par_compose(expected_runs(log->first), expected_runs(log->second),
                               SyncSet{}, bounds);
        }
        return {};
    }

    TraceSet close_block(const CompensableTerm& body, const Env& env) {
        ++report.blocks_checked;
        IPairSet pairs = eval_comp(body, env);

        // Cross-validation: the instrumented pairs, stripped of their logs,
        // must coincide with the production evaluator's denotation.
        TracePairSet production = traces_compensable(body, model, env, bounds);
        std::set<TracePair> projected;
        for (const IPair& p : pairs)
            projected.insert(TracePair{p.forward, p.compensation});
        if (projected != production.pairs)
            record_violation(
                "instrumented and direct evaluation disagree on the block's trace pairs");

        TraceSet out;
        for (const IPair& p : pairs) {
            switch (p.forward.terminal) {
            case Terminal::Commit:
                out.traces.insert(p.forward);
                break;
            case Terminal::Throw: {
                ++report.throw_traces_checked;
                TraceSet expected = expected_runs(p.log);
                if (expected.traces.count(p.compensation) == 0) {
                    record_violation(
                        "compensation " + p.compensation.render() +
                        " after throwing forward " + p.forward.render() +
                        " does not match the completed pairs' reconstruction");
                }
                out.traces.insert(concat(p.forward, p.compensation));
                break;
            }
            case Terminal::Yield:
                break;
            }
        }
        return out;
    }

    TraceSet eval_std(const StandardTerm& term, const Env& env) {
        return std::visit(
            overloaded{
                [&](const AtomicEventNode& n) {
                    Event e{n.channel, {}};
                    for (const Arg& a : n.payload)
                        e.payload.push_back(resolve_arg(a, env));
                    TraceSet r;
                    r.traces.insert(CompletedTrace{{e}, Terminal::Commit});
                    return r;
                },
                [&](const SkipNode&) {
                    TraceSet r;
                    r.traces.insert(CompletedTrace{{}, Terminal::Commit});
                    return r;
                },
                [&](const ThrowNode&) {
                    TraceSet r;
                    r.traces.insert(CompletedTrace{{}, Terminal::Throw});
                    return r;
                },
                [&](const YieldNode&) {
                    TraceSet r;
                    r.traces.insert(CompletedTrace{{}, Terminal::Yield});
                    r.traces.insert(CompletedTrace{{}, Terminal::Commit});
                    return r;
                },
                [&](const SeqNode& n) {
                    return seq_compose(eval_std(*n.left, env), eval_std(*n.right, env),
                                       bounds);
                },
                [&](const ChoiceNode& n) {
                    return choice_compose(eval_std(*n.left, env),
                                          eval_std(*n.right, env), bounds);
                },
                [&](const ParNode& n) {
                    return par_compose(eval_std(*n.left, env), eval_std(*n.right, env),
                                       n.sync, bounds);
                },
                [&](const InterruptNode& n) {
                    return interrupt_compose(eval_std(*n.body, env),
                                             eval_std(*n.handler, env), bounds);
                },
                [&](const BlockNode& n) { return close_block(*n.body, env); },
                [&](const InputNode& n) {
                    TraceSet r;
                    for (const Atom& v : model.value_sets.at(n.set_name)) {
                        Env e2 = env;
                        e2[n.var] = v;
                        TraceSet prefix;
                        prefix.traces.insert(
                            CompletedTrace{{Event{n.channel, {v}}}, Terminal::Commit});
                        r = choice_compose(
                            r, seq_compose(prefix, eval_std(*n.body, e2), bounds),
                            bounds);
                    }
                    return r;
                },
                [&](const OutputNode& n) {
                    TraceSet r;
                    r.traces.insert(CompletedTrace{
                        {Event{n.channel, {resolve_arg(n.message, env)}}},
                        Terminal::Commit});
                    return r;
                },
                [&](const IndexedChoiceNode& n) {
                    TraceSet r;
                    for (const Atom& v : model.value_sets.at(n.set_name)) {
                        Env e2 = env;
                        e2[n.var] = v;
                        r = choice_compose(r, eval_std(*n.body, e2), bounds);
                    }
                    return r;
                },
                [&](const CallNode& n) {
                    const auto& def = model.standard_defs.at(n.name);
                    Env e2;
                    for (std::size_t i = 0; i < def.params.size(); ++i)
                        e2[def.params[i]] = resolve_arg(n.args[i], env);
                    return eval_std(*def.body, e2);
                },
            },
            term.node);
    }

    IPairSet pair_like(const void* id_node, const TraceSet& forward,
                       const TraceSet& compensation) {
        IPairSet out;
        const int id = id_of(id_node);
        for (const CompletedTrace& p : forward.traces) {
            if (p.terminal == Terminal::Commit) {
                for (const CompletedTrace& q : compensation.traces)
                    insert_ipair(out, p, q, leaf_log(id, q), bounds);
            } else {
                insert_ipair(out, p, CompletedTrace{{}, Terminal::Commit}, empty_log(),
                             bounds);
            }
        }
        insert_ipair(out, CompletedTrace{{}, Terminal::Yield},
                     CompletedTrace{{}, Terminal::Commit}, empty_log(), bounds);
        return out;
    }

    IPairSet keyword_like(Terminal forward_terminal) {
        IPairSet out;
        if (forward_terminal == Terminal::Commit)
            insert_ipair(out, CompletedTrace{{}, Terminal::Commit},
                         CompletedTrace{{}, Terminal::Commit}, empty_log(), bounds);
        else if (forward_terminal == Terminal::Throw)
            insert_ipair(out, CompletedTrace{{}, Terminal::Throw},
                         CompletedTrace{{}, Terminal::Commit}, empty_log(), bounds);
        insert_ipair(out, CompletedTrace{{}, Terminal::Yield},
                     CompletedTrace{{}, Terminal::Commit}, empty_log(), bounds);
        return out;
    }

    IPairSet seq_like(const IPairSet& left, const IPairSet& right) {
        IPairSet out;
        for (const IPair& p : left) {
            if (p.forward.terminal == Terminal::Commit) {
                for (const IPair& q : right) {
                    CompletedTrace fwd = concat(p.forward, q.forward);
                    CompletedTrace comp = q.compensation.terminal == Terminal::Commit
                                              ? concat(q.compensation, p.compensation)
                                              : q.compensation;
                    insert_ipair(out, std::move(fwd), std::move(comp),
                                 node_log(CompLog::Kind::Seq, q.log, p.log), bounds);
                }
            } else {
                out.insert(p);
            }
        }
        return out;
    }

    IPairSet eval_comp(const CompensableTerm& term, const Env& env) {
        return std::visit(
            overloaded{
                [&](const PairNode& n) {
                    return pair_like(&n, eval_std(*n.forward, env),
                                     eval_std(*n.compensation, env));
                },
                [&](const SkippNode&) { return keyword_like(Terminal::Commit); },
                [&](const ThrowwNode&) { return keyword_like(Terminal::Throw); },
                [&](const YielddNode&) { return keyword_like(Terminal::Commit); },
                [&](const CSeqNode& n) {
                    return seq_like(eval_comp(*n.left, env), eval_comp(*n.right, env));
                },
                [&](const CParNode& n) {
                    IPairSet out;
                    IPairSet left = eval_comp(*n.left, env);
                    IPairSet right = eval_comp(*n.right, env);
                    for (const IPair& p : left) {
                        for (const IPair& q : right) {
                            TraceSet pf, qf, pc, qc;
                            pf.traces.insert(p.forward);
                            qf.traces.insert(q.forward);
                            pc.traces.insert(p.compensation);
                            qc.traces.insert(q.compensation);
                            TraceSet fwd = par_compose(pf, qf, SyncSet{}, bounds);
                            TraceSet comp = par_compose(pc, qc, SyncSet{}, bounds);
                            LogPtr log = node_log(CompLog::Kind::Par, p.log, q.log);
                            for (const CompletedTrace& f : fwd.traces)
                                for (const CompletedTrace& c : comp.traces)
                                    insert_ipair(out, f, c, log, bounds);
                        }
                    }
                    return out;
                },
                [&](const CChoiceNode& n) {
                    IPairSet out = eval_comp(*n.left, env);
                    for (const IPair& p : eval_comp(*n.right, env)) out.insert(p);
                    return out;
                },
                [&](const CInputPairNode& n) {
                    IPairSet out;
                    for (const Atom& v : model.value_sets.at(n.set_name)) {
                        Env e2 = env;
                        e2[n.var] = v;
                        TraceSet fwd;
                        fwd.traces.insert(
                            CompletedTrace{{Event{n.channel, {v}}}, Terminal::Commit});
                        IPairSet head =
                            pair_like(&n, fwd, eval_std(*n.compensation, e2));
                        for (const IPair& p :
                             seq_like(head, eval_comp(*n.continuation, e2)))
                            out.insert(p);
                    }
                    return out;
                },
                [&](const CCallNode& n) {
                    const auto& def = model.compensable_defs.at(n.name);
                    Env e2;
                    for (std::size_t i = 0; i < def.params.size(); ++i)
                        e2[def.params[i]] = resolve_arg(n.args[i], env);
                    return eval_comp(*def.body, e2);
                },
            },
            term.node);
    }
};

} // namespace

ConsistencyReport check_compensation_consistency(const Model& model,
                                                 const std::string& entry,
                                                 const std::vector<Atom>& args,
                                                 const Bounds& bounds) {
    ConsistencyReport report;
    report.entry = entry;
    Instrumenter inst{model, bounds, report, {}};

    if (auto it = model.standard_defs.find(entry); it != model.standard_defs.end()) {
        if (it->second.params.size() != args.size())
            throw EvalError("bad arguments for " + entry);
        Env env;
        for (std::size_t i = 0; i < args.size(); ++i)
            env[it->second.params[i]] = args[i];
        inst.eval_std(*it->second.body, env);
    } else if (auto cit = model.compensable_defs.find(entry);
               cit != model.compensable_defs.end()) {
        if (cit->second.params.size() != args.size())
            throw EvalError("bad arguments for " + entry);
        Env env;
        for (std::size_t i = 0; i < args.size(); ++i)
            env[cit->second.params[i]] = args[i];
        inst.close_block(*cit->second.body, env);
    } else {
        throw EvalError("undefined entry " + entry);
    }
    return report;
}

} // namespace ccsp::analysis
