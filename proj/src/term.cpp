#include "ccsp/term.hpp"

namespace ccsp {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

bool operator==(const VarRef& a, const VarRef& b) { return a.name == b.name; }

bool equal_terms(const StandardPtr& a, const StandardPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

bool equal_terms(const CompensablePtr& a, const CompensablePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

bool operator==(const StandardTerm& a, const StandardTerm& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const AtomicEventNode& x) {
                const auto& y = std::get<AtomicEventNode>(b.node);
                return x.channel == y.channel && x.payload == y.payload;
            },
            [&](const SkipNode&) { return true; },
            [&](const ThrowNode&) { return true; },
            [&](const YieldNode&) { return true; },
            [&](const SeqNode& x) {
                const auto& y = std::get<SeqNode>(b.node);
                return equal_terms(x.left, y.left) && equal_terms(x.right, y.right);
            },
            [&](const ChoiceNode& x) {
                const auto& y = std::get<ChoiceNode>(b.node);
                return equal_terms(x.left, y.left) && equal_terms(x.right, y.right);
            },
            [&](const ParNode& x) {
                const auto& y = std::get<ParNode>(b.node);
                return x.sync == y.sync && equal_terms(x.left, y.left) &&
                       equal_terms(x.right, y.right);
            },
            [&](const InterruptNode& x) {
                const auto& y = std::get<InterruptNode>(b.node);
                return equal_terms(x.body, y.body) && equal_terms(x.handler, y.handler);
            },
            [&](const BlockNode& x) {
                const auto& y = std::get<BlockNode>(b.node);
                return equal_terms(x.body, y.body);
            },
            [&](const InputNode& x) {
                const auto& y = std::get<InputNode>(b.node);
                return x.channel == y.channel && x.set_name == y.set_name &&
                       x.var == y.var && equal_terms(x.body, y.body);
            },
            [&](const OutputNode& x) {
                const auto& y = std::get<OutputNode>(b.node);
                return x.channel == y.channel && x.message == y.message;
            },
            [&](const IndexedChoiceNode& x) {
                const auto& y = std::get<IndexedChoiceNode>(b.node);
                return x.var == y.var && x.set_name == y.set_name &&
                       equal_terms(x.body, y.body);
            },
            [&](const CallNode& x) {
                const auto& y = std::get<CallNode>(b.node);
                return x.name == y.name && x.args == y.args;
            },
        },
        a.node);
}

bool operator==(const CompensableTerm& a, const CompensableTerm& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const PairNode& x) {
                const auto& y = std::get<PairNode>(b.node);
                return equal_terms(x.forward, y.forward) &&
                       equal_terms(x.compensation, y.compensation);
            },
            [&](const SkippNode&) { return true; },
            [&](const ThrowwNode&) { return true; },
            [&](const YielddNode&) { return true; },
            [&](const CSeqNode& x) {
                const auto& y = std::get<CSeqNode>(b.node);
                return equal_terms(x.left, y.left) && equal_terms(x.right, y.right);
            },
            [&](const CParNode& x) {
                const auto& y = std::get<CParNode>(b.node);
                return equal_terms(x.left, y.left) && equal_terms(x.right, y.right);
            },
            [&](const CChoiceNode& x) {
                const auto& y = std::get<CChoiceNode>(b.node);
                return equal_terms(x.left, y.left) && equal_terms(x.right, y.right);
            },
            [&](const CInputPairNode& x) {
                const auto& y = std::get<CInputPairNode>(b.node);
                return x.channel == y.channel && x.set_name == y.set_name &&
                       x.var == y.var && equal_terms(x.compensation, y.compensation) &&
                       equal_terms(x.continuation, y.continuation);
            },
            [&](const CCallNode& x) {
                const auto& y = std::get<CCallNode>(b.node);
                return x.name == y.name && x.args == y.args;
            },
        },
        a.node);
}

namespace mk {

namespace {
StandardPtr wrap(StandardTerm t) {
    return std::make_shared<const StandardTerm>(std::move(t));
}
CompensablePtr wrap(CompensableTerm t) {
    return std::make_shared<const CompensableTerm>(std::move(t));
}
} // namespace

StandardPtr ev(std::string channel, std::vector<Arg> payload) {
    return wrap({AtomicEventNode{std::move(channel), std::move(payload)}});
}
StandardPtr skip() { return wrap({SkipNode{}}); }
StandardPtr thrw() { return wrap({ThrowNode{}}); }
StandardPtr yield() { return wrap({YieldNode{}}); }
StandardPtr seq(StandardPtr a, StandardPtr b) {
    return wrap({SeqNode{std::move(a), std::move(b)}});
}
StandardPtr choice(StandardPtr a, StandardPtr b) {
    return wrap({ChoiceNode{std::move(a), std::move(b)}});
}
StandardPtr par(StandardPtr a, SyncSet sync, StandardPtr b) {
    return wrap({ParNode{std::move(a), std::move(sync), std::move(b)}});
}
StandardPtr interleave(StandardPtr a, StandardPtr b) {
    return par(std::move(a), SyncSet{}, std::move(b));
}
StandardPtr interrupt(StandardPtr body, StandardPtr handler) {
    return wrap({InterruptNode{std::move(body), std::move(handler)}});
}
StandardPtr block(CompensablePtr body) { return wrap({BlockNode{std::move(body)}}); }
StandardPtr input(std::string channel, std::string set_name, std::string var,
                  StandardPtr body) {
    return wrap({InputNode{std::move(channel), std::move(set_name), std::move(var),
                           std::move(body)}});
}
StandardPtr output(std::string channel, Arg message) {
    return wrap({OutputNode{std::move(channel), std::move(message)}});
}
StandardPtr ichoice(std::string var, std::string set_name, StandardPtr body) {
    return wrap({IndexedChoiceNode{std::move(var), std::move(set_name), std::move(body)}});
}
StandardPtr call(std::string name, std::vector<Arg> args) {
    return wrap({CallNode{std::move(name), std::move(args)}});
}

CompensablePtr pair(StandardPtr forward, StandardPtr compensation) {
    return wrap({PairNode{std::move(forward), std::move(compensation)}});
}
CompensablePtr skipp() { return wrap({SkippNode{}}); }
CompensablePtr throww() { return wrap({ThrowwNode{}}); }
CompensablePtr yieldd() { return wrap({YielddNode{}}); }
CompensablePtr cseq(CompensablePtr a, CompensablePtr b) {
    return wrap({CSeqNode{std::move(a), std::move(b)}});
}
CompensablePtr cpar(CompensablePtr a, CompensablePtr b) {
    return wrap({CParNode{std::move(a), std::move(b)}});
}
CompensablePtr cchoice(CompensablePtr a, CompensablePtr b) {
    return wrap({CChoiceNode{std::move(a), std::move(b)}});
}
CompensablePtr cinput(std::string channel, std::string set_name, std::string var,
                      StandardPtr compensation, CompensablePtr continuation) {
    return wrap({CInputPairNode{std::move(channel), std::move(set_name), std::move(var),
                                std::move(compensation), std::move(continuation)}});
}
CompensablePtr ccall(std::string name, std::vector<Arg> args) {
    return wrap({CCallNode{std::move(name), std::move(args)}});
}

} // namespace mk

} // namespace ccsp
