#ifndef CCSP_TERM_HPP
#define CCSP_TERM_HPP

#include "ccsp/basics.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace ccsp {

struct StandardTerm;
struct CompensableTerm;
using StandardPtr = std::shared_ptr<const StandardTerm>;
using CompensablePtr = std::shared_ptr<const CompensableTerm>;

// A payload/argument position: either a literal atom or a reference to a
// variable bound by a process parameter, an input, or an indexed choice.
struct VarRef {
    std::string name;
};
using Arg = std::variant<Atom, VarRef>;

bool operator==(const VarRef& a, const VarRef& b);

// ---------------------------------------------------------------------------
// Standard process syntax
// ---------------------------------------------------------------------------

struct AtomicEventNode {
    std::string channel;
    std::vector<Arg> payload;
};
struct SkipNode {};
struct ThrowNode {};
struct YieldNode {};
struct SeqNode {
    StandardPtr left, right;
};
struct ChoiceNode {
    StandardPtr left, right;
};
struct ParNode {
    StandardPtr left;
    SyncSet sync;
    StandardPtr right;
};
struct InterruptNode {
    StandardPtr body, handler;
};
struct BlockNode {
    CompensablePtr body;
};
// c?x:S ; body, binding `var` over the values of the declared set.
struct InputNode {
    std::string channel;
    std::string set_name;
    std::string var;
    StandardPtr body;
};
// c!v, with the same trace semantics as the event c.v.
struct OutputNode {
    std::string channel;
    Arg message;
};
// [] x : S @ body
struct IndexedChoiceNode {
    std::string var;
    std::string set_name;
    StandardPtr body;
};
struct CallNode {
    std::string name;
    std::vector<Arg> args;
};

struct StandardTerm {
    std::variant<AtomicEventNode, SkipNode, ThrowNode, YieldNode, SeqNode,
                 ChoiceNode, ParNode, InterruptNode, BlockNode, InputNode,
                 OutputNode, IndexedChoiceNode, CallNode>
        node;
};

// ---------------------------------------------------------------------------
// Compensable process syntax
// ---------------------------------------------------------------------------

// P % Q: forward behaviour with its attached compensation.
struct PairNode {
    StandardPtr forward, compensation;
};
struct SkippNode {};
struct ThrowwNode {};
struct YielddNode {};
struct CSeqNode {
    CompensablePtr left, right;
};
struct CParNode {
    CompensablePtr left, right;
};
struct CChoiceNode {
    CompensablePtr left, right;
};
// (c?x:S % comp) ; continuation, the input-parameterised compensation
// pair; `var` scopes over both the compensation and the continuation.
struct CInputPairNode {
    std::string channel;
    std::string set_name;
    std::string var;
    StandardPtr compensation;
    CompensablePtr continuation;
};
struct CCallNode {
    std::string name;
    std::vector<Arg> args;
};

struct CompensableTerm {
    std::variant<PairNode, SkippNode, ThrowwNode, YielddNode, CSeqNode,
                 CParNode, CChoiceNode, CInputPairNode, CCallNode>
        node;
};

bool operator==(const StandardTerm& a, const StandardTerm& b);
bool operator==(const CompensableTerm& a, const CompensableTerm& b);
bool equal_terms(const StandardPtr& a, const StandardPtr& b);
bool equal_terms(const CompensablePtr& a, const CompensablePtr& b);

// ---------------------------------------------------------------------------
// Construction helpers (tests and generators lean on these heavily)
// ---------------------------------------------------------------------------
namespace mk {

StandardPtr ev(std::string channel, std::vector<Arg> payload = {});
StandardPtr skip();
StandardPtr thrw();
StandardPtr yield();
StandardPtr seq(StandardPtr a, StandardPtr b);
StandardPtr choice(StandardPtr a, StandardPtr b);
StandardPtr par(StandardPtr a, SyncSet sync, StandardPtr b);
StandardPtr interleave(StandardPtr a, StandardPtr b);
StandardPtr interrupt(StandardPtr body, StandardPtr handler);
StandardPtr block(CompensablePtr body);
StandardPtr input(std::string channel, std::string set_name, std::string var,
                  StandardPtr body);
StandardPtr output(std::string channel, Arg message);
StandardPtr ichoice(std::string var, std::string set_name, StandardPtr body);
StandardPtr call(std::string name, std::vector<Arg> args = {});

CompensablePtr pair(StandardPtr forward, StandardPtr compensation);
CompensablePtr skipp();
CompensablePtr throww();
CompensablePtr yieldd();
CompensablePtr cseq(CompensablePtr a, CompensablePtr b);
CompensablePtr cpar(CompensablePtr a, CompensablePtr b);
CompensablePtr cchoice(CompensablePtr a, CompensablePtr b);
CompensablePtr cinput(std::string channel, std::string set_name,
                      std::string var, StandardPtr compensation,
                      CompensablePtr continuation);
CompensablePtr ccall(std::string name, std::vector<Arg> args = {});

inline Arg lit(std::string ident) { return Atom::ident(std::move(ident)); }
inline Arg lit(std::int64_t v) { return Atom::integer(v); }
inline Arg var(std::string name) { return VarRef{std::move(name)}; }

} // namespace mk

} // namespace ccsp

#endif
