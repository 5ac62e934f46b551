#ifndef CCSP_TESTS_MODEL_GEN_HPP
#define CCSP_TESTS_MODEL_GEN_HPP

#include "ccsp/model.hpp"

#include <random>
#include <string>
#include <vector>

// Random models for the parse/print round-trip fuzz. Shapes stay within the
// parser's canonical forms: an open input binder (plain or paired) is never
// generated as the left operand of a sequence, since the concrete syntax
// would re-attach the continuation to the binder.
namespace ccsp::tests {

class ModelGenerator {
public:
    explicit ModelGenerator(std::uint64_t seed) : rng_(seed) {}

    Model next() {
        Model m;
        set_names_.clear();
        def_names_.clear();
        const int sets = 1 + pick(2);
        for (int i = 0; i < sets; ++i) {
            std::string name = "S" + std::to_string(i + 1);
            std::vector<Atom> atoms;
            const int size = 1 + pick(3);
            for (int v = 0; v < size; ++v) {
                if (pick(2) == 0)
                    atoms.push_back(Atom::integer(v + 1));
                else
                    atoms.push_back(Atom::ident("v" + std::to_string(v + 1)));
            }
            std::sort(atoms.begin(), atoms.end());
            atoms.erase(std::unique(atoms.begin(), atoms.end(),
                                    [](const Atom& a, const Atom& b) { return a == b; }),
                        atoms.end());
            m.value_sets[name] = atoms;
            set_names_.push_back(name);
        }
        const int defs = 1 + pick(3);
        for (int i = 0; i < defs; ++i) {
            std::string name = "D" + std::to_string(i + 1);
            std::vector<std::string> params;
            if (pick(3) == 0) params.push_back("p");
            bound_ = params;
            if (pick(3) == 0) {
                m.compensable_defs[name] =
                    CompensableDef{params, comp_term(3, /*seq_left=*/false)};
            } else {
                StandardPtr body = std_term(3, /*seq_left=*/false);
                // A whole body that is one bare payload-free event would read
                // back as a process alias; keep it in a compound context.
                if (const auto* ev = std::get_if<AtomicEventNode>(&body->node);
                    ev != nullptr && ev->payload.empty())
                    body = mk::seq(body, mk::skip());
                m.standard_defs[name] = StandardDef{params, std::move(body)};
            }
            // Later definitions may call earlier ones.
            DefRef ref;
            ref.name = name;
            ref.arity = params.size();
            ref.compensable = m.compensable_defs.count(name) != 0;
            def_names_.push_back(ref);
        }
        return m;
    }

private:
    struct DefRef {
        std::string name;
        std::size_t arity = 0;
        bool compensable = false;
    };

    std::mt19937 rng_;
    std::vector<std::string> set_names_;
    std::vector<DefRef> def_names_;
    std::vector<std::string> bound_;

    int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

    std::string channel() {
        static const char* names[] = {"a", "b", "ch", "Order", "Reply"};
        return names[pick(5)];
    }

    Arg arg() {
        if (!bound_.empty() && pick(3) == 0) return VarRef{bound_[pick((int)bound_.size())]};
        if (pick(2) == 0) return Atom::integer(1 + pick(3));
        return Atom::ident("v" + std::to_string(1 + pick(3)));
    }

    std::vector<Arg> args(std::size_t n) {
        std::vector<Arg> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(arg());
        return out;
    }

    StandardPtr std_leaf() {
        switch (pick(6)) {
        case 0: return mk::skip();
        case 1: return mk::thrw();
        case 2: return mk::yield();
        case 3: return mk::output(channel(), arg());
        case 4: {
            std::vector<Arg> payload;
            const int n = pick(3);
            for (int i = 0; i < n; ++i) payload.push_back(arg());
            return mk::ev(channel(), std::move(payload));
        }
        default: {
            // A call to an earlier standard definition, if one exists.
            for (const DefRef& d : def_names_)
                if (!d.compensable) return mk::call(d.name, args(d.arity));
            return mk::ev(channel());
        }
        }
    }

    StandardPtr std_term(int depth, bool seq_left) {
        if (depth <= 0 || pick(3) == 0) return std_leaf();
        switch (pick(8)) {
        case 0:
            return mk::seq(std_term(depth - 1, /*seq_left=*/true),
                           std_term(depth - 1, false));
        case 1:
            return mk::choice(std_term(depth - 1, false), std_term(depth - 1, false));
        case 2: {
            SyncSet sync;
            const int n = pick(3);
            for (int i = 0; i < n; ++i) sync.channels.insert(channel());
            return mk::par(std_term(depth - 1, false), sync, std_term(depth - 1, false));
        }
        case 3:
            return mk::interrupt(std_term(depth - 1, false), std_term(depth - 1, false));
        case 4:
            return mk::block(comp_term(depth - 1, false));
        case 5: {
            std::string var = "x" + std::to_string(depth);
            std::string set = set_names_[pick((int)set_names_.size())];
            bound_.push_back(var);
            StandardPtr body =
                seq_left ? mk::skip() : std_term(depth - 1, false);
            StandardPtr node = mk::input(channel(), set, var, std::move(body));
            bound_.pop_back();
            // An input whose body is SKIP prints as a closed binder and is
            // safe anywhere, including left of a sequence.
            return node;
        }
        case 6: {
            std::string var = "y" + std::to_string(depth);
            std::string set = set_names_[pick((int)set_names_.size())];
            bound_.push_back(var);
            StandardPtr body = std_term(depth - 1, false);
            bound_.pop_back();
            return mk::ichoice(var, set, std::move(body));
        }
        default:
            return std_leaf();
        }
    }

    CompensablePtr comp_leaf() {
        switch (pick(4)) {
        case 0: return mk::skipp();
        case 1: return mk::throww();
        case 2: return mk::yieldd();
        default: {
            for (const DefRef& d : def_names_)
                if (d.compensable) return mk::ccall(d.name, args(d.arity));
            return mk::pair(std_leaf(), std_leaf());
        }
        }
    }

    CompensablePtr comp_term(int depth, bool seq_left) {
        if (depth <= 0 || pick(3) == 0) return comp_leaf();
        switch (pick(6)) {
        case 0:
            return mk::pair(std_term(depth - 1, false), std_term(depth - 1, false));
        case 1:
            return mk::cseq(comp_term(depth - 1, /*seq_left=*/true),
                            comp_term(depth - 1, false));
        case 2:
            return mk::cpar(comp_term(depth - 1, false), comp_term(depth - 1, false));
        case 3:
            return mk::cchoice(comp_term(depth - 1, false), comp_term(depth - 1, false));
        case 4: {
            if (seq_left) return comp_leaf();
            std::string var = "z" + std::to_string(depth);
            std::string set = set_names_[pick((int)set_names_.size())];
            bound_.push_back(var);
            StandardPtr comp = std_term(depth - 1, false);
            CompensablePtr cont =
                pick(2) == 0 ? mk::skipp() : comp_term(depth - 1, false);
            bound_.pop_back();
            return mk::cinput(channel(), set, var, std::move(comp), std::move(cont));
        }
        default:
            return comp_leaf();
        }
    }
};

} // namespace ccsp::tests

#endif
