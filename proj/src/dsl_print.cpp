#include "ccsp/dsl.hpp"

#include <sstream>

namespace ccsp::dsl {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// Binding tightness, loosest to tightest:
//   0 indexed choice   1 parallel   2 choice   3 interrupt
//   4 sequence/input   5 pair       6 primary
// A node prints parenthesized when its level is below the context minimum.

std::string arg_text(const Arg& a) {
    if (const Atom* atom = std::get_if<Atom>(&a)) return atom->render();
    return std::get<VarRef>(a).name;
}

struct Printer {
    std::ostringstream out;

    void paren_open(bool needed) {
        if (needed) out << '(';
    }
    void paren_close(bool needed) {
        if (needed) out << ')';
    }

    void print(const StandardPtr& t, int min_level) {
        std::visit(
            overloaded{
                [&](const AtomicEventNode& n) {
                    out << n.channel;
                    for (const Arg& a : n.payload) out << '.' << arg_text(a);
                },
                [&](const SkipNode&) { out << "SKIP"; },
                [&](const ThrowNode&) { out << "THROW"; },
                [&](const YieldNode&) { out << "YIELD"; },
                [&](const SeqNode& n) {
                    const bool p = min_level > 4;
                    paren_open(p);
                    print(n.left, 5);
                    out << " ; ";
                    print(n.right, 4);
                    paren_close(p);
                },
                [&](const ChoiceNode& n) {
                    const bool p = min_level > 2;
                    paren_open(p);
                    print(n.left, 2);
                    out << " [] ";
                    print(n.right, 3);
                    paren_close(p);
                },
                [&](const ParNode& n) {
                    const bool p = min_level > 1;
                    paren_open(p);
                    print(n.left, 1);
                    if (n.sync.empty()) {
                        out << " || ";
                    } else {
                        out << " |[ ";
                        bool first = true;
                        for (const std::string& c : n.sync.channels) {
                            if (!first) out << ", ";
                            first = false;
                            out << c;
                        }
                        out << " ]| ";
                    }
                    print(n.right, 2);
                    paren_close(p);
                },
                [&](const InterruptNode& n) {
                    const bool p = min_level > 3;
                    paren_open(p);
                    print(n.body, 3);
                    out << " |> ";
                    print(n.handler, 4);
                    paren_close(p);
                },
                [&](const BlockNode& n) {
                    out << "tx{ ";
                    print(n.body, 0);
                    out << " }";
                },
                [&](const InputNode& n) {
                    if (std::holds_alternative<SkipNode>(n.body->node)) {
                        // Parentheses keep the binder closed when re-parsed.
                        out << '(' << n.channel << '?' << n.var << ':' << n.set_name
                            << ')';
                        return;
                    }
                    const bool p = min_level > 4;
                    paren_open(p);
                    out << n.channel << '?' << n.var << ':' << n.set_name << " ; ";
                    print(n.body, 4);
                    paren_close(p);
                },
                [&](const OutputNode& n) {
                    out << n.channel << '!' << arg_text(n.message);
                },
                [&](const IndexedChoiceNode& n) {
                    const bool p = min_level > 0;
                    paren_open(p);
                    out << "[] " << n.var << " : " << n.set_name << " @ ";
                    print(n.body, 0);
                    paren_close(p);
                },
                [&](const CallNode& n) {
                    out << n.name;
                    if (!n.args.empty()) {
                        out << '(';
                        bool first = true;
                        for (const Arg& a : n.args) {
                            if (!first) out << ", ";
                            first = false;
                            out << arg_text(a);
                        }
                        out << ')';
                    }
                },
            },
            t->node);
    }

    void print(const CompensablePtr& t, int min_level) {
        std::visit(
            overloaded{
                [&](const PairNode& n) {
                    const bool p = min_level > 5;
                    paren_open(p);
                    print(n.forward, 6);
                    out << " % ";
                    print(n.compensation, 6);
                    paren_close(p);
                },
                [&](const SkippNode&) { out << "SKIPP"; },
                [&](const ThrowwNode&) { out << "THROWW"; },
                [&](const YielddNode&) { out << "YIELDD"; },
                [&](const CSeqNode& n) {
                    const bool p = min_level > 4;
                    paren_open(p);
                    print(n.left, 5);
                    out << " ; ";
                    print(n.right, 4);
                    paren_close(p);
                },
                [&](const CParNode& n) {
                    const bool p = min_level > 1;
                    paren_open(p);
                    print(n.left, 1);
                    out << " || ";
                    print(n.right, 2);
                    paren_close(p);
                },
                [&](const CChoiceNode& n) {
                    const bool p = min_level > 2;
                    paren_open(p);
                    print(n.left, 2);
                    out << " [] ";
                    print(n.right, 3);
                    paren_close(p);
                },
                [&](const CInputPairNode& n) {
                    const bool trailing =
                        !std::holds_alternative<SkippNode>(n.continuation->node);
                    const bool p = trailing && min_level > 4;
                    paren_open(p);
                    out << '(' << n.channel << '?' << n.var << ':' << n.set_name
                        << " % ";
                    print(n.compensation, 6);
                    out << ')';
                    if (trailing) {
                        out << " ; ";
                        print(n.continuation, 4);
                    }
                    paren_close(p);
                },
                [&](const CCallNode& n) {
                    out << n.name;
                    if (!n.args.empty()) {
                        out << '(';
                        bool first = true;
                        for (const Arg& a : n.args) {
                            if (!first) out << ", ";
                            first = false;
                            out << arg_text(a);
                        }
                        out << ')';
                    }
                },
            },
            t->node);
    }
};

void print_def_header(std::ostringstream& out, const std::string& name,
                      const std::vector<std::string>& params) {
    out << name;
    if (!params.empty()) {
        out << '(';
        bool first = true;
        for (const std::string& p : params) {
            if (!first) out << ", ";
            first = false;
            out << p;
        }
        out << ')';
    }
    out << " = ";
}

} // namespace

std::string print_model(const Model& model) {
    std::ostringstream out;
    for (const auto& [name, atoms] : model.value_sets) {
        out << "set " << name << " = {";
        bool first = true;
        for (const Atom& a : atoms) {
            if (!first) out << ", ";
            first = false;
            out << a.render();
        }
        out << "}\n";
    }
    // Definitions of both sorts print interleaved by name.
    auto std_it = model.standard_defs.begin();
    auto comp_it = model.compensable_defs.begin();
    while (std_it != model.standard_defs.end() ||
           comp_it != model.compensable_defs.end()) {
        const bool take_std =
            comp_it == model.compensable_defs.end() ||
            (std_it != model.standard_defs.end() && std_it->first < comp_it->first);
        Printer p;
        std::ostringstream header;
        if (take_std) {
            print_def_header(header, std_it->first, std_it->second.params);
            p.print(std_it->second.body, 0);
            ++std_it;
        } else {
            print_def_header(header, comp_it->first, comp_it->second.params);
            p.print(comp_it->second.body, 0);
            ++comp_it;
        }
        out << header.str() << p.out.str() << '\n';
    }
    return out.str();
}

std::string print_term(const StandardPtr& term) {
    Printer p;
    p.print(term, 0);
    return p.out.str();
}

std::string print_term(const CompensablePtr& term) {
    Printer p;
    p.print(term, 0);
    return p.out.str();
}

} // namespace ccsp::dsl
