#include "ccsp/model.hpp"

#include <functional>
#include <set>

namespace ccsp {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

struct Checker {
    const Model& model;
    std::vector<Diagnostic>& diags;
    std::string current_def;
    std::set<std::string>* callees = nullptr;

    void error(std::string msg) {
        diags.push_back({Severity::Error, 0, 0,
                         "in definition " + current_def + ": " + std::move(msg)});
    }

    void check_set(const std::string& set_name) {
        auto it = model.value_sets.find(set_name);
        if (it == model.value_sets.end()) {
            error("unknown set " + set_name);
        } else if (it->second.empty()) {
            error("set " + set_name + " is empty");
        }
    }

    void check_call(const std::string& name, std::size_t nargs, bool compensable) {
        if (callees) callees->insert(name);
        const bool is_std = model.standard_defs.count(name) != 0;
        const bool is_comp = model.compensable_defs.count(name) != 0;
        if (!is_std && !is_comp) {
            error("undefined name " + name);
            return;
        }
        if (compensable && !is_comp) {
            error("call to " + name + " used as compensable but defined as standard");
            return;
        }
        if (!compensable && !is_std) {
            error("call to " + name + " used as standard but defined as compensable");
            return;
        }
        const std::size_t arity = compensable
                                      ? model.compensable_defs.at(name).params.size()
                                      : model.standard_defs.at(name).params.size();
        if (arity != nargs) {
            error("arity mismatch calling " + name + ": expected " +
                  std::to_string(arity) + " argument(s), got " + std::to_string(nargs));
        }
    }

    void walk(const StandardPtr& t) {
        if (!t) {
            error("null standard term");
            return;
        }
        std::visit(overloaded{
                       [&](const AtomicEventNode&) {},
                       [&](const SkipNode&) {},
                       [&](const ThrowNode&) {},
                       [&](const YieldNode&) {},
                       [&](const SeqNode& n) { walk(n.left); walk(n.right); },
                       [&](const ChoiceNode& n) { walk(n.left); walk(n.right); },
                       [&](const ParNode& n) { walk(n.left); walk(n.right); },
                       [&](const InterruptNode& n) { walk(n.body); walk(n.handler); },
                       [&](const BlockNode& n) { walk(n.body); },
                       [&](const InputNode& n) { check_set(n.set_name); walk(n.body); },
                       [&](const OutputNode&) {},
                       [&](const IndexedChoiceNode& n) { check_set(n.set_name); walk(n.body); },
                       [&](const CallNode& n) { check_call(n.name, n.args.size(), false); },
                   },
                   t->node);
    }

    void walk(const CompensablePtr& t) {
        if (!t) {
            error("null compensable term");
            return;
        }
        std::visit(overloaded{
                       [&](const PairNode& n) { walk(n.forward); walk(n.compensation); },
                       [&](const SkippNode&) {},
                       [&](const ThrowwNode&) {},
                       [&](const YielddNode&) {},
                       [&](const CSeqNode& n) { walk(n.left); walk(n.right); },
                       [&](const CParNode& n) { walk(n.left); walk(n.right); },
                       [&](const CChoiceNode& n) { walk(n.left); walk(n.right); },
                       [&](const CInputPairNode& n) {
                           check_set(n.set_name);
                           walk(n.compensation);
                           walk(n.continuation);
                       },
                       [&](const CCallNode& n) { check_call(n.name, n.args.size(), true); },
                   },
                   t->node);
    }
};

} // namespace

bool Model::has_def(const std::string& name) const {
    return standard_defs.count(name) != 0 || compensable_defs.count(name) != 0;
}

std::optional<std::size_t> Model::def_arity(const std::string& name) const {
    if (auto it = standard_defs.find(name); it != standard_defs.end())
        return it->second.params.size();
    if (auto it = compensable_defs.find(name); it != compensable_defs.end())
        return it->second.params.size();
    return std::nullopt;
}

bool operator==(const Model& a, const Model& b) {
    if (a.value_sets != b.value_sets) return false;
    auto defs_equal = [](const auto& x, const auto& y) {
        if (x.size() != y.size()) return false;
        auto ix = x.begin();
        auto iy = y.begin();
        for (; ix != x.end(); ++ix, ++iy) {
            if (ix->first != iy->first) return false;
            if (ix->second.params != iy->second.params) return false;
            if (!equal_terms(ix->second.body, iy->second.body)) return false;
        }
        return true;
    };
    return defs_equal(a.standard_defs, b.standard_defs) &&
           defs_equal(a.compensable_defs, b.compensable_defs);
}

std::vector<Diagnostic> validate_model(const Model& model) {
    std::vector<Diagnostic> diags;
    std::map<std::string, std::set<std::string>> graph;

    for (const auto& [name, def] : model.standard_defs) {
        Checker c{model, diags, name, &graph[name]};
        c.walk(def.body);
    }
    for (const auto& [name, def] : model.compensable_defs) {
        Checker c{model, diags, name, &graph[name]};
        c.walk(def.body);
    }

    // Cycle detection over the call graph (iterative DFS, three colours).
    std::map<std::string, int> colour;  // 0 white, 1 grey, 2 black
    std::vector<std::string> stack;
    std::function<bool(const std::string&)> visit = [&](const std::string& n) -> bool {
        colour[n] = 1;
        stack.push_back(n);
        for (const auto& m : graph[n]) {
            if (!model.has_def(m)) continue;  // undefined: reported above
            if (colour[m] == 1) {
                std::string cycle = m;
                for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                    cycle = *it + " -> " + cycle;
                    if (*it == m) break;
                }
                diags.push_back({Severity::Error, 0, 0,
                                 "cyclic call graph: " + cycle});
                return false;
            }
            if (colour[m] == 0 && !visit(m)) return false;
        }
        stack.pop_back();
        colour[n] = 2;
        return true;
    };
    for (const auto& [name, _] : graph) {
        if (colour[name] == 0 && !visit(name)) break;
    }
    return diags;
}

} // namespace ccsp
