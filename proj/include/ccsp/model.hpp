#ifndef CCSP_MODEL_HPP
#define CCSP_MODEL_HPP

#include "ccsp/diagnostics.hpp"
#include "ccsp/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ccsp {

struct StandardDef {
    std::vector<std::string> params;
    StandardPtr body;
};

struct CompensableDef {
    std::vector<std::string> params;
    CompensablePtr body;
};

// A parsed unit: finite value-set declarations plus named, parameterised
// process definitions of both sorts.
struct Model {
    std::map<std::string, std::vector<Atom>> value_sets;  // each sorted, deduped
    std::map<std::string, StandardDef> standard_defs;
    std::map<std::string, CompensableDef> compensable_defs;

    bool has_def(const std::string& name) const;
    // Arity of a definition of either sort; nullopt when undefined.
    std::optional<std::size_t> def_arity(const std::string& name) const;
};

bool operator==(const Model& a, const Model& b);

// Variable bindings during evaluation.
using Env = std::map<std::string, Atom>;

// Load-time checks: every call target defined with matching arity and sort,
// the call graph acyclic, every referenced value set declared and nonempty.
std::vector<Diagnostic> validate_model(const Model& model);

} // namespace ccsp

#endif
