#ifndef CCSP_DSL_HPP
#define CCSP_DSL_HPP

#include "ccsp/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ccsp::dsl {

struct ParseResult {
    std::optional<Model> model;   // present iff no error diagnostics
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

// Parse a model from `.ccsp` source text. On failure, `model` is empty and
// every error carries a line and column. The grammar and the operator
// precedence table are documented in docs/dsl.md.
ParseResult parse_model(const std::string& text);

// Canonical text for a model; re-parses to an equal Model.
std::string print_model(const Model& model);

// Canonical text for a single term, in definition-body syntax. Used by the
// analyzer to serialize law counterexamples.
std::string print_term(const StandardPtr& term);
std::string print_term(const CompensablePtr& term);

} // namespace ccsp::dsl

#endif
