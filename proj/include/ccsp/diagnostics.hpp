#ifndef CCSP_DIAGNOSTICS_HPP
#define CCSP_DIAGNOSTICS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace ccsp {

enum class Severity { Error, Warning };

// A positioned message from the parsers and the model checks. Every
// rejected input carries at least one of these with a line and column.
struct Diagnostic {
    Severity severity = Severity::Error;
    int line = 0;    // 1-based; 0 when no position applies
    int column = 0;
    std::string message;

    std::string render() const;
};

std::string render_diagnostics(const std::vector<Diagnostic>& diags);

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

// Raised by the evaluator for semantic errors that escaped load-time
// validation (undefined names, arity mismatches on hand-built terms).
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ccsp

#endif
