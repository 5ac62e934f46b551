#ifndef CCSP_BPEL_HPP
#define CCSP_BPEL_HPP

#include "ccsp/model.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ccsp::bpel {

// The BPEL activity subset: process, scope (with optional compensation
// handler), sequence, flow, and the basic receive/invoke/reply activities.
struct Activity;
using ActivityPtr = std::shared_ptr<const Activity>;

enum class Kind { Process, Scope, Sequence, Flow, Receive, Invoke, Reply };

struct Activity {
    Kind kind = Kind::Process;
    std::string name;          // process name
    std::string partner_link;  // receive/invoke/reply
    std::string operation;     // invoke
    std::string variable;      // receive/reply
    std::string input_variable;   // invoke
    std::string output_variable;  // invoke
    std::vector<ActivityPtr> children;      // process/sequence/flow body, scope body
    ActivityPtr compensation_handler;       // scope only
};

struct BpelParseResult {
    std::optional<ActivityPtr> root;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return root.has_value(); }
};

// Parse the XML subset. Unknown elements are errors naming the element;
// namespaces are ignored and local names drive parsing.
BpelParseResult parse_bpel(const std::string& xml);

// Maps activities to channel names. Defaults follow
// `<kind>_<partnerLink>[_<operation|variable>]` with numeric suffixes on
// collisions; aliases override defaults.
struct NamingTable {
    // default name -> channel, in deterministic document order
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> channel_for(const std::string& default_name) const;
};

NamingTable default_naming(const ActivityPtr& tree);

// Two-column `default_name alias` text, `#` comments. Unknown default
// names produce warnings, not errors.
struct AliasFile {
    std::map<std::string, std::string> aliases;
    std::vector<Diagnostic> diagnostics;
};
AliasFile parse_alias_file(const std::string& text);

// Applies aliases on top of the defaults; aliased entries keep document
// order. Unknown defaults are reported as warnings.
NamingTable apply_aliases(const NamingTable& defaults,
                          const std::map<std::string, std::string>& aliases,
                          std::vector<Diagnostic>& warnings);

struct TranslateResult {
    std::optional<Model> model;
    std::string entry;  // name of the generated definition
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

// Translate a parsed document into a compensable model: the process becomes
// a transaction block, sequence/flow become compensable sequential/parallel
// composition, a handler-bearing scope over basic activities becomes a
// compensation pair, and each basic activity becomes one payload-free event.
TranslateResult translate(const ActivityPtr& tree, const NamingTable& naming);

} // namespace ccsp::bpel

#endif
