#include "ccsp/bpel.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ccsp::bpel {

namespace {

// ---------------------------------------------------------------------------
// Minimal XML reader for the subset: elements, attributes, comments and the
// XML declaration. Positions are tracked for diagnostics; namespaces are
// ignored (local names drive parsing) and text content is skipped.
// ---------------------------------------------------------------------------

struct XmlNode {
    std::string name;  // local name, namespace prefix stripped
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<std::shared_ptr<XmlNode>> children;
    int line = 1, col = 1;

    std::string attr(const std::string& key) const {
        for (const auto& [k, v] : attributes)
            if (k == key) return v;
        return "";
    }
};

using XmlPtr = std::shared_ptr<XmlNode>;

struct XmlReader {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1, col = 1;
    std::vector<Diagnostic>& diags;
    bool failed = false;

    char peek(std::size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }

    void advance() {
        if (pos >= src.size()) return;
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void error(const std::string& msg) {
        if (!failed) diags.push_back({Severity::Error, line, col, "malformed XML: " + msg});
        failed = true;
    }

    void skip_ws() {
        while (std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    bool consume(const char* text) {
        std::size_t n = 0;
        while (text[n] != '\0') {
            if (peek(n) != text[n]) return false;
            ++n;
        }
        for (std::size_t i = 0; i < n; ++i) advance();
        return true;
    }

    static std::string local_name(const std::string& qualified) {
        auto colon = qualified.rfind(':');
        return colon == std::string::npos ? qualified : qualified.substr(colon + 1);
    }

    std::string read_name() {
        std::string name;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
               peek() == ':' || peek() == '-' || peek() == '.') {
            name += peek();
            advance();
        }
        return name;
    }

    void skip_misc() {
        for (;;) {
            skip_ws();
            if (consume("<?")) {
                while (!failed && !consume("?>")) {
                    if (peek() == '\0') return error("unterminated declaration");
                    advance();
                }
                continue;
            }
            if (consume("<!--")) {
                while (!failed && !consume("-->")) {
                    if (peek() == '\0') return error("unterminated comment");
                    advance();
                }
                continue;
            }
            break;
        }
    }

    // Parses attributes up to '>' or '/>'; returns true for self-closing.
    bool read_attributes(XmlNode& node, bool& self_closing) {
        for (;;) {
            skip_ws();
            // The listings separate attributes with commas; tolerate them.
            if (peek() == ',') {
                advance();
                continue;
            }
            if (peek() == '/') {
                advance();
                if (peek() != '>') {
                    error("expected '>' after '/'");
                    return false;
                }
                advance();
                self_closing = true;
                return true;
            }
            if (peek() == '>') {
                advance();
                self_closing = false;
                return true;
            }
            if (peek() == '\0') {
                error("unterminated element <" + node.name + ">");
                return false;
            }
            std::string key = read_name();
            if (key.empty()) {
                error("expected an attribute name in <" + node.name + ">");
                return false;
            }
            skip_ws();
            if (peek() != '=') {
                error("expected '=' after attribute " + key);
                return false;
            }
            advance();
            skip_ws();
            char quote = peek();
            if (quote != '"' && quote != '\'') {
                error("expected a quoted value for attribute " + key);
                return false;
            }
            advance();
            std::string value;
            while (peek() != quote) {
                if (peek() == '\0') {
                    error("unterminated attribute value for " + key);
                    return false;
                }
                value += peek();
                advance();
            }
            advance();
            node.attributes.emplace_back(local_name(key), value);
        }
    }

    XmlPtr read_element() {
        skip_misc();
        if (failed) return nullptr;
        if (peek() != '<') {
            error("expected an element");
            return nullptr;
        }
        auto node = std::make_shared<XmlNode>();
        node->line = line;
        node->col = col;
        advance();  // '<'
        node->name = local_name(read_name());
        if (node->name.empty()) {
            error("expected an element name after '<'");
            return nullptr;
        }
        bool self_closing = false;
        if (!read_attributes(*node, self_closing)) return nullptr;
        if (self_closing) return node;
        // Children until the matching close tag. Text content is skipped.
        for (;;) {
            skip_misc();
            if (failed) return nullptr;
            if (peek() == '\0') {
                error("missing </" + node->name + ">");
                return nullptr;
            }
            if (peek() == '<' && peek(1) == '/') {
                advance();
                advance();
                std::string closing = local_name(read_name());
                skip_ws();
                if (peek() != '>') {
                    error("expected '>' in closing tag");
                    return nullptr;
                }
                advance();
                if (closing != node->name) {
                    error("mismatched closing tag </" + closing + ">; expected </" +
                          node->name + ">");
                    return nullptr;
                }
                return node;
            }
            if (peek() == '<') {
                XmlPtr child = read_element();
                if (!child) return nullptr;
                node->children.push_back(std::move(child));
                continue;
            }
            // Skip text content.
            while (peek() != '<' && peek() != '\0') advance();
        }
    }
};

// ---------------------------------------------------------------------------
// XML -> activity subset
// ---------------------------------------------------------------------------

struct SubsetReader {
    std::vector<Diagnostic>& diags;

    void error(const XmlNode& at, const std::string& msg) {
        diags.push_back({Severity::Error, at.line, at.col, msg});
    }

    ActivityPtr basic(const XmlNode& node, Kind kind) {
        auto a = std::make_shared<Activity>();
        a->kind = kind;
        a->partner_link = node.attr("partnerLink");
        a->operation = node.attr("operation");
        a->variable = node.attr("variable");
        if (a->variable.empty()) a->variable = node.attr("Variable");
        a->input_variable = node.attr("inputVariable");
        a->output_variable = node.attr("outputVariable");
        if (a->partner_link.empty())
            error(node, "<" + node.name + "> is missing its partnerLink");
        return a;
    }

    ActivityPtr convert(const XmlNode& node, bool inside_handler) {
        if (node.name == "receive") return basic(node, Kind::Receive);
        if (node.name == "invoke") return basic(node, Kind::Invoke);
        if (node.name == "reply") return basic(node, Kind::Reply);
        if (node.name == "sequence" || node.name == "flow") {
            auto a = std::make_shared<Activity>();
            a->kind = node.name == "sequence" ? Kind::Sequence : Kind::Flow;
            for (const XmlPtr& child : node.children) {
                ActivityPtr converted = convert(*child, inside_handler);
                if (converted) a->children.push_back(std::move(converted));
            }
            if (a->children.empty())
                error(node, "empty <" + node.name + ">");
            return a;
        }
        if (node.name == "scope") {
            auto a = std::make_shared<Activity>();
            a->kind = Kind::Scope;
            for (const XmlPtr& child : node.children) {
                if (child->name == "compensationHandler") {
                    if (inside_handler) {
                        error(*child,
                              "a compensation handler may not contain a scope with "
                              "its own handler");
                        continue;
                    }
                    if (a->compensation_handler) {
                        error(*child, "scope has multiple compensation handlers");
                        continue;
                    }
                    if (child->children.size() != 1) {
                        error(*child,
                              "compensationHandler must contain exactly one activity");
                        continue;
                    }
                    a->compensation_handler = convert(*child->children[0], true);
                    continue;
                }
                ActivityPtr converted = convert(*child, inside_handler);
                if (converted) a->children.push_back(std::move(converted));
            }
            if (a->children.size() != 1) {
                error(node, "scope must have exactly one body activity");
                return a;
            }
            return a;
        }
        if (node.name == "partnerLink" || node.name == "partnerLinks" ||
            node.name == "variables" || node.name == "variable") {
            // Declarative plumbing with no behaviour.
            return nullptr;
        }
        error(node, "unsupported element: " + node.name);
        return nullptr;
    }

    ActivityPtr process(const XmlNode& node) {
        if (node.name != "process") {
            error(node, "expected a <process> document, found <" + node.name + ">");
            return nullptr;
        }
        auto a = std::make_shared<Activity>();
        a->kind = Kind::Process;
        a->name = node.attr("name");
        if (a->name.empty()) a->name = "Process";
        for (const XmlPtr& child : node.children) {
            ActivityPtr converted = convert(*child, false);
            if (converted) a->children.push_back(std::move(converted));
        }
        if (a->children.size() != 1)
            error(node, "process must have exactly one top-level activity");
        return a;
    }
};

std::string sanitize(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            out += c;
        else if (!out.empty() && out.back() != '_')
            out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

std::string default_name(const Activity& a) {
    std::string kind;
    std::string detail;
    switch (a.kind) {
    case Kind::Receive:
        kind = "receive";
        detail = a.variable;
        break;
    case Kind::Invoke:
        kind = "invoke";
        detail = !a.operation.empty()
                     ? a.operation
                     : (!a.input_variable.empty() ? a.input_variable : a.output_variable);
        break;
    case Kind::Reply:
        kind = "reply";
        detail = a.variable;
        break;
    default:
        return "";
    }
    std::string name = kind + "_" + sanitize(a.partner_link);
    if (!detail.empty()) name += "_" + sanitize(detail);
    return name;
}

void collect_basics(const ActivityPtr& a, std::vector<ActivityPtr>& out) {
    if (!a) return;
    if (a->kind == Kind::Receive || a->kind == Kind::Invoke || a->kind == Kind::Reply) {
        out.push_back(a);
        return;
    }
    if (a->compensation_handler) collect_basics(a->compensation_handler, out);
    for (const ActivityPtr& child : a->children) collect_basics(child, out);
}

} // namespace

BpelParseResult parse_bpel(const std::string& xml) {
    BpelParseResult result;
    XmlReader reader{xml, 0, 1, 1, result.diagnostics};
    XmlPtr root = reader.read_element();
    if (!root || has_errors(result.diagnostics)) return result;
    // Anything after the root element other than whitespace/comments is noise.
    reader.skip_misc();

    SubsetReader subset{result.diagnostics};
    ActivityPtr tree = subset.process(*root);
    if (has_errors(result.diagnostics)) return result;
    result.root = tree;
    return result;
}

std::optional<std::string> NamingTable::channel_for(const std::string& default_name) const {
    for (const auto& [def, channel] : entries)
        if (def == default_name) return channel;
    return std::nullopt;
}

NamingTable default_naming(const ActivityPtr& tree) {
    std::vector<ActivityPtr> basics;
    collect_basics(tree, basics);

    std::map<std::string, int> counts;
    for (const ActivityPtr& a : basics) ++counts[default_name(*a)];

    NamingTable table;
    std::map<std::string, int> seen;
    for (const ActivityPtr& a : basics) {
        std::string base = default_name(*a);
        std::string name = base;
        if (counts[base] > 1) name = base + "_" + std::to_string(++seen[base]);
        if (!table.channel_for(name)) table.entries.emplace_back(name, name);
    }
    return table;
}

AliasFile parse_alias_file(const std::string& text) {
    AliasFile result;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream fields(line);
        std::string def, alias, extra;
        if (!(fields >> def)) continue;  // blank line
        if (!(fields >> alias) || (fields >> extra)) {
            result.diagnostics.push_back(
                {Severity::Error, line_no, 1,
                 "alias lines are 'default_name alias' pairs"});
            continue;
        }
        result.aliases[def] = alias;
    }
    return result;
}

NamingTable apply_aliases(const NamingTable& defaults,
                          const std::map<std::string, std::string>& aliases,
                          std::vector<Diagnostic>& warnings) {
    NamingTable out;
    std::set<std::string> used;
    for (const auto& [def, channel] : defaults.entries) {
        auto it = aliases.find(def);
        out.entries.emplace_back(def, it != aliases.end() ? it->second : channel);
        used.insert(def);
    }
    for (const auto& [def, alias] : aliases) {
        if (!used.count(def))
            warnings.push_back({Severity::Warning, 0, 0,
                                "alias for unknown default name " + def + " ignored"});
    }
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Translation into the compensable core
// ---------------------------------------------------------------------------

struct Translator {
    const NamingTable& naming;
    std::vector<Diagnostic>& diags;
    std::map<std::string, int> suffix_seen;
    std::map<std::string, int> suffix_counts;

    std::string channel_of(const Activity& a) {
        std::string base = default_name(a);
        std::string name = base;
        if (suffix_counts[base] > 1) name = base + "_" + std::to_string(++suffix_seen[base]);
        auto channel = naming.channel_for(name);
        if (!channel) {
            diags.push_back({Severity::Error, 0, 0,
                             "naming table has no entry for " + name});
            return name;
        }
        return *channel;
    }

    bool has_handler_scopes(const ActivityPtr& a) {
        if (!a) return false;
        if (a->kind == Kind::Scope && a->compensation_handler) return true;
        for (const ActivityPtr& child : a->children)
            if (has_handler_scopes(child)) return true;
        return false;
    }

    bool is_basic(const ActivityPtr& a) {
        return a->kind == Kind::Receive || a->kind == Kind::Invoke ||
               a->kind == Kind::Reply;
    }

    // A handler-free activity becomes a standard process.
    StandardPtr to_standard(const ActivityPtr& a) {
        switch (a->kind) {
        case Kind::Receive:
        case Kind::Invoke:
        case Kind::Reply:
            return mk::ev(channel_of(*a));
        case Kind::Sequence: {
            // Right-associative, matching the parser's canonical shape.
            StandardPtr out;
            for (auto it = a->children.rbegin(); it != a->children.rend(); ++it) {
                StandardPtr next = to_standard(*it);
                out = out ? mk::seq(std::move(next), std::move(out)) : next;
            }
            return out ? out : mk::skip();
        }
        case Kind::Flow: {
            StandardPtr out;
            for (const ActivityPtr& child : a->children) {
                StandardPtr next = to_standard(child);
                out = out ? mk::par(std::move(out), SyncSet{}, std::move(next)) : next;
            }
            return out ? out : mk::skip();
        }
        case Kind::Scope:
            return to_standard(a->children.at(0));
        default:
            diags.push_back({Severity::Error, 0, 0, "unexpected activity in handler"});
            return mk::skip();
        }
    }

    CompensablePtr to_compensable(const ActivityPtr& a) {
        switch (a->kind) {
        case Kind::Receive:
        case Kind::Invoke:
        case Kind::Reply:
            return mk::pair(mk::ev(channel_of(*a)), mk::skip());
        case Kind::Sequence: {
            CompensablePtr out;
            for (auto it = a->children.rbegin(); it != a->children.rend(); ++it) {
                CompensablePtr next = to_compensable(*it);
                out = out ? mk::cseq(std::move(next), std::move(out)) : next;
            }
            return out ? out : mk::skipp();
        }
        case Kind::Flow: {
            CompensablePtr out;
            for (const ActivityPtr& child : a->children) {
                CompensablePtr next = to_compensable(child);
                out = out ? mk::cpar(std::move(out), std::move(next)) : next;
            }
            return out ? out : mk::skipp();
        }
        case Kind::Scope:
            return scope(a);
        default:
            diags.push_back({Severity::Error, 0, 0, "unexpected activity"});
            return mk::skipp();
        }
    }

    CompensablePtr scope(const ActivityPtr& a) {
        const ActivityPtr& body = a->children.at(0);
        if (!a->compensation_handler) return to_compensable(body);
        if (!has_handler_scopes(body)) {
            // The whole basic body forms one pair with the handler.
            return mk::pair(to_standard(body), to_standard(a->compensation_handler));
        }
        // The body mixes basic activities and handler-bearing sub-scopes: the
        // outer handler covers the leading run of basic activities as one
        // pair, and the sub-scopes keep their own handlers.
        if (body->kind != Kind::Sequence) {
            diags.push_back({Severity::Error, 0, 0,
                             "a handler-bearing scope over nested scopes must have a "
                             "sequence body"});
            return mk::skipp();
        }
        std::size_t i = 0;
        while (i < body->children.size() && is_basic(body->children[i])) ++i;
        StandardPtr leading;
        for (std::size_t j = i; j > 0; --j) {
            StandardPtr next = to_standard(body->children[j - 1]);
            leading = leading ? mk::seq(std::move(next), std::move(leading)) : next;
        }
        for (std::size_t j = i; j < body->children.size(); ++j) {
            if (is_basic(body->children[j])) {
                diags.push_back(
                    {Severity::Error, 0, 0,
                     "basic activities after a compensable sub-scope are not "
                     "supported inside a handler-bearing scope"});
                return mk::skipp();
            }
        }
        CompensablePtr out;
        for (std::size_t j = body->children.size(); j > i; --j) {
            CompensablePtr next = to_compensable(body->children[j - 1]);
            out = out ? mk::cseq(std::move(next), std::move(out)) : next;
        }
        if (leading) {
            CompensablePtr head =
                mk::pair(std::move(leading), to_standard(a->compensation_handler));
            out = out ? mk::cseq(std::move(head), std::move(out)) : head;
        }
        return out ? out : mk::skipp();
    }
};

} // namespace

TranslateResult translate(const ActivityPtr& tree, const NamingTable& naming) {
    TranslateResult result;
    if (!tree || tree->kind != Kind::Process || tree->children.size() != 1) {
        result.diagnostics.push_back(
            {Severity::Error, 0, 0, "translation needs a parsed <process> tree"});
        return result;
    }
    Translator translator{naming, result.diagnostics, {}, {}};
    // Suffix disambiguation must mirror default_naming's document order.
    {
        std::vector<ActivityPtr> basics;
        collect_basics(tree, basics);
        for (const ActivityPtr& a : basics) ++translator.suffix_counts[default_name(*a)];
    }

    std::string entry = sanitize(tree->name);
    if (entry.empty()) entry = "Process";
    CompensablePtr body = translator.to_compensable(tree->children.at(0));
    if (has_errors(result.diagnostics)) return result;

    Model model;
    model.standard_defs[entry] = StandardDef{{}, mk::block(std::move(body))};
    std::vector<Diagnostic> validation = validate_model(model);
    result.diagnostics.insert(result.diagnostics.end(), validation.begin(),
                              validation.end());
    if (has_errors(result.diagnostics)) return result;

    result.entry = entry;
    result.model = std::move(model);
    return result;
}

} // namespace ccsp::bpel
