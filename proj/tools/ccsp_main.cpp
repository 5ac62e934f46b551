#include "ccsp/analyzer.hpp"
#include "ccsp/bpel.hpp"
#include "ccsp/dsl.hpp"
#include "ccsp/reports.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace ccsp;

// Exit codes: 0 ok/equal, 1 file or parse error, 2 semantic error,
// 3 bounds truncated / equal up to bound, 4 unequal or check failure.
constexpr int kOk = 0;
constexpr int kParseError = 1;
constexpr int kSemanticError = 2;
constexpr int kTruncated = 3;
constexpr int kCheckFailed = 4;

bool use_color() {
    const char* v = std::getenv("CCSP_COLOR");
    return v != nullptr && std::string(v) == "1";
}

std::string paint(const std::string& text, const char* code) {
    if (!use_color()) return text;
    return std::string("\033[") + code + "m" + text + "\033[0m";
}

std::string green(const std::string& s) { return paint(s, "32"); }
std::string red(const std::string& s) { return paint(s, "31"); }

struct FileError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw FileError{"file not found: " + path};
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diags, const std::string& path) {
    for (const Diagnostic& d : diags) std::cerr << path << ": " << d.render() << "\n";
}

std::vector<Atom> parse_args_list(const std::string& text) {
    std::vector<Atom> args;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        bool numeric = !item.empty();
        for (char c : item)
            if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
        args.push_back(numeric ? Atom::integer(std::stoll(item)) : Atom::ident(item));
    }
    return args;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct LoadedModel {
    Model model;
    std::string default_entry;  // translated BPEL documents carry one
    bpel::NamingTable naming;
    bool translated = false;
};

int classify_bpel_errors(const std::vector<Diagnostic>& diags) {
    for (const Diagnostic& d : diags)
        if (d.message.find("unsupported element") != std::string::npos)
            return kSemanticError;
    return kParseError;
}

// Loads a .ccsp model, or translates a .bpel/.xml document first.
LoadedModel load_input(const std::string& path, const std::string& alias_path,
                       int& exit_code) {
    exit_code = kOk;
    LoadedModel out;
    std::string text = read_file(path);

    if (ends_with(path, ".bpel") || ends_with(path, ".xml")) {
        bpel::BpelParseResult parsed = bpel::parse_bpel(text);
        if (!parsed.ok()) {
            print_diagnostics(parsed.diagnostics, path);
            exit_code = classify_bpel_errors(parsed.diagnostics);
            return out;
        }
        bpel::NamingTable naming = bpel::default_naming(*parsed.root);
        if (!alias_path.empty()) {
            bpel::AliasFile aliases = bpel::parse_alias_file(read_file(alias_path));
            if (has_errors(aliases.diagnostics)) {
                print_diagnostics(aliases.diagnostics, alias_path);
                exit_code = kParseError;
                return out;
            }
            std::vector<Diagnostic> warnings;
            naming = bpel::apply_aliases(naming, aliases.aliases, warnings);
            print_diagnostics(warnings, alias_path);
        }
        bpel::TranslateResult translated = bpel::translate(*parsed.root, naming);
        if (!translated.ok()) {
            print_diagnostics(translated.diagnostics, path);
            exit_code = kSemanticError;
            return out;
        }
        out.model = *translated.model;
        out.default_entry = translated.entry;
        out.naming = naming;
        out.translated = true;
        return out;
    }

    dsl::ParseResult parsed = dsl::parse_model(text);
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics, path);
        exit_code = kParseError;
        return out;
    }
    out.model = *parsed.model;
    return out;
}

int cmd_run(const std::string& path, const std::string& entry, const std::string& args,
            const Bounds& bounds, const std::string& format) {
    int code = kOk;
    LoadedModel loaded = load_input(path, "", code);
    if (code != kOk) return code;
    std::string chosen = entry.empty() ? loaded.default_entry : entry;
    if (chosen.empty()) {
        std::cerr << "error: --entry is required\n";
        return kSemanticError;
    }

    analysis::EnumerationResult result;
    try {
        result = analysis::enumerate_entry(loaded.model, chosen, parse_args_list(args),
                                           bounds);
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSemanticError;
    }

    if (format == "json") {
        std::cout << reports::enumeration_json(chosen, result, bounds).dump(2) << "\n";
    } else {
        for (const CompletedTrace& t : result.traces.traces)
            std::cout << t.render() << "\n";
        std::cerr << result.stats.trace_count << " trace(s), "
                  << (result.exhaustive ? "exhaustive" : "truncated by bounds") << "\n";
    }
    return result.exhaustive ? kOk : kTruncated;
}

int cmd_translate(const std::string& path, const std::string& alias_path,
                  const std::string& output, const std::string& format) {
    int code = kOk;
    LoadedModel loaded = load_input(path, alias_path, code);
    if (code != kOk) return code;
    if (!loaded.translated) {
        std::cerr << "error: translate expects a .bpel or .xml input\n";
        return kSemanticError;
    }

    std::string text = dsl::print_model(loaded.model);
    if (!output.empty()) {
        std::ofstream out(output, std::ios::binary);
        if (!out.good()) {
            std::cerr << "error: cannot write " << output << "\n";
            return kParseError;
        }
        out << text;
    }

    if (format == "json") {
        nlohmann::json j = reports::naming_json(loaded.naming);
        j["entry"] = loaded.default_entry;
        j["output"] = output.empty() ? nlohmann::json(nullptr) : nlohmann::json(output);
        j["model"] = text;
        std::cout << j.dump(2) << "\n";
    } else if (!output.empty()) {
        for (const auto& [def, channel] : loaded.naming.entries)
            std::cout << def << " -> " << channel << "\n";
    } else {
        // Model text on stdout stays pipeable; the table goes to stderr.
        std::cout << text;
        for (const auto& [def, channel] : loaded.naming.entries)
            std::cerr << def << " -> " << channel << "\n";
    }
    return kOk;
}

int cmd_compare(const std::string& path1, const std::string& path2,
                std::vector<std::string> entries, std::vector<std::string> args,
                const std::string& alias_path, const Bounds& bounds,
                const std::string& format) {
    int code = kOk;
    LoadedModel first = load_input(path1, alias_path, code);
    if (code != kOk) return code;
    LoadedModel second = load_input(path2, alias_path, code);
    if (code != kOk) return code;

    std::string e1 = !entries.empty() ? entries[0] : first.default_entry;
    std::string e2 = entries.size() > 1 ? entries[1] : (second.default_entry.empty()
                                                            ? e1
                                                            : second.default_entry);
    if (e1.empty() || e2.empty()) {
        std::cerr << "error: --entry is required for both sides\n";
        return kSemanticError;
    }
    std::vector<Atom> args1 = !args.empty() ? parse_args_list(args[0]) : std::vector<Atom>{};
    std::vector<Atom> args2 = args.size() > 1 ? parse_args_list(args[1]) : args1;

    analysis::EquivalenceVerdict verdict;
    try {
        verdict = analysis::check_equivalence(first.model, e1, args1, second.model, e2,
                                              args2, bounds);
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSemanticError;
    }

    if (format == "json") {
        std::cout << reports::equivalence_json(verdict).dump(2) << "\n";
    } else if (verdict.equal) {
        std::cout << green(verdict.up_to_bound ? "equal up to bound" : "equal") << "\n";
    } else {
        std::cout << red("unequal") << ": only side " << verdict.counterexample_side
                  << " has " << verdict.counterexample->render() << "\n";
    }
    if (!verdict.equal) return kCheckFailed;
    return verdict.up_to_bound ? kTruncated : kOk;
}

int cmd_check_laws(const std::vector<std::string>& laws, std::size_t samples,
                   std::uint64_t seed, const std::string& format) {
    std::vector<std::string> selected;
    for (const std::string& name : laws) {
        if (name == "all") {
            for (const std::string& l : analysis::law_registry()) selected.push_back(l);
        } else {
            selected.push_back(name);
        }
    }
    std::vector<analysis::LawReport> law_reports;
    for (const std::string& law : selected) {
        try {
            law_reports.push_back(analysis::check_law(law, samples, seed));
        } catch (const EvalError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kSemanticError;
        }
    }
    bool all_passed = true;
    for (const auto& r : law_reports) all_passed = all_passed && r.passed;

    if (format == "json") {
        std::cout << reports::laws_json(law_reports).dump(2) << "\n";
    } else {
        for (const auto& r : law_reports) {
            std::cout << (r.passed ? green("PASS") : red("FAIL")) << "  " << r.law << " ("
                      << r.checked << " checks)\n";
            if (!r.passed) std::cout << "  first failure:\n" << r.failure << "\n";
        }
    }
    return all_passed ? kOk : kCheckFailed;
}

int cmd_check_compensation(const std::string& path, const std::string& entry,
                           const std::string& args, const Bounds& bounds,
                           const std::string& format) {
    int code = kOk;
    LoadedModel loaded = load_input(path, "", code);
    if (code != kOk) return code;
    std::string chosen = entry.empty() ? loaded.default_entry : entry;
    if (chosen.empty()) {
        std::cerr << "error: --entry is required\n";
        return kSemanticError;
    }
    analysis::ConsistencyReport report;
    try {
        report = analysis::check_compensation_consistency(loaded.model, chosen,
                                                          parse_args_list(args), bounds);
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSemanticError;
    }
    if (format == "json") {
        std::cout << reports::consistency_json(report).dump(2) << "\n";
    } else {
        std::cout << (report.consistent ? green("PASS") : red("FAIL"))
                  << "  compensation consistency for " << chosen << " ("
                  << report.blocks_checked << " block(s), "
                  << report.throw_traces_checked << " throwing trace(s))\n";
        if (!report.consistent) std::cout << "  " << report.violation << "\n";
    }
    return report.consistent ? kOk : kCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cCSP workbench: trace semantics for compensating transactions"};
    app.require_subcommand(1);

    std::string file1, file2, output, alias_path, args_text, format = "text";
    std::vector<std::string> entries, args_list, laws;
    std::string compensation_file;
    Bounds bounds;
    std::size_t samples = 200;
    std::uint64_t seed = 42;

    auto add_bounds = [&](CLI::App* cmd) {
        cmd->add_option("--max-events", bounds.max_events, "Trace length cap")
            ->capture_default_str();
        cmd->add_option("--max-traces", bounds.max_traces, "Trace set size cap")
            ->capture_default_str();
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* run = app.add_subcommand("run", "Enumerate the traces of an entry");
    run->add_option("file", file1, "Model file (.ccsp, .bpel or .xml)")->required();
    run->add_option("--entry", entries, "Entry definition name");
    run->add_option("--args", args_text, "Comma-separated entry arguments");
    add_bounds(run);
    add_format(run);

    CLI::App* translate =
        app.add_subcommand("translate", "Translate a BPEL document to a model");
    translate->add_option("file", file1, "BPEL file (.bpel or .xml)")->required();
    translate->add_option("-o,--output", output, "Write the model here");
    translate->add_option("--aliases", alias_path, "Two-column alias table");
    add_format(translate);

    CLI::App* compare = app.add_subcommand("compare", "Check two entries for equality");
    compare->add_option("file1", file1, "First model")->required();
    compare->add_option("file2", file2, "Second model")->required();
    compare->add_option("--entry", entries,
                        "Entry name; may be given once for both sides or twice");
    compare->add_option("--args", args_list, "Entry arguments; may be given twice");
    compare->add_option("--aliases", alias_path, "Alias table for BPEL inputs");
    add_bounds(compare);
    add_format(compare);

    CLI::App* check = app.add_subcommand("check", "Run law or consistency checks");
    check->add_option("--laws", laws, "Law names, or 'all'")->delimiter(',');
    check->add_option("--law", laws, "Single law name")->delimiter(',');
    check->add_option("--samples", samples, "Random instances per law")
        ->capture_default_str();
    check->add_option("--seed", seed, "Generator seed")->capture_default_str();
    check->add_option("--compensation", compensation_file,
                      "Model file for a compensation-consistency check");
    check->add_option("--entry", entries, "Entry for --compensation");
    check->add_option("--args", args_text, "Entry arguments for --compensation");
    add_bounds(check);
    add_format(check);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(file1, entries.empty() ? "" : entries[0], args_text, bounds,
                           format);
        }
        if (translate->parsed()) {
            return cmd_translate(file1, alias_path, output, format);
        }
        if (compare->parsed()) {
            return cmd_compare(file1, file2, entries, args_list, alias_path, bounds,
                               format);
        }
        if (check->parsed()) {
            if (!compensation_file.empty())
                return cmd_check_compensation(compensation_file,
                                              entries.empty() ? "" : entries[0],
                                              args_text, bounds, format);
            if (laws.empty()) {
                std::cerr << "error: nothing to check; pass --laws or --compensation\n";
                return kSemanticError;
            }
            return cmd_check_laws(laws, samples, seed, format);
        }
    } catch (const FileError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kParseError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSemanticError;
    }
    return kOk;
}
