// Acceptance suite: every release-gating property in one binary, one
// PASS/FAIL line per criterion, nonzero exit if any fail.

#include "ccsp/analyzer.hpp"
#include "ccsp/bpel.hpp"
#include "ccsp/dsl.hpp"
#include "ccsp/semantics.hpp"

#include "support/model_gen.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace ccsp;
using namespace ccsp::analysis;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw std::runtime_error("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string fixture(const std::string& name) {
    return std::string(CCSP_FIXTURE_DIR) + "/" + name;
}

Model load_model(const std::string& name, std::string& detail) {
    auto result = dsl::parse_model(read_file(fixture(name)));
    if (!result.ok()) {
        detail = name + " failed to parse:\n" + render_diagnostics(result.diagnostics);
        throw std::runtime_error(detail);
    }
    return *result.model;
}

Model translate_fixture(const std::string& bpel_name, const std::string& alias_name,
                        std::string& entry, std::string& detail) {
    auto parsed = bpel::parse_bpel(read_file(fixture(bpel_name)));
    if (!parsed.ok()) {
        detail = bpel_name + ":\n" + render_diagnostics(parsed.diagnostics);
        throw std::runtime_error(detail);
    }
    auto aliases = bpel::parse_alias_file(read_file(fixture(alias_name)));
    std::vector<Diagnostic> warnings;
    auto naming = bpel::apply_aliases(bpel::default_naming(*parsed.root),
                                      aliases.aliases, warnings);
    auto translated = bpel::translate(*parsed.root, naming);
    if (!translated.ok()) {
        detail = bpel_name + ":\n" + render_diagnostics(translated.diagnostics);
        throw std::runtime_error(detail);
    }
    entry = translated.entry;
    return *translated.model;
}

int first_index(const CompletedTrace& t, const std::string& channel) {
    for (std::size_t i = 0; i < t.events.size(); ++i)
        if (t.events[i].channel == channel) return static_cast<int>(i);
    return -1;
}

// --------------------------------------------------------------------------

bool criterion_terminal_join(std::string& detail) {
    LawReport r = check_law("terminal-join-table", 1, 42);
    if (!r.passed) detail = r.failure;
    // 9 commutativity pairs, 27 associativity triples, identities/absorption.
    return r.passed && r.checked >= 9 + 27;
}

bool criterion_law_suite(std::string& detail) {
    const char* laws[] = {"assoc-par",     "comm-par",        "seq-unit",
                          "choice-union",  "derived-forms",   "input-expansion"};
    for (const char* law : laws) {
        LawReport r = check_law(law, 200, 42);
        if (!r.passed) {
            detail = std::string(law) + " failed:\n" + r.failure;
            return false;
        }
    }
    return true;
}

bool criterion_compensation_reversal(std::string& detail) {
    LawReport r = check_law("compensation-reversal", 1, 42);
    if (!r.passed) detail = r.failure;
    return r.passed && r.checked == 5;
}

bool criterion_block_absorption(std::string& detail) {
    TermGenerator gen(42);
    const Bounds bounds{64, 1u << 20};
    const Model empty;
    for (int i = 0; i < 200; ++i) {
        CompensablePtr term = gen.compensable_term(4, /*committing_compensations=*/true);
        TraceSet closed =
            block_close(traces_compensable(term, empty, {}, bounds), bounds);
        for (const CompletedTrace& t : closed.traces) {
            if (t.terminal == Terminal::Throw) {
                detail = "sample " + std::to_string(i) + " leaked a throw: " +
                         t.render() + "\n" + dsl::print_term(term);
                return false;
            }
        }
    }
    return true;
}

bool criterion_loanstar_paths(std::string& detail) {
    Model m = load_model("loanstar.ccsp", detail);
    EnumerationResult r = enumerate_entry(m, "LoanStar", {}, Bounds{});
    if (!r.exhaustive) {
        detail = "enumeration hit a bound";
        return false;
    }
    std::string listing;
    std::map<std::string, int> paths_per_amount;
    for (const CompletedTrace& t : r.traces.traces) {
        listing += t.render() + "\n";
        if (t.events.empty() || t.events.back().channel != "Reply") {
            detail = "trace does not end in a reply: " + t.render();
            return false;
        }
        paths_per_amount[t.events.front().render()]++;
    }
    const std::string golden = read_file(fixture("loanstar_paths.golden"));
    if (listing != golden) {
        detail = "trace listing differs from the golden file:\n" + listing;
        return false;
    }
    for (const auto& [amount, count] : paths_per_amount) {
        if (count != 5) {
            detail = amount + " has " + std::to_string(count) + " paths, expected 5";
            return false;
        }
    }
    return paths_per_amount.size() == 2;
}

bool criterion_supplier_system(std::string& detail) {
    Model m = load_model("supplier.ccsp", detail);
    EnumerationResult r = enumerate_entry(m, "System", {}, Bounds{});
    if (!r.exhaustive) {
        detail = "enumeration hit a bound";
        return false;
    }
    int rejects = 0, accepts = 0;
    for (const CompletedTrace& t : r.traces.traces) {
        const int ack_at = first_index(t, "Ack");
        if (ack_at < 0) {
            detail = "trace without an acknowledgement: " + t.render();
            return false;
        }
        const bool rejected = t.events[ack_at].payload.at(0) == Atom::ident("Reject");
        const int cancel_at = first_index(t, "Cancel");
        const int cancel_order_at = first_index(t, "CancelOrder");
        if (rejected) {
            ++rejects;
            if (cancel_at <= ack_at || cancel_order_at <= ack_at) {
                detail = "rejection without trailing cancellations: " + t.render();
                return false;
            }
        } else {
            ++accepts;
            if (cancel_at >= 0 || cancel_order_at >= 0) {
                detail = "acceptance ran a compensation: " + t.render();
                return false;
            }
        }
    }
    if (rejects == 0 || accepts == 0) {
        detail = "degenerate system: " + std::to_string(rejects) + " rejects, " +
                 std::to_string(accepts) + " accepts";
        return false;
    }
    return true;
}

bool criterion_bpel_equivalence(std::string& detail) {
    struct Case {
        const char* bpel;
        const char* aliases;
        const char* hand_model;
        const char* hand_entry;
    };
    const Case cases[] = {
        {"supplier.bpel", "supplier_bpel.aliases", "supplier.ccsp", "SupplierFlow"},
        {"loanstar.bpel", "loanstar_bpel.aliases", "loanstar.ccsp", "LoanStarFlow"},
    };
    for (const Case& c : cases) {
        std::string entry;
        Model translated = translate_fixture(c.bpel, c.aliases, entry, detail);
        Model hand = load_model(c.hand_model, detail);
        EquivalenceVerdict v = check_equivalence(translated, entry, {}, hand,
                                                 c.hand_entry, {}, Bounds{});
        if (!v.equal || v.up_to_bound) {
            detail = std::string(c.bpel) + " vs " + c.hand_entry + ": " +
                     (v.equal ? "only equal up to bound"
                              : "counterexample " + v.counterexample->render());
            return false;
        }
    }
    return true;
}

bool criterion_round_trip(std::string& detail) {
    for (const char* name : {"loanstar.ccsp", "supplier.ccsp", "broker.ccsp"}) {
        Model first = load_model(name, detail);
        auto again = dsl::parse_model(dsl::print_model(first));
        if (!again.ok() || !(*again.model == first)) {
            detail = std::string(name) + " does not round-trip";
            return false;
        }
    }
    tests::ModelGenerator gen(42);
    for (int i = 0; i < 500; ++i) {
        Model m = gen.next();
        std::string text = dsl::print_model(m);
        auto parsed = dsl::parse_model(text);
        if (!parsed.ok()) {
            detail = "fuzz model " + std::to_string(i) + " failed to re-parse:\n" +
                     render_diagnostics(parsed.diagnostics) + text;
            return false;
        }
        if (!(*parsed.model == m)) {
            detail = "fuzz model " + std::to_string(i) + " re-parsed differently:\n" +
                     text + "---\n" + dsl::print_model(*parsed.model);
            return false;
        }
        if (dsl::print_model(*parsed.model) != text) {
            detail = "printing is not a fixpoint for fuzz model " + std::to_string(i);
            return false;
        }
    }
    return true;
}

std::string capture(const std::string& command) {
    std::string full = command + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::string out;
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, n);
    pclose(pipe);
    return out;
}

bool criterion_determinism(std::string& detail) {
    const std::string cli = CCSP_CLI_PATH;
    const std::string invocations[] = {
        cli + " run " + fixture("loanstar.ccsp") + " --entry LoanStar --format json",
        cli + " run " + fixture("supplier.ccsp") + " --entry System --format json",
        cli + " run " + fixture("broker.ccsp") + " --entry System --format json",
        cli + " compare " + fixture("supplier.ccsp") + " " + fixture("supplier.bpel") +
            " --entry SupplierFlow --aliases " + fixture("supplier_bpel.aliases") +
            " --format json",
        cli + " compare " + fixture("loanstar.ccsp") + " " + fixture("loanstar.bpel") +
            " --entry LoanStarFlow --aliases " + fixture("loanstar_bpel.aliases") +
            " --format json",
        cli + " check --laws all --samples 200 --seed 42 --format json",
        cli + " check --compensation " + fixture("supplier.ccsp") +
            " --entry System --format json",
        cli + " translate " + fixture("supplier.bpel") + " --aliases " +
            fixture("supplier_bpel.aliases") + " --format json",
    };
    for (const std::string& invocation : invocations) {
        std::string first = capture(invocation);
        std::string second = capture(invocation);
        if (first.empty() || first != second) {
            detail = "output differs across runs for:\n" + invocation;
            return false;
        }
    }
    return true;
}

} // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        double budget_seconds;
        std::function<bool(std::string&)> run;
    };
    const Criterion criteria[] = {
        {1, "terminal-join algebra (pairs and triples, exhaustive)", 1.0,
         criterion_terminal_join},
        {2, "algebraic law suite (6 laws x 200 seeded instances)", 30.0,
         criterion_law_suite},
        {3, "compensation reversal for 1..5 pairs", 5.0,
         criterion_compensation_reversal},
        {4, "block interrupt absorption over 200 generated terms", 30.0,
         criterion_block_absorption},
        {5, "lender fixture path enumeration vs golden file", 5.0,
         criterion_loanstar_paths},
        {6, "supplier system cancels exactly on rejection", 60.0,
         criterion_supplier_system},
        {7, "workflow-to-model translation equivalences", 120.0,
         criterion_bpel_equivalence},
        {8, "parser/printer round-trip on fixtures and 500 fuzz models", 30.0,
         criterion_round_trip},
        {9, "byte-identical JSON reports across repeated runs", 600.0,
         criterion_determinism},
    };

    bool all_passed = true;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (elapsed > c.budget_seconds) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
        }
        std::printf("%s  criterion %d: %s (%.2fs, budget %.0fs)\n",
                    ok ? "PASS" : "FAIL", c.number, c.name, elapsed, c.budget_seconds);
        if (!ok && !detail.empty()) std::printf("      %s\n", detail.c_str());
        all_passed = all_passed && ok;
    }
    return all_passed ? 0 : 1;
}
