#include "ccsp/reports.hpp"

namespace ccsp::reports {

using nlohmann::json;

json trace_json(const CompletedTrace& t) {
    json events = json::array();
    for (const Event& e : t.events) events.push_back(e.render());
    return json{{"events", events}, {"terminal", terminal_name(t.terminal)}};
}

json bounds_json(const Bounds& b) {
    return json{{"maxEvents", b.max_events}, {"maxTraces", b.max_traces}};
}

json enumeration_json(const std::string& entry, const analysis::EnumerationResult& result,
                      const Bounds& bounds) {
    json traces = json::array();
    for (const CompletedTrace& t : result.traces.traces) traces.push_back(trace_json(t));
    return json{{"command", "run"},
                {"entry", entry},
                {"bounds", bounds_json(bounds)},
                {"exhaustive", result.exhaustive},
                {"stats",
                 json{{"traces", result.stats.trace_count},
                      {"maxLength", result.stats.max_length}}},
                {"traces", traces}};
}

json equivalence_json(const analysis::EquivalenceVerdict& verdict) {
    json j{{"command", "compare"},
           {"equal", verdict.equal},
           {"upToBound", verdict.up_to_bound}};
    if (verdict.counterexample) {
        j["counterexample"] = trace_json(*verdict.counterexample);
        j["counterexampleSide"] = verdict.counterexample_side;
    } else {
        j["counterexample"] = nullptr;
    }
    return j;
}

json law_json(const analysis::LawReport& report) {
    json j{{"law", report.law},
           {"samples", report.samples},
           {"seed", report.seed},
           {"checked", report.checked},
           {"passed", report.passed}};
    if (!report.failure.empty())
        j["failure"] = report.failure;
    else
        j["failure"] = nullptr;
    return j;
}

json laws_json(const std::vector<analysis::LawReport>& reports) {
    json laws = json::array();
    bool all = true;
    for (const auto& r : reports) {
        laws.push_back(law_json(r));
        all = all && r.passed;
    }
    return json{{"command", "check"}, {"laws", laws}, {"allPassed", all}};
}

json consistency_json(const analysis::ConsistencyReport& report) {
    json j{{"command", "check"},
           {"consistency",
            json{{"entry", report.entry},
                 {"blocksChecked", report.blocks_checked},
                 {"throwTracesChecked", report.throw_traces_checked},
                 {"consistent", report.consistent}}}};
    if (!report.violation.empty())
        j["consistency"]["violation"] = report.violation;
    else
        j["consistency"]["violation"] = nullptr;
    return j;
}

json naming_json(const bpel::NamingTable& naming) {
    json entries = json::array();
    for (const auto& [def, channel] : naming.entries)
        entries.push_back(json{{"default", def}, {"channel", channel}});
    return json{{"command", "translate"}, {"naming", entries}};
}

} // namespace ccsp::reports
