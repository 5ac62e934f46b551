#ifndef CCSP_REPORTS_HPP
#define CCSP_REPORTS_HPP

#include "ccsp/analyzer.hpp"

#include <json.hpp>

namespace ccsp::reports {

// JSON shapes are documented in docs/reports.md. Keys serialize in sorted
// order and no volatile data (timings) is included, so identical inputs
// produce byte-identical reports.

nlohmann::json trace_json(const CompletedTrace& t);
nlohmann::json bounds_json(const Bounds& b);
nlohmann::json enumeration_json(const std::string& entry,
                                const analysis::EnumerationResult& result,
                                const Bounds& bounds);
nlohmann::json equivalence_json(const analysis::EquivalenceVerdict& verdict);
nlohmann::json law_json(const analysis::LawReport& report);
nlohmann::json laws_json(const std::vector<analysis::LawReport>& reports);
nlohmann::json consistency_json(const analysis::ConsistencyReport& report);
nlohmann::json naming_json(const bpel::NamingTable& naming);

} // namespace ccsp::reports

#endif
