#include "ccsp/analyzer.hpp"
#include "ccsp/bpel.hpp"
#include "ccsp/dsl.hpp"
#include "ccsp/reports.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

using namespace ccsp;

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
        return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
        return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
        py::list out;
        for (const auto& item : j) out.append(json_to_py(item));
        return out;
    }
    case nlohmann::json::value_t::object: {
        py::dict out;
        for (auto it = j.begin(); it != j.end(); ++it)
            out[py::str(it.key())] = json_to_py(it.value());
        return out;
    }
    default: return py::none();
    }
}

std::vector<Atom> atoms_from(const py::sequence& seq) {
    std::vector<Atom> atoms;
    for (const py::handle& h : seq) {
        if (py::isinstance<py::int_>(h))
            atoms.push_back(Atom::integer(h.cast<std::int64_t>()));
        else
            atoms.push_back(Atom::ident(h.cast<std::string>()));
    }
    return atoms;
}

Model parse_or_throw(const std::string& text) {
    dsl::ParseResult result = dsl::parse_model(text);
    if (!result.ok()) throw py::value_error(render_diagnostics(result.diagnostics));
    return *result.model;
}

Bounds make_bounds(std::size_t max_events, std::size_t max_traces) {
    return Bounds{max_events, max_traces};
}

struct TranslatedDoc {
    Model model;
    std::string entry;
    bpel::NamingTable naming;
};

TranslatedDoc translate_or_throw(const std::string& xml,
                                 const std::map<std::string, std::string>& aliases) {
    bpel::BpelParseResult parsed = bpel::parse_bpel(xml);
    if (!parsed.ok()) throw py::value_error(render_diagnostics(parsed.diagnostics));
    std::vector<Diagnostic> warnings;
    bpel::NamingTable naming =
        bpel::apply_aliases(bpel::default_naming(*parsed.root), aliases, warnings);
    bpel::TranslateResult translated = bpel::translate(*parsed.root, naming);
    if (!translated.ok())
        throw py::value_error(render_diagnostics(translated.diagnostics));
    return {*translated.model, translated.entry, naming};
}

} // namespace

PYBIND11_MODULE(_ccsp, m) {
    m.doc() = "Bounded trace semantics for compensating-CSP models";

    py::class_<Model>(m, "Model")
        .def("__repr__",
             [](const Model& model) {
                 return "<ccsp model: " +
                        std::to_string(model.standard_defs.size() +
                                       model.compensable_defs.size()) +
                        " definition(s)>";
             })
        .def("definitions", [](const Model& model) {
            py::list names;
            for (const auto& [name, _] : model.standard_defs) names.append(name);
            for (const auto& [name, _] : model.compensable_defs) names.append(name);
            return names;
        });

    m.def("parse_model", &parse_or_throw, py::arg("text"),
          "Parse model source text; raises ValueError with diagnostics.");

    m.def(
        "print_model", [](const Model& model) { return dsl::print_model(model); },
        py::arg("model"), "Canonical source text that re-parses to the same model.");

    m.def(
        "enumerate_traces",
        [](const Model& model, const std::string& entry, const py::sequence& args,
           std::size_t max_events, std::size_t max_traces) {
            try {
                const Bounds bounds = make_bounds(max_events, max_traces);
                analysis::EnumerationResult result =
                    analysis::enumerate_entry(model, entry, atoms_from(args), bounds);
                return json_to_py(reports::enumeration_json(entry, result, bounds));
            } catch (const EvalError& e) {
                throw py::value_error(e.what());
            }
        },
        py::arg("model"), py::arg("entry"), py::arg("args") = py::tuple(),
        py::arg("max_events") = Bounds{}.max_events,
        py::arg("max_traces") = Bounds{}.max_traces,
        "Enumerate the bounded trace set of an entry definition.");

    m.def(
        "compare",
        [](const Model& m1, const std::string& e1, const Model& m2,
           const std::string& e2, const py::sequence& args1, const py::sequence& args2,
           const std::map<std::string, std::string>& renaming, std::size_t max_events,
           std::size_t max_traces) {
            try {
                analysis::ChannelRenaming ren(renaming.begin(), renaming.end());
                analysis::EquivalenceVerdict verdict = analysis::check_equivalence(
                    m1, e1, atoms_from(args1), m2, e2, atoms_from(args2),
                    make_bounds(max_events, max_traces), ren);
                return json_to_py(reports::equivalence_json(verdict));
            } catch (const EvalError& e) {
                throw py::value_error(e.what());
            }
        },
        py::arg("model1"), py::arg("entry1"), py::arg("model2"), py::arg("entry2"),
        py::arg("args1") = py::tuple(), py::arg("args2") = py::tuple(),
        py::arg("renaming") = std::map<std::string, std::string>{},
        py::arg("max_events") = Bounds{}.max_events,
        py::arg("max_traces") = Bounds{}.max_traces,
        "Trace-set equality of two entries, renaming side 2's channels first.");

    m.def("law_registry", [] {
        py::list laws;
        for (const std::string& law : analysis::law_registry()) laws.append(law);
        return laws;
    });

    m.def(
        "check_law",
        [](const std::string& law, std::size_t samples, std::uint64_t seed) {
            try {
                return json_to_py(
                    reports::law_json(analysis::check_law(law, samples, seed)));
            } catch (const EvalError& e) {
                throw py::value_error(e.what());
            }
        },
        py::arg("law"), py::arg("samples") = 200, py::arg("seed") = 42,
        "Check one algebraic law over seeded random instances.");

    m.def(
        "check_compensation",
        [](const Model& model, const std::string& entry, const py::sequence& args,
           std::size_t max_events, std::size_t max_traces) {
            try {
                return json_to_py(reports::consistency_json(
                    analysis::check_compensation_consistency(
                        model, entry, atoms_from(args),
                        make_bounds(max_events, max_traces))));
            } catch (const EvalError& e) {
                throw py::value_error(e.what());
            }
        },
        py::arg("model"), py::arg("entry"), py::arg("args") = py::tuple(),
        py::arg("max_events") = Bounds{}.max_events,
        py::arg("max_traces") = Bounds{}.max_traces,
        "Verify compensation ordering for every transaction block under an entry.");

    m.def(
        "translate_bpel",
        [](const std::string& xml, const std::map<std::string, std::string>& aliases) {
            TranslatedDoc doc = translate_or_throw(xml, aliases);
            py::list naming;
            for (const auto& [def, channel] : doc.naming.entries)
                naming.append(py::make_tuple(def, channel));
            return py::make_tuple(doc.model, doc.entry, naming);
        },
        py::arg("xml"), py::arg("aliases") = std::map<std::string, std::string>{},
        "Translate a workflow document; returns (model, entry, naming table).");
}
