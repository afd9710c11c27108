// Python module: thin wrappers that pass text in and JSON text out. The
// package's __init__.py decodes the JSON.

#include "plexplain/abstraction.h"
#include "plexplain/advice.h"
#include "plexplain/errors.h"
#include "plexplain/explain.h"
#include "plexplain/landmarks.h"
#include "plexplain/pddl.h"
#include "plexplain/search.h"

#include <json.hpp>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace std;
using namespace plexplain;
using json = nlohmann::json;

namespace {
SearchLimits limits_from(uint64_t nodes, double seconds) {
    SearchLimits limits;
    limits.max_expansions = nodes;
    limits.max_time = chrono::duration<double>(seconds);
    return limits;
}

optional<ConstraintFSA> advice_of(const optional<string> &text, const PlanningModel &m) {
    if (!text)
        return nullopt;
    return parse_advice(*text, m).fsa;
}

ExemplarMode exemplar_mode(const string &name) {
    if (name == "auto")
        return ExemplarMode::automatic;
    if (name == "always")
        return ExemplarMode::always;
    if (name == "never")
        return ExemplarMode::never;
    throw InputError("exemplar must be auto, always or never");
}

string check(const PlanningModel &m, const optional<string> &advice, uint64_t nodes,
             double seconds) {
    SearchLimits limits = limits_from(nodes, seconds);
    optional<ConstraintFSA> fsa = advice_of(advice, m);
    SearchResult r;
    Plan plan;
    {
        py::gil_scoped_release release;
        if (fsa) {
            ConstrainedModel cm = compose(m, *fsa);
            r = decide_solvable(cm.compiled, limits);
            if (r.solvable())
                plan = strip_meta(cm, r.plan);
        } else {
            r = decide_solvable(m, limits);
            plan = r.plan;
        }
    }
    json out = {{"outcome", to_string(r.outcome)}, {"expansions", r.expansions}};
    if (r.solvable())
        out["plan"] = plan.actions;
    if (r.exhausted())
        out["limit"] = r.limit;
    return out.dump();
}

Explanation run_explain(const PlanningModel &m, const string &lattice,
                        const optional<string> &advice, const string &exemplar, uint64_t nodes,
                        double seconds) {
    LatticeSpec spec = parse_lattice_spec(lattice);
    optional<ConstraintFSA> fsa = advice_of(advice, m);
    ExplainOptions options;
    options.limits = limits_from(nodes, seconds);
    options.exemplar = exemplar_mode(exemplar);
    py::gil_scoped_release release;
    return explain(m, spec, fsa, options);
}
}

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Unsolvability explanations for grounded planning models";

    py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
    py::register_exception<PreconditionError>(mod, "PreconditionError", PyExc_ValueError);
    py::register_exception<ResourceExhausted>(mod, "ResourceExhausted", PyExc_RuntimeError);
    py::register_exception<NoExplanation>(mod, "NoExplanation", PyExc_RuntimeError);

    py::class_<PlanningModel>(mod, "Model")
        .def_property_readonly("num_fluents", &PlanningModel::num_fluents)
        .def_property_readonly("fluents",
                               [](const PlanningModel &m) {
                                   vector<string> names;
                                   for (FluentId id : m.fluents().to_vector())
                                       names.push_back(m.name(id));
                                   return names;
                               })
        .def_property_readonly("actions",
                               [](const PlanningModel &m) {
                                   vector<string> names;
                                   for (const Action &a : m.actions())
                                       names.push_back(a.name);
                                   return names;
                               })
        .def_property_readonly("init",
                               [](const PlanningModel &m) {
                                   vector<string> names;
                                   for (FluentId id : m.init().to_vector())
                                       names.push_back(m.name(id));
                                   return names;
                               })
        .def_property_readonly("goal",
                               [](const PlanningModel &m) {
                                   vector<string> names;
                                   for (FluentId id : m.goal())
                                       names.push_back(m.name(id));
                                   return names;
                               })
        .def("validate",
             [](const PlanningModel &m, const vector<string> &plan) {
                 return validate_plan(m, Plan{plan}).valid();
             },
             py::arg("plan"))
        .def("__repr__", [](const PlanningModel &m) {
            return "<Model " + std::to_string(m.num_fluents()) + " fluents, " +
                   std::to_string(m.actions().size()) + " actions>";
        });

    const uint64_t default_nodes = SearchLimits{}.max_expansions;
    const double default_seconds = SearchLimits{}.max_time.count();

    mod.def("load_model", &load_model, py::arg("domain"), py::arg("problem"),
            "Parse and ground PDDL domain and problem text.");
    mod.def("check", &check, py::arg("model"), py::arg("advice") = nullopt,
            py::arg("node_budget") = default_nodes, py::arg("time_budget") = default_seconds,
            "Decide solvability; returns JSON text.");
    mod.def("explain_json",
            [](const PlanningModel &m, const string &lattice, const optional<string> &advice,
               const string &exemplar, uint64_t nodes, double seconds) {
                return render_json(run_explain(m, lattice, advice, exemplar, nodes, seconds));
            },
            py::arg("model"), py::arg("lattice"), py::arg("advice") = nullopt,
            py::arg("exemplar") = "auto", py::arg("node_budget") = default_nodes,
            py::arg("time_budget") = default_seconds);
    mod.def("explain_text",
            [](const PlanningModel &m, const string &lattice, const optional<string> &advice,
               const string &exemplar, uint64_t nodes, double seconds) {
                return render_human(run_explain(m, lattice, advice, exemplar, nodes, seconds));
            },
            py::arg("model"), py::arg("lattice"), py::arg("advice") = nullopt,
            py::arg("exemplar") = "auto", py::arg("node_budget") = default_nodes,
            py::arg("time_budget") = default_seconds);
    mod.def("landmarks_json",
            [](const PlanningModel &m) {
                return render_landmarks_json(extract_landmarks(m), m.table());
            },
            py::arg("model"));
    mod.def("compile_advice",
            [](const PlanningModel &m, const string &advice) {
                ConstrainedModel cm = compose(m, parse_advice(advice, m).fsa);
                PddlText text = write_pddl(cm.compiled, "constrained");
                return py::make_tuple(text.domain, text.problem);
            },
            py::arg("model"), py::arg("advice"),
            "Constrained model as (domain, problem) PDDL text.");
    mod.def("lattice",
            [](const PlanningModel &m, const string &lattice) {
                LatticeSpec spec = parse_lattice_spec(lattice);
                AbstractionLattice lat(m, resolve_groups(spec, m), spec.forbidden);
                py::list rows;
                for (GroupMask mask = 0; mask <= lat.full_mask(); ++mask) {
                    if (!lat.admissible(mask))
                        continue;
                    const LatticeNode &node = lat.node(mask);
                    bool solvable;
                    {
                        py::gil_scoped_release release;
                        solvable = lat.solvable(node);
                    }
                    py::dict row;
                    row["projected"] = node.projected();
                    row["fluents"] = node.model().num_fluents();
                    row["solvable"] = solvable;
                    rows.append(row);
                }
                return rows;
            },
            py::arg("model"), py::arg("lattice"));
}
