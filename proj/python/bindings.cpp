#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "mcdc/bench.hpp"
#include "mcdc/cbr.hpp"
#include "mcdc/error.hpp"
#include "mcdc/model.hpp"
#include "mcdc/ocl.hpp"
#include "mcdc/ranges.hpp"
#include "mcdc/reformulate.hpp"
#include "mcdc/search.hpp"
#include "mcdc/stats.hpp"

namespace py = pybind11;
using namespace mcdc;

namespace {

struct PyModel {
    std::shared_ptr<const ClassModel> model;
};

struct PyConstraint {
    std::shared_ptr<const ClassModel> model;
    ocl::OclConstraint constraint;
};

struct PyVariant {
    std::shared_ptr<const ClassModel> model;
    ocl::OclConstraint constraint;
    McdcVariant variant;
};

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict solve(const PyVariant& v, const std::string& mode, std::size_t budget, std::uint64_t seed, unsigned sf,
               bool trace) {
    SearchSpace space(*v.model, v.variant);
    SolveSettings s;
    s.mode = parse_mode(mode);
    s.budget = budget;
    s.scaling = sf;
    s.seed = seed;
    s.record_trace = trace;
    SearchResult r;
    {
        py::gil_scoped_release release;
        r = solve_variant(space, v.variant, s);
    }
    py::dict out;
    out["status"] = std::string(status_name(r.status));
    out["iterations"] = r.iterations;
    out["best_fitness"] = r.best_fitness;
    out["configuration"] = to_python(configuration_to_json(r.cfg));
    if (trace) out["trace"] = r.trace;
    return out;
}

std::string bench(const PyModel& m, const std::string& constraints, const std::string& modes, std::size_t reps,
                  std::size_t budget, std::uint64_t base_seed, unsigned threads) {
    auto cs = ocl::parse(constraints, *m.model);
    CampaignOptions opt;
    opt.modes = parse_modes(modes);
    opt.reps = reps;
    opt.budget = budget;
    opt.base_seed = base_seed;
    opt.threads = threads;
    Campaign camp;
    {
        py::gil_scoped_release release;
        camp = run_campaign(*m.model, cs, opt);
    }
    std::ostringstream out;
    write_csv(out, camp.records);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "MC/DC test data generation for OCL constraints";

    auto base = py::register_exception<Error>(m, "McdcError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<SemanticError>(m, "SemanticError", base.ptr());
    py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
    py::register_exception<ReformulationError>(m, "ReformulationError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::class_<PyModel>(m, "Model")
        .def_static("load", [](const std::string& path) { return PyModel{std::make_shared<ClassModel>(load_model(path))}; })
        .def_static("from_json", [](const std::string& text) { return PyModel{std::make_shared<ClassModel>(parse_model(text))}; })
        .def_property_readonly("classes", [](const PyModel& pm) {
            std::vector<std::string> names;
            for (const auto& c : pm.model->classes()) names.push_back(c.name);
            return names;
        })
        .def("instantiate", [](const PyModel& pm, const std::string& context) {
            if (!pm.model->find_class(context)) throw SemanticError("unknown context class '" + context + "'");
            return to_python(configuration_to_json(instantiate_default(*pm.model, context)));
        });

    py::class_<PyConstraint>(m, "Constraint")
        .def_property_readonly("id", [](const PyConstraint& c) { return c.constraint.id; })
        .def_property_readonly("context", [](const PyConstraint& c) { return c.constraint.context; })
        .def_property_readonly("clause_count", [](const PyConstraint& c) { return c.constraint.clause_count; })
        .def_property_readonly("clauses", [](const PyConstraint& c) {
            std::vector<std::string> out;
            for (const auto& cl : ocl::extract_clauses(c.constraint)) out.push_back(ocl::render(cl.expr));
            return out;
        })
        .def("__repr__", [](const PyConstraint& c) { return "<Constraint " + c.constraint.id + ">"; });

    py::class_<PyVariant>(m, "Variant")
        .def_property_readonly("origin", [](const PyVariant& v) { return v.variant.origin; })
        .def_property_readonly("combination", [](const PyVariant& v) { return combination_label(v.variant.combination); })
        .def_property_readonly("ocl", [](const PyVariant& v) { return ocl::render(v.constraint, v.variant.expr); })
        .def_property_readonly("groups", [](const PyVariant& v) { return v.variant.dependent_groups; })
        .def("__repr__", [](const PyVariant& v) {
            return "<Variant " + v.variant.origin + " " + combination_label(v.variant.combination) + ">";
        });

    m.def("parse", [](const std::string& text, const PyModel& pm) {
        std::vector<PyConstraint> out;
        for (auto& c : ocl::parse(text, *pm.model)) out.push_back({pm.model, std::move(c)});
        return out;
    }, py::arg("text"), py::arg("model"));

    m.def("reformulate", [](const PyConstraint& c) {
        std::vector<PyVariant> out;
        for (auto& v : reformulate(c.constraint)) out.push_back({c.model, c.constraint, std::move(v)});
        return out;
    }, py::arg("constraint"));

    m.def("variant", [](const PyConstraint& c, const std::string& combination) {
        return PyVariant{c.model, c.constraint, make_variant(c.constraint, parse_combination(combination))};
    }, py::arg("constraint"), py::arg("combination"));

    m.def("solve", &solve, py::arg("variant"), py::arg("mode") = "avmo", py::arg("budget") = 2000,
          py::arg("seed") = 0, py::arg("sf") = 1, py::arg("trace") = false);

    m.def("similarity", [](const PyVariant& a, const PyVariant& b) {
        return similarity(normalized_clauses(a.variant), normalized_clauses(b.variant));
    });

    m.def("reduce_ranges", [](const PyVariant& v, unsigned sf, std::uint64_t seed) {
        return to_python(reduce_ranges(v.variant, sf, seed).to_json());
    }, py::arg("variant"), py::arg("sf") = 1, py::arg("seed") = 0);

    m.def("fisher_exact", [](std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
        auto r = stats::fisher_exact_2x2(a, b, c, d);
        return py::make_tuple(r.p_value, r.odds_ratio);
    });
    m.def("a12", &stats::vargha_delaney_a12, py::arg("xs"), py::arg("ys"));
    m.def("wilcoxon", &stats::wilcoxon_rank_sum, py::arg("xs"), py::arg("ys"));

    m.def("bench", &bench, py::arg("model"), py::arg("constraints"), py::arg("modes") = "avmo,avmc,avmr,avmrc,rs",
          py::arg("reps") = 30, py::arg("budget") = 2000, py::arg("base_seed") = 42, py::arg("threads") = 0,
          "Runs a campaign and returns the trial CSV.");
}
