#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "acmlab/report.hpp"

namespace py = pybind11;
using namespace acmlab;

namespace {

py::array_t<double> to_numpy(const Tensor& t) {
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(t.order()), t.dim());
    py::array_t<double> out(shape);
    std::copy(t.data().begin(), t.data().end(), out.mutable_data());
    return out;
}

LoadedModel load(const std::optional<std::string>& catalog, const Params& params,
                 const std::optional<std::string>& spec_json) {
    if (catalog && spec_json) throw ValidationError("model", "give either a catalog name or a spec, not both");
    if (spec_json) return load_model(spec_from_json(*spec_json));
    if (catalog) return load_model(catalog_spec(*catalog, params));
    throw ValidationError("model", "give a catalog name or a spec");
}

py::dict analysis_dict(const Analysis& a) {
    py::dict d;
    d["type"] = a.cls.type_name;
    d["norms"] = std::vector<double>(a.cls.norms.begin(), a.cls.norms.end());
    d["xi_norm"] = a.cls.xi_norm;
    d["xi"] = to_numpy(a.torsion.xi);
    d["phi"] = to_numpy(a.acm.phi);
    d["zeta"] = to_numpy(a.acm.zeta);
    d["d_star_xi"] = to_numpy(a.harm.d_star_xi);
    d["d_star_eta"] = a.inv.d_star_eta;
    d["s_star"] = a.harm.s_star;
    d["harmonic_structure"] = a.harm.harmonic_structure;
    d["harmonic_map"] = a.harm.harmonic_map;
    d["reeb_harmonic"] = a.harm.reeb_harmonic;
    d["laplacian_zeta"] = to_numpy(a.harm.laplacian_zeta);
    d["warnings"] = a.cls.admissibility_warnings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Almost contact metric structures on frame models";

    static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            validation_error(e.what());
        }
    });

    m.def("catalog_names", &catalog_names);
    m.def("identity_ids", &identity_ids);
    m.def("parse_params", &parse_params, py::arg("text"));

    m.def("catalog_spec",
          [](const std::string& name, const Params& params) { return spec_to_json(catalog_spec(name, params)); },
          py::arg("name"), py::arg("params") = Params{}, "Catalog model as a JSON spec.");
    m.def("random_spec", [](std::uint64_t seed, std::size_t index) { return spec_to_json(random_model_spec(seed, index)); },
          py::arg("seed"), py::arg("index"), "Seeded random model as a JSON spec.");

    m.def(
        "analyze",
        [](const std::optional<std::string>& catalog, const Params& params, const std::optional<std::string>& spec,
           double tol) {
            const LoadedModel lm = load(catalog, params, spec);
            return analysis_dict(analyze(lm.model, lm.acm, tol));
        },
        py::arg("catalog") = py::none(), py::arg("params") = Params{}, py::arg("spec") = py::none(),
        py::arg("tol") = 1e-9, "Torsion, classification and harmonicity of one model (normalized frame).");

    m.def(
        "report",
        [](const std::string& command, const std::optional<std::string>& catalog, const Params& params,
           const std::optional<std::string>& spec, std::size_t random, std::uint64_t seed, double tol, bool identities,
           bool flow) {
            ReportOptions opt;
            opt.tol = tol;
            opt.identities = identities || command == "verify";
            opt.invariants = command == "verify";
            opt.flow = flow;
            std::vector<LoadedModel> models;
            if (catalog || spec) models.push_back(load(catalog, params, spec));
            for (const ModelSpec& s : random_model_specs(random, seed)) models.push_back(load_model(s));
            std::vector<ModelReport> reports;
            for (std::size_t i = 0; i < models.size(); ++i)
                reports.push_back(build_report(models[i], opt, seed * 1000003 + i));
            return render_report(command, reports, opt);
        },
        py::arg("command") = "classify", py::arg("catalog") = py::none(), py::arg("params") = Params{},
        py::arg("spec") = py::none(), py::arg("random") = 0, py::arg("seed") = 0, py::arg("tol") = 1e-9,
        py::arg("identities") = false, py::arg("flow") = false, "JSON report, as written by the command-line tool.");

    m.def(
        "minimize_bending",
        [](const std::optional<std::string>& catalog, const Params& params, const std::optional<std::string>& spec,
           std::optional<std::uint64_t> seed, int max_iters) {
            const LoadedModel lm = load(catalog, params, spec);
            const OrbitPoint p0 =
                seed ? orbit_point(lm.acm.n, random_orthogonal(lm.model.dim(), *seed)) : orbit_point_of(lm.acm);
            const double b0 = bending(p0, lm.model);
            const FlowTrace t = minimize_bending(p0, lm.model, max_iters);
            std::vector<double> trace;
            for (const FlowStep& s : t.steps) trace.push_back(s.bending);
            py::dict d;
            d["initial_bending"] = b0;
            d["final_bending"] = t.final_bending;
            d["bending_trace"] = trace;
            d["converged"] = t.converged;
            d["stagnated"] = t.stagnated;
            d["monotone"] = t.monotone;
            d["gradient_source"] = t.gradient_source;
            d["final_d_star_xi_norm"] = t.final_d_star_xi_norm;
            d["final_harmonic_structure"] = t.final_harmonic_structure;
            d["g"] = to_numpy(t.final.g);
            return d;
        },
        py::arg("catalog") = py::none(), py::arg("params") = Params{}, py::arg("spec") = py::none(),
        py::arg("seed") = py::none(), py::arg("max_iters") = 200,
        "Minimize the total bending over structures g phi0 g^T on the model's frame.");
}
