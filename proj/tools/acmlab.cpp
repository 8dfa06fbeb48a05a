// Command-line front end: classify | verify | flow | catalog-list.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input (the
// offending field path is printed), 3 identity-suite failure under --strict.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acmlab/report.hpp"

using namespace acmlab;

namespace {

struct ModelArgs {
    std::string model_file;
    std::string catalog;
    std::string params;
};

struct CommonArgs {
    ModelArgs model;
    std::optional<double> tol;
    std::string out;
    bool with_identities = false;
    bool with_flow = false;
    bool strict = false;
    std::size_t random = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_model_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--model", a.model.model_file, "JSON model file");
    cmd->add_option("--catalog", a.model.catalog, "catalog model name (see catalog-list)");
    cmd->add_option("--params", a.model.params, "catalog parameters, e.g. n=2,c=1,k1=0.6");
    cmd->add_option("--tol", a.tol, "classification tolerance (default 1e-9, or ACMLAB_TOL)");
    cmd->add_option("--out", a.out, "write the JSON report here instead of stdout");
}

double default_tol() {
    if (const char* env = std::getenv("ACMLAB_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0)) throw ValidationError("ACMLAB_TOL", "expected a positive number");
        return v;
    }
    return 1e-9;
}

std::vector<LoadedModel> load_models(const ModelArgs& m, bool default_catalog) {
    std::vector<LoadedModel> out;
    if (!m.model_file.empty() && !m.catalog.empty())
        throw ValidationError("--model", "give either --model or --catalog, not both");
    if (!m.model_file.empty()) {
        out.push_back(load_model(read_spec_file(m.model_file)));
    } else if (!m.catalog.empty()) {
        out.push_back(load_model(catalog_spec(m.catalog, parse_params(m.params))));
    } else if (default_catalog) {
        for (const std::string& name : catalog_names()) out.push_back(load_model(catalog_spec(name, {})));
    }
    return out;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    // Write to a sibling temporary and rename, so readers never see a partial file.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw ValidationError("--out", "cannot open " + path);
        f << text;
    }
    std::filesystem::rename(tmp, path);
}

int run_classify(const CommonArgs& a) {
    ReportOptions opt;
    opt.tol = a.tol.value_or(default_tol());
    opt.identities = a.with_identities || a.strict;
    opt.flow = a.with_flow;
    const std::vector<LoadedModel> models = load_models(a.model, false);
    if (models.empty()) throw ValidationError("--model", "give --model FILE or --catalog NAME");
    std::vector<ModelReport> reports{build_report(models.front(), opt)};
    emit(render_report("classify", reports, opt), a.out);
    if (a.strict && reports.front().has_suite && !reports.front().suite.ok()) return 3;
    return 0;
}

int run_verify(const CommonArgs& a) {
    ReportOptions opt;
    opt.tol = a.tol.value_or(default_tol());
    opt.identities = true;
    opt.invariants = true;
    opt.flow = a.with_flow;
    std::vector<LoadedModel> models = load_models(a.model, a.random == 0);
    for (const ModelSpec& s : random_model_specs(a.random, a.seed)) models.push_back(load_model(s));
    std::vector<ModelReport> reports;
    for (std::size_t i = 0; i < models.size(); ++i) reports.push_back(build_report(models[i], opt, a.seed * 1000003 + i));
    emit(render_report("verify", reports, opt), a.out);
    (a.out.empty() ? std::cerr : std::cout) << summary_table(reports);

    bool suite_failed = false;
    bool any_failed = false;
    for (const ModelReport& r : reports) {
        suite_failed = suite_failed || !r.suite.ok();
        any_failed = any_failed || !r.ok();
    }
    if (a.strict && suite_failed) return 3;
    return any_failed ? 1 : 0;
}

int run_flow(const CommonArgs& a) {
    ReportOptions opt;
    opt.tol = a.tol.value_or(default_tol());
    const std::vector<LoadedModel> models = load_models(a.model, false);
    if (models.empty()) throw ValidationError("--model", "give --model FILE or --catalog NAME");
    const LoadedModel& lm = models.front();
    ModelReport r = build_report(lm, opt);
    // Start from the model's own structure, or from a seeded random one.
    const OrbitPoint p = a.seed_given ? orbit_point(lm.acm.n, random_orthogonal(lm.model.dim(), a.seed))
                                      : orbit_point_of(lm.acm);
    r.has_flow = true;
    r.flow.initial_bending = bending(p, lm.model);
    r.flow.trace = minimize_bending(p, lm.model, opt.flow_iters);
    emit(render_report("flow", {r}, opt), a.out);
    return r.flow.trace.converged ? 0 : 1;
}

int run_catalog_list() {
    std::cout << "flat-cosymplectic  params: n (default 1)    abelian algebra, cosymplectic structure\n"
              << "heisenberg         params: n (default 1)    [x_i, y_i] = z, phi x_i = y_i, zeta = z\n"
              << "hyperbolic         params: n (default 2), c (default 1), k1..k{2n+1} with sum k_i^2 = c^2\n"
              << "                   [E_1, E_j] = c E_j, zeta = sum (k_i / c) E_i\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Almost contact metric structures on frame models"};
    app.require_subcommand(1);
    CommonArgs a;

    CLI::App* classify = app.add_subcommand("classify", "classify one model and write its report");
    add_model_flags(classify, a);
    classify->add_flag("--with-identities", a.with_identities, "evaluate the identity suite");
    classify->add_flag("--with-flow", a.with_flow, "run the bending flow from the model's structure");
    classify->add_flag("--strict", a.strict, "exit 3 when an identity fails");

    CLI::App* verify = app.add_subcommand("verify", "run the identity suite and module invariants");
    add_model_flags(verify, a);
    verify->add_option("--random", a.random, "add K seeded random models");
    verify->add_option("--seed", a.seed, "seed for --random");
    verify->add_flag("--with-flow", a.with_flow, "run the bending flow on every model");
    verify->add_flag("--strict", a.strict, "exit 3 when an identity fails");

    CLI::App* flow = app.add_subcommand("flow", "minimize the total bending over compatible structures");
    add_model_flags(flow, a);
    flow->add_option("--seed", a.seed, "start from a seeded random structure");

    CLI::App* list = app.add_subcommand("catalog-list", "list the catalog models");

    CLI11_PARSE(app, argc, argv);
    a.seed_given = flow->count("--seed") > 0;

    try {
        if (*classify) return run_classify(a);
        if (*verify) return run_verify(a);
        if (*flow) return run_flow(a);
        if (*list) return run_catalog_list();
    } catch (const ValidationError& e) {
        std::cerr << "validation error at " << e.path() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
