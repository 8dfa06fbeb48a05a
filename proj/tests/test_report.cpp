#include <gtest/gtest.h>

#include <string>

#include "acmlab/report.hpp"

using namespace acmlab;

TEST(Report, OrbitPointReproducesTheStructure) {
    for (const ModelSpec& spec : random_model_specs(12, 4)) {
        const LoadedModel lm = load_model(spec);
        const OrbitPoint p = orbit_point_of(lm.acm);
        EXPECT_LE(max_abs_diff(p.acm.phi, lm.acm.phi), 1e-12) << spec.name;
        EXPECT_LE(max_abs_diff(p.acm.zeta, lm.acm.zeta), 1e-12) << spec.name;
        const Analysis a = analyze(lm.model, lm.acm);
        EXPECT_NEAR(bending(p, lm.model), 0.5 * a.torsion.xi.norm() * a.torsion.xi.norm(), 1e-10) << spec.name;
    }
}

TEST(Report, ModuleInvariantsHoldOnCatalogModels) {
    ReportOptions opt;
    opt.invariants = true;
    for (const std::string& name : catalog_names()) {
        for (int n = 1; n <= 3; ++n) {
            const ModelReport r = build_report(build_catalog_model(name, {{"n", n}}), opt, 3);
            EXPECT_FALSE(r.invariants.empty());
            for (const InvariantCheck& c : r.invariants) EXPECT_TRUE(c.ok) << name << " n=" << n << " " << c.id;
            EXPECT_TRUE(r.ok());
        }
    }
}

TEST(Report, GatingInvariantsHoldOnRandomModels) {
    ReportOptions opt;
    opt.invariants = true;
    const std::vector<ModelSpec> specs = random_model_specs(20, 7);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const ModelReport r = build_report(load_model(specs[i]), opt, i);
        EXPECT_TRUE(r.invariants_ok()) << specs[i].name;
        for (const InvariantCheck& c : r.invariants)
            if (c.id == "bending.homogeneous_gradient_check") {
                EXPECT_TRUE(c.ok) << specs[i].name;
            }
    }
}

TEST(Report, RenderingIsDeterministic) {
    ReportOptions opt;
    opt.invariants = true;
    opt.identities = true;
    std::vector<ModelReport> a, b;
    const std::vector<ModelSpec> specs = random_model_specs(4, 7);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        a.push_back(build_report(load_model(specs[i]), opt, i));
        b.push_back(build_report(load_model(specs[i]), opt, i));
    }
    const std::string ja = render_report("verify", a, opt);
    EXPECT_EQ(ja, render_report("verify", b, opt));
    EXPECT_EQ(summary_table(a), summary_table(b));
    EXPECT_NE(ja.find("\"classification\""), std::string::npos);
    EXPECT_NE(ja.find("\"identities\""), std::string::npos);
    EXPECT_NE(ja.find("\"summary\""), std::string::npos);
}

TEST(Report, IdentityFailuresMakeTheReportFail) {
    ReportOptions opt;
    opt.identities = true;
    const ModelReport flat = build_report(build_catalog_model("flat-cosymplectic", {{"n", 2}}), opt);
    EXPECT_TRUE(flat.ok());
    const ModelReport heis = build_report(build_catalog_model("heisenberg", {{"n", 2}}), opt);
    EXPECT_FALSE(heis.ok());
    EXPECT_NE(render_report("classify", {heis}, opt).find("XI_XI_ZETA_3_TRACE"), std::string::npos);
}

TEST(Report, FlowSectionOnHyperbolic) {
    ReportOptions opt;
    opt.flow = true;
    const ModelReport r = build_report(build_catalog_model("hyperbolic", parse_params("n=2,c=1,k1=0.6,k5=0.8")), opt);
    ASSERT_TRUE(r.has_flow);
    EXPECT_TRUE(r.flow.trace.converged);
    EXPECT_LE(r.flow.trace.final_bending, r.flow.initial_bending);
    EXPECT_TRUE(r.flow.trace.final_harmonic_structure);
    EXPECT_NE(render_report("classify", {r}, opt).find("\"gradient_source\": \"d*xi\""), std::string::npos);
}
