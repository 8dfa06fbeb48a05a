#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "acmlab/catalog.hpp"
#include "acmlab/harmonic.hpp"

using namespace acmlab;

namespace {

bool names(const AcmDiagnostics& d, const std::string& v) {
    return std::find(d.violated.begin(), d.violated.end(), v) != d.violated.end();
}

std::vector<LoadedModel> sample_models() {
    std::vector<LoadedModel> out;
    for (const std::string& name : catalog_names())
        for (int n = 1; n <= 3; ++n) out.push_back(build_catalog_model(name, {{"n", n}}));
    out.push_back(build_catalog_model("hyperbolic", parse_params("n=2,c=1,k1=0.6,k5=0.8")));
    out.push_back(build_catalog_model("hyperbolic", parse_params("n=3,c=2,k1=1,k2=1,k4=1")));
    for (const ModelSpec& s : random_model_specs(36, 9)) out.push_back(load_model(s));
    return out;
}

}  // namespace

TEST(ValidateAcm, StandardAndHyperbolicStructuresPass) {
    const FrameModel m = make_model(2);
    EXPECT_TRUE(validate_acm(m, standard_phi(2), basis_vector(5, 4)).pass);
    const ModelSpec h = catalog_spec("hyperbolic", parse_params("n=2,c=1,k1=0.6,k5=0.8"));
    FrameModel hm = make_model(2);
    hm.c = h.c;
    EXPECT_TRUE(validate_acm(hm, h.phi, h.zeta).pass);
}

TEST(ValidateAcm, ViolationsAreNamed) {
    const FrameModel m = make_model(2);
    Tensor phi = standard_phi(2);
    phi(0, 4) = 0.5;  // phi zeta != 0
    const AcmDiagnostics d = validate_acm(m, phi, basis_vector(5, 4));
    EXPECT_FALSE(d.pass);
    EXPECT_TRUE(names(d, "phi zeta = 0"));

    const AcmDiagnostics z = validate_acm(m, standard_phi(2), 2.0 * basis_vector(5, 4));
    EXPECT_FALSE(z.pass);
    EXPECT_TRUE(names(z, "|zeta| = 1"));
}

TEST(IntrinsicTorsion, VanishesOnFlatCosymplectic) {
    for (int n = 1; n <= 3; ++n) {
        const LoadedModel lm = build_catalog_model("flat-cosymplectic", {{"n", n}});
        EXPECT_EQ(intrinsic_torsion(connection(lm.model), lm.acm).xi.max_abs(), 0.0);
    }
}

TEST(IntrinsicTorsion, StructuralInvariants) {
    for (const LoadedModel& lm : sample_models()) {
        const Connection conn = connection(lm.model);
        const Torsion t = intrinsic_torsion(conn, lm.acm);
        const std::string& name = lm.spec.name;
        // Both displayed formulas, and the independent projection of the
        // Levi-Civita connection form onto the complement of u(n).
        EXPECT_LE(t.formula_agreement, 1e-12) << name;
        EXPECT_LE(max_abs_diff(t.xi, torsion_from_connection(conn.gamma, lm.acm)), 1e-12) << name;
        EXPECT_LE(skew_residual(t.xi), 1e-12) << name;
        EXPECT_LE(membership_residual(t.xi, lm.acm), 1e-10) << name;

        // The minimal connection nabla + xi preserves g, phi (via F) and eta.
        const Tensor u = minimal_connection(conn.gamma, t.xi);
        EXPECT_LE(covariant_derivative(Tensor::identity(lm.model.dim()), u).max_abs(), 1e-10) << name;
        EXPECT_LE(covariant_derivative(lm.acm.F, u).max_abs(), 1e-10) << name;
        EXPECT_LE(covariant_derivative(lm.acm.eta, u).max_abs(), 1e-10) << name;

        // nabla F + xi . F = 0, slot by slot.
        const int D = lm.model.dim();
        for (int x = 0; x < D; ++x) {
            Tensor a(2, D), nf(2, D);
            for (int j = 0; j < D; ++j)
                for (int k = 0; k < D; ++k) {
                    a(j, k) = t.xi(x, j, k);
                    nf(j, k) = t.nabla_F(x, j, k);
                }
            EXPECT_LE((nf + derivation_action(a, lm.acm.F)).max_abs(), 1e-10) << name << " x=" << x;
        }
    }
}

TEST(ScalarInvariants, HyperbolicGeneralK) {
    const LoadedModel lm = build_catalog_model("hyperbolic", parse_params("n=2,c=1,k1=0.6,k5=0.8"));
    const Torsion t = intrinsic_torsion(connection(lm.model), lm.acm);
    const ScalarInvariants s = scalar_invariants(t, lm.acm);
    EXPECT_NEAR(s.d_star_eta, 2 * 2 * 0.6, 1e-12);
    ASSERT_TRUE(s.has_theta);
    // theta = 2 xi_zeta eta on zeta-perp, with (xi_zeta eta)(Y) = -eta(xi_zeta Y).
    const int z = lm.acm.z();
    for (int y = 0; y < z; ++y) EXPECT_NEAR(s.theta(y), -2.0 * t.xi(z, y, z), 1e-12) << y;
}

TEST(ScalarInvariants, HyperbolicKEqualsC) {
    for (int n = 1; n <= 3; ++n) {
        const LoadedModel lm = build_catalog_model("hyperbolic", {{"n", n}, {"c", 1.5}, {"k1", 1.5}});
        const ScalarInvariants s = scalar_invariants(intrinsic_torsion(connection(lm.model), lm.acm), lm.acm);
        EXPECT_NEAR(s.d_star_eta, 2 * n * 1.5, 1e-12);
        EXPECT_EQ(s.has_theta, n > 1);
    }
}

TEST(ScalarInvariants, FlatCosymplecticIsZero) {
    const LoadedModel lm = build_catalog_model("flat-cosymplectic", {{"n", 2}});
    const ScalarInvariants s = scalar_invariants(intrinsic_torsion(connection(lm.model), lm.acm), lm.acm);
    EXPECT_EQ(s.d_star_eta, 0.0);
    EXPECT_EQ(s.d_star_F_zeta, 0.0);
    EXPECT_EQ(s.theta.max_abs(), 0.0);
    EXPECT_EQ(s.trace_vec.max_abs(), 0.0);
}

TEST(ScalarInvariants, LeeAndTraceIdentitiesHold) {
    for (const LoadedModel& lm : sample_models()) {
        const ScalarInvariants s = scalar_invariants(intrinsic_torsion(connection(lm.model), lm.acm), lm.acm);
        const InvariantResiduals r = invariant_residuals(s, lm.acm);
        EXPECT_LE(r.lee, 1e-10) << lm.spec.name;
        EXPECT_LE(r.trace, 1e-10) << lm.spec.name;
        // The phi-trace identity holds with coefficient 1/2 on phi nabla_zeta zeta.
        EXPECT_LE(r.phi_trace_half, 1e-10) << lm.spec.name;
    }
}

TEST(ScalarInvariants, PhiTraceAsDisplayedFailsWhenReebIsNotGeodesic) {
    // Counterexample to the coefficient 1 on phi nabla_zeta zeta: any model
    // with phi nabla_zeta zeta != 0.
    bool found = false;
    for (const LoadedModel& lm : sample_models()) {
        const ScalarInvariants s = scalar_invariants(intrinsic_torsion(connection(lm.model), lm.acm), lm.acm);
        if (s.nabla_zeta_zeta.norm() < 1e-3) continue;
        found = true;
        EXPECT_GT(invariant_residuals(s, lm.acm).phi_trace, 1e-6) << lm.spec.name;
    }
    EXPECT_TRUE(found);
}
