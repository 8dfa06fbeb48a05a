#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "acmlab/catalog.hpp"
#include "acmlab/frame_model.hpp"

using namespace acmlab;

namespace {

FrameModel hyperbolic_model(int n, double c) {
    FrameModel m = make_model(n, "hyperbolic");
    for (int j = 1; j < m.dim(); ++j) {
        m.c(0, j, j) = c;
        m.c(j, 0, j) = -c;
    }
    return m;
}

std::vector<FrameModel> sample_models() {
    std::vector<FrameModel> out;
    for (const std::string& name : catalog_names())
        for (int n = 1; n <= 3; ++n) out.push_back(build_catalog_model(name, {{"n", n}}).model);
    for (const ModelSpec& s : random_model_specs(27, 5)) out.push_back(load_model(s).model);
    return out;
}

}  // namespace

TEST(ValidateModel, CatalogAlgebrasPass) {
    const ModelDiagnostics h = validate_model(hyperbolic_model(2, 1.0));
    EXPECT_TRUE(h.pass);
    EXPECT_EQ(h.jacobi_residual, 0.0);
    EXPECT_EQ(h.antisymmetry_residual, 0.0);
    const ModelDiagnostics a = validate_model(make_model(2));
    EXPECT_TRUE(a.pass);
    EXPECT_EQ(a.jacobi_residual, 0.0);
}

TEST(ValidateModel, RandomSkewCoefficientsViolateJacobi) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd(0.0, 1.0);
    FrameModel m = make_model(2);
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            for (int k = 0; k < 5; ++k) {
                m.c(i, j, k) = nd(rng);
                m.c(j, i, k) = -m.c(i, j, k);
            }
    const ModelDiagnostics d = validate_model(m);
    EXPECT_FALSE(d.pass);
    EXPECT_GT(d.jacobi_residual, 1e-3);
    EXPECT_EQ(d.antisymmetry_residual, 0.0);
}

TEST(LeviCivita, HyperbolicByHand) {
    const Tensor g = levi_civita(hyperbolic_model(2, 1.0));
    for (int j = 1; j < 5; ++j) {
        EXPECT_NEAR(g(j, j, 0), 1.0, 1e-15);   // nabla_{E_j} E_j = E_1
        EXPECT_NEAR(g(j, 0, j), -1.0, 1e-15);  // nabla_{E_j} E_1 = -E_j
    }
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) EXPECT_EQ(g(0, a, b), 0.0);
}

TEST(LeviCivita, AbelianIsFlatAndHeisenbergHasHalf) {
    EXPECT_EQ(levi_civita(make_model(2)).max_abs(), 0.0);
    const LoadedModel h = build_catalog_model("heisenberg", {{"n", 2}});
    const Tensor g = levi_civita(h.model);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(g(2 * i, 2 * i + 1, 4), 0.5, 1e-15);
}

TEST(Curvature, HyperbolicHasConstantCurvatureMinusOne) {
    const Connection c = connection(hyperbolic_model(2, 1.0));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i != j) {
                EXPECT_NEAR(c.riemann(i, j, i, j), -1.0, 1e-14) << i << "," << j;
            }
    EXPECT_NEAR(c.scalar, -20.0, 1e-13);
    EXPECT_LE(c.weyl.max_abs(), 1e-13);
    // c = 2 scales the curvature by c^2.
    EXPECT_NEAR(connection(hyperbolic_model(2, 2.0)).scalar, -80.0, 1e-12);
}

TEST(Curvature, AbelianIsFlat) {
    const Connection c = connection(make_model(3));
    EXPECT_EQ(c.riemann.max_abs(), 0.0);
    EXPECT_EQ(c.scalar, 0.0);
}

TEST(ConnectionData, InvariantsOnSampleModels) {
    for (const FrameModel& m : sample_models()) {
        const int D = m.dim();
        const Connection c = connection(m);
        double metric = 0.0, torsion = 0.0, sym = 0.0;
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j)
                for (int k = 0; k < D; ++k) {
                    metric = std::max(metric, std::fabs(c.gamma(i, j, k) + c.gamma(i, k, j)));
                    torsion = std::max(torsion, std::fabs(c.gamma(i, j, k) - c.gamma(j, i, k) - m.c(i, j, k)));
                    for (int l = 0; l < D; ++l) {
                        const double r = c.riemann(i, j, k, l);
                        sym = std::max({sym, std::fabs(r + c.riemann(j, i, k, l)), std::fabs(r + c.riemann(i, j, l, k)),
                                        std::fabs(r - c.riemann(k, l, i, j))});
                    }
                }
        EXPECT_LE(metric, 1e-10) << m.label;
        EXPECT_LE(torsion, 1e-10) << m.label;
        EXPECT_LE(sym, 1e-10) << m.label;
        EXPECT_LE(first_bianchi_residual(c.riemann), 1e-10) << m.label;
        EXPECT_LE(second_bianchi_residual(c), 1e-9) << m.label;
    }
}

TEST(CovariantDerivative, MetricIsParallel) {
    for (const FrameModel& m : sample_models()) {
        const Tensor dg = covariant_derivative(Tensor::identity(m.dim()), levi_civita(m));
        EXPECT_EQ(dg.order(), 3);
        EXPECT_LE(dg.max_abs(), 1e-13) << m.label;
    }
}

TEST(FrameChange, ConnectionAndCurvatureAreEquivariant) {
    for (const FrameModel& m : sample_models()) {
        const Tensor g = random_orthogonal(m.dim(), 17);
        const FrameModel mg = transform_model(m, g);
        EXPECT_TRUE(validate_model(mg).pass);
        const Connection c = connection(m);
        const Connection cg = connection(mg);
        EXPECT_LE(max_abs_diff(cg.gamma, transform_tensor(c.gamma, g)), 1e-12) << m.label;
        EXPECT_LE(max_abs_diff(cg.riemann, transform_tensor(c.riemann, g)), 1e-11) << m.label;
        EXPECT_NEAR(cg.scalar, c.scalar, 1e-11);
        EXPECT_NEAR(cg.riemann.norm(), c.riemann.norm(), 1e-11);
        EXPECT_NEAR(cg.weyl.norm(), c.weyl.norm(), 1e-11);
    }
}
