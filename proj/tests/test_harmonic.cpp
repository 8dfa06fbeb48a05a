#include <gtest/gtest.h>

#include <cmath>

#include "acmlab/catalog.hpp"
#include "acmlab/harmonic.hpp"

using namespace acmlab;

namespace {

Analysis catalog(const std::string& name, const std::string& params) {
    const LoadedModel lm = build_catalog_model(name, parse_params(params));
    return analyze(lm.model, lm.acm);
}

std::vector<Analysis> sample_analyses() {
    std::vector<Analysis> out;
    for (const std::string& name : catalog_names())
        for (int n = 1; n <= 3; ++n) out.push_back(catalog(name, "n=" + std::to_string(n)));
    out.push_back(catalog("hyperbolic", "n=2,c=1,k1=0.6,k5=0.8"));
    out.push_back(catalog("hyperbolic", "n=2,c=1,k5=1"));
    for (const ModelSpec& s : random_model_specs(45, 13)) {
        const LoadedModel lm = load_model(s);
        out.push_back(analyze(lm.model, lm.acm));
    }
    return out;
}

}  // namespace

TEST(CoderivativeTorsion, CatalogValues) {
    EXPECT_EQ(catalog("flat-cosymplectic", "n=2").harm.d_star_xi.max_abs(), 0.0);
    EXPECT_LE(catalog("hyperbolic", "n=2,c=1,k5=1").harm.d_star_xi_norm, 1e-12);
    EXPECT_GT(catalog("hyperbolic", "n=2,c=1,k1=0.6,k5=0.8").harm.d_star_xi_norm, 1e-2);
}

TEST(CoderivativeTorsion, BothFormulasAgree) {
    for (const Analysis& a : sample_analyses()) EXPECT_LE(a.harm.d_star_xi_agreement, 1e-10) << a.model.label;
}

TEST(HarmonicStructure, CatalogVerdicts) {
    EXPECT_TRUE(catalog("hyperbolic", "n=2,c=1,k1=1").harm.harmonic_structure);
    EXPECT_TRUE(catalog("hyperbolic", "n=2,c=1,k5=1").harm.harmonic_structure);
    EXPECT_FALSE(catalog("hyperbolic", "n=2,c=1,k1=0.6,k5=0.8").harm.harmonic_structure);
    EXPECT_TRUE(catalog("heisenberg", "n=1").harm.harmonic_structure);
    EXPECT_TRUE(catalog("heisenberg", "n=2").harm.harmonic_structure);
    EXPECT_TRUE(catalog("flat-cosymplectic", "n=1").harm.harmonic_structure);
}

TEST(StarRicci, HyperbolicIsAcEinstein) {
    for (const std::string p : {"n=2,c=1,k1=0.6,k5=0.8", "n=2,c=1,k5=1", "n=2,c=1,k1=1"}) {
        const HarmonicityReport h = catalog("hyperbolic", p).harm;
        EXPECT_NEAR(h.s_star, -4.0, 1e-9) << p;
        EXPECT_TRUE(h.weakly_ac_einstein) << p;
        EXPECT_LE(h.ric_star_alt.max_abs(), 1e-9) << p;
        EXPECT_LE(h.ric_star_zeta.max_abs(), 1e-9) << p;
    }
    EXPECT_NEAR(catalog("hyperbolic", "n=3,c=2,k1=2").harm.s_star, -2 * 3 * 4.0, 1e-9);
}

TEST(StarRicci, FlatIsZero) {
    const HarmonicityReport h = catalog("flat-cosymplectic", "n=2").harm;
    EXPECT_EQ(h.ric_star.max_abs(), 0.0);
    EXPECT_EQ(h.s_star, 0.0);
}

TEST(StarRicci, StructuralInvariants) {
    for (const Analysis& a : sample_analyses()) {
        const int D = a.model.dim();
        const int z = a.acm.z();
        const Tensor& r = a.harm.ric_star;
        const Tensor rp = pullback(r, a.acm.phi);  // Ric*(phi X, phi Y)
        for (int x = 0; x < D; ++x) {
            EXPECT_LE(std::fabs(r(x, z)), 1e-10) << a.model.label;
            for (int y = 0; y < z; ++y)
                if (x < z) {
                    EXPECT_NEAR(rp(x, y), r(y, x), 1e-10) << a.model.label;
                }
        }
    }
}

TEST(StarRicci, ConformallyFlatKillsAltAndZetaParts) {
    for (const Analysis& a : sample_analyses()) {
        if (a.model.n < 2 || a.conn.weyl.max_abs() > 1e-10) continue;
        const int z = a.acm.z();
        for (int x = 0; x < z; ++x)
            for (int y = 0; y < z; ++y) EXPECT_LE(std::fabs(a.harm.ric_star_alt(x, y)), 1e-9) << a.model.label;
        EXPECT_LE(a.harm.ric_star_zeta.max_abs(), 1e-9) << a.model.label;
    }
}

TEST(HarmonicMap, CatalogVerdicts) {
    const Analysis a = catalog("hyperbolic", "n=2,c=1,k5=1");
    EXPECT_TRUE(a.harm.harmonic_structure);
    EXPECT_GT(a.harm.nu_norm, 1e-3);
    EXPECT_FALSE(a.harm.harmonic_map);
    EXPECT_FALSE(catalog("hyperbolic", "n=2,c=1,k1=1").harm.harmonic_map);
    EXPECT_TRUE(catalog("flat-cosymplectic", "n=2").harm.harmonic_map);
}

TEST(HarmonicMap, HyperbolicDimensionThreeNu) {
    // nu = -2 c^2 xi_zeta eta with (xi_zeta eta)(Y) = -eta(xi_zeta Y).
    const double c = 1.5;
    const Analysis a = catalog("hyperbolic", "n=1,c=1.5,k3=1.5");
    EXPECT_FALSE(a.harm.harmonic_map);
    const int z = a.acm.z();
    double xn = 0.0;
    for (int y = 0; y < a.model.dim(); ++y) {
        const double xi_zeta_eta = -a.torsion.xi(z, y, z);
        xn = std::max(xn, std::fabs(xi_zeta_eta));
        EXPECT_NEAR(a.harm.nu(y), -2.0 * c * c * xi_zeta_eta, 1e-10) << y;
    }
    EXPECT_GT(xn, 0.1);
}

TEST(ReebHarmonicity, HyperbolicLaplacians) {
    {
        const Analysis a = catalog("hyperbolic", "n=2,c=1,k5=1");
        EXPECT_LE(max_abs_diff(a.harm.laplacian_zeta, a.acm.zeta), 1e-9);
        EXPECT_TRUE(a.harm.reeb_harmonic);
    }
    {
        const Analysis a = catalog("hyperbolic", "n=2,c=1,k1=1");
        EXPECT_LE(max_abs_diff(a.harm.laplacian_zeta, 4.0 * a.acm.zeta), 1e-9);
        EXPECT_TRUE(a.harm.reeb_harmonic);
    }
    {
        const Analysis a = catalog("hyperbolic", "n=1,c=1,k3=1");
        EXPECT_LE(max_abs_diff(a.harm.laplacian_zeta, a.acm.zeta), 1e-9);
        EXPECT_TRUE(a.harm.reeb_harmonic);
    }
    {
        // -(2n-1) k1 xi_zeta zeta + ((2n-1) k1^2 + c^2) zeta.
        const double k1 = 0.6;
        const Analysis a = catalog("hyperbolic", "n=2,c=1,k1=0.6,k5=0.8");
        const int D = a.model.dim();
        const int z = a.acm.z();
        Tensor expected(1, D);
        for (int k = 0; k < D; ++k) expected(k) = -3.0 * k1 * a.torsion.xi(z, z, k);
        expected = expected + (3.0 * k1 * k1 + 1.0) * a.acm.zeta;
        EXPECT_LE(max_abs_diff(a.harm.laplacian_zeta, expected), 1e-9);
        EXPECT_FALSE(a.harm.reeb_harmonic);
    }
}

TEST(ReebHarmonicity, LaplacianRoutesAgree) {
    for (const Analysis& a : sample_analyses()) EXPECT_LE(a.harm.laplacian_agreement, 1e-10) << a.model.label;
}

TEST(ReebHarmonicity, EquivalentToHarmonicStructureOnReebTypes) {
    const ClassMask family = mask_of({5, 6, 7, 8, 9, 10, 12});
    int exercised = 0;
    for (const Analysis& a : sample_analyses()) {
        if (!mask_within(a.cls.type_mask, family)) continue;
        ++exercised;
        EXPECT_EQ(a.harm.harmonic_structure, a.harm.reeb_harmonic) << a.model.label << " " << a.cls.type_name;
    }
    EXPECT_GT(exercised, 10);
}
