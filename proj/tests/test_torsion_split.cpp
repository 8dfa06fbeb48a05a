#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "acmlab/catalog.hpp"
#include "acmlab/harmonic.hpp"

using namespace acmlab;

namespace {

struct Sample {
    LoadedModel lm;
    Torsion t;
    TorsionComponents comps;
};

Sample sample(const LoadedModel& lm) {
    Sample s{lm, intrinsic_torsion(connection(lm.model), lm.acm), {}};
    s.comps = decompose_torsion(s.t.xi, lm.acm);
    return s;
}

std::vector<ModelSpec> sample_specs() {
    std::vector<ModelSpec> out;
    for (const std::string& name : catalog_names())
        for (int n = 1; n <= 3; ++n) out.push_back(catalog_spec(name, {{"n", n}}));
    out.push_back(catalog_spec("hyperbolic", parse_params("n=2,c=1,k1=0.6,k5=0.8")));
    out.push_back(catalog_spec("hyperbolic", parse_params("n=1,c=1,k1=0.6,k3=0.8")));
    for (const ModelSpec& s : random_model_specs(54, 21)) out.push_back(s);
    return out;
}

std::string type_of(const std::string& name, const std::string& params) {
    const LoadedModel lm = build_catalog_model(name, parse_params(params));
    return analyze(lm.model, lm.acm).cls.type_name;
}

// sum_i xi_{e_i} e_i, or sum_i xi_{e_i} phi e_i when `with_phi`.
Tensor trace_vector(const Tensor& xi, const ACMStructure& acm, bool with_phi) {
    const int D = acm.dim();
    Tensor v(1, D);
    for (int i = 0; i < D; ++i)
        for (int k = 0; k < D; ++k) {
            if (!with_phi) {
                v(k) += xi(i, i, k);
            } else {
                for (int j = 0; j < D; ++j) v(k) += acm.phi(j, i) * xi(i, j, k);
            }
        }
    return v;
}

}  // namespace

TEST(Classification, CatalogTypes) {
    EXPECT_EQ(type_of("hyperbolic", "n=2,c=1,k1=0.6,k5=0.8"), "C4+C5+C12");
    EXPECT_EQ(type_of("hyperbolic", "n=2,c=1,k1=1"), "C5");
    EXPECT_EQ(type_of("hyperbolic", "n=2,c=1,k5=1"), "C4+C12");
    EXPECT_EQ(type_of("hyperbolic", "n=1,c=1,k3=1"), "C12");
    EXPECT_EQ(type_of("heisenberg", "n=2"), "C6");
    EXPECT_EQ(type_of("heisenberg", "n=1"), "C6");
    EXPECT_EQ(type_of("flat-cosymplectic", "n=2"), "cosymplectic");
}

TEST(Classification, StrictnessAndNorms) {
    const LoadedModel lm = build_catalog_model("hyperbolic", parse_params("n=2,c=1,k5=1"));
    const ClassificationReport r = analyze(lm.model, lm.acm).cls;
    for (int c = 1; c <= kNumClasses; ++c) {
        const bool expected = c == 4 || c == 12;
        EXPECT_EQ(r.type_mask[c - 1], expected) << c;
        EXPECT_EQ(r.strict[c - 1], expected) << c;
        if (!expected) {
            EXPECT_LE(r.norms[c - 1], 1e-12) << c;
        }
    }
}

TEST(Decomposition, PropertiesOnCatalogAndRandomModels) {
    for (const ModelSpec& spec : sample_specs()) {
        const Sample s = sample(load_model(spec));
        const double xi2 = std::max(1.0, s.comps.xi_norm * s.comps.xi_norm);
        EXPECT_LE(max_abs_diff(s.comps.sum(), s.t.xi), 1e-10) << spec.name;
        double sq = 0.0;
        for (int i = 0; i < kNumClasses; ++i) {
            sq += s.comps.norms[i] * s.comps.norms[i];
            EXPECT_LE(membership_residual(s.comps.comp[i], s.lm.acm), 1e-10) << spec.name << " C" << i + 1;
            for (int j = i + 1; j < kNumClasses; ++j)
                EXPECT_LE(std::fabs(inner_product(s.comps.comp[i], s.comps.comp[j])), 1e-10 * xi2)
                    << spec.name << " C" << i + 1 << " C" << j + 1;
        }
        EXPECT_LE(std::fabs(sq - s.comps.xi_norm * s.comps.xi_norm), 1e-9 * xi2) << spec.name;

        // Dimension restrictions.
        const int n = spec.n;
        for (int c = 1; c <= kNumClasses; ++c) {
            const bool absent = (n == 1 && (c <= 4 || c == 7 || c == 8 || c == 10 || c == 11)) ||
                                (n == 2 && (c == 1 || c == 3));
            if (absent) {
                EXPECT_LE(s.comps.norms[c - 1], 1e-10) << spec.name << " C" << c;
            }
        }
    }
}

TEST(Decomposition, NormsAreEquivariantUnderConjugation) {
    for (const ModelSpec& spec : sample_specs()) {
        const Sample s = sample(load_model(spec));
        for (std::uint64_t k = 0; k < 10; ++k) {
            const Sample c = sample(load_model(conjugate_spec(spec, random_orthogonal(2 * spec.n + 1, 100 + k))));
            for (int i = 0; i < kNumClasses; ++i)
                EXPECT_NEAR(c.comps.norms[i], s.comps.norms[i], 1e-10) << spec.name << " C" << i + 1;
        }
    }
}

TEST(Decomposition, ProjectorsAreIdempotent) {
    for (const ModelSpec& spec : sample_specs()) {
        const Sample s = sample(load_model(spec));
        for (int i = 0; i < kNumClasses; ++i) {
            const TorsionComponents again = decompose_torsion(s.comps.comp[i], s.lm.acm);
            for (int j = 0; j < kNumClasses; ++j) {
                if (i == j)
                    EXPECT_LE(max_abs_diff(again.comp[j], s.comps.comp[i]), 1e-10) << spec.name;
                else
                    EXPECT_LE(again.comp[j].max_abs(), 1e-10) << spec.name << " C" << i + 1 << "->C" << j + 1;
            }
        }
    }
}

TEST(Decomposition, TraceIdentities) {
    for (const ModelSpec& spec : sample_specs()) {
        const Sample s = sample(load_model(spec));
        const ACMStructure& acm = s.lm.acm;
        const ScalarInvariants inv = scalar_invariants(s.t, acm);
        const Tensor nzz = inv.nabla_zeta_zeta;

        // xi_(4) e_i e_i = -1/2 phi (d*F)^# + 1/2 nabla_zeta zeta (horizontal part).
        Tensor expect4 = -0.5 * apply(acm.phi, inv.d_star_F) + 0.5 * nzz;
        const Tensor t4 = trace_vector(s.comps[4], acm, false);
        if (spec.n > 1) {
            EXPECT_LE(max_abs_diff(t4, expect4), 1e-10) << spec.name;
        }
        // xi_(5) e_i e_i = -d*eta zeta.
        EXPECT_LE(max_abs_diff(trace_vector(s.comps[5], acm, false), -inv.d_star_eta * acm.zeta), 1e-10) << spec.name;
        // xi_(12) e_i e_i = -nabla_zeta zeta.
        EXPECT_LE(max_abs_diff(trace_vector(s.comps[12], acm, false), -1.0 * nzz), 1e-10) << spec.name;
        // C3 is trace-free in both contractions.
        EXPECT_LE(trace_vector(s.comps[3], acm, false).max_abs(), 1e-10) << spec.name;
        EXPECT_LE(trace_vector(s.comps[3], acm, true).max_abs(), 1e-10) << spec.name;
    }
}

TEST(Admissibility, CatalogModelsRaiseNoWarnings) {
    for (const std::string p : {"n=2,c=1,k1=0.6,k5=0.8", "n=3,c=1,k1=0.6,k7=0.8"}) {
        const LoadedModel lm = build_catalog_model("hyperbolic", parse_params(p));
        EXPECT_TRUE(analyze(lm.model, lm.acm).cls.admissibility_warnings.empty()) << p;
    }
    for (int n = 1; n <= 3; ++n) {
        const LoadedModel lm = build_catalog_model("heisenberg", {{"n", n}});
        EXPECT_TRUE(analyze(lm.model, lm.acm).cls.admissibility_warnings.empty());
    }
}

TEST(Admissibility, SyntheticViolationTriggersRule) {
    // Type C5+C6 in dimension 7 would need d*eta d*F(zeta) != 0.
    ClassificationReport r;
    r.type_mask = mask_of({5, 6});
    r.xi_norm = 1.0;
    AdmissibilityInputs in;
    in.n = 3;
    const std::vector<std::string> w = admissibility_check(r, in);
    EXPECT_NE(std::find(w.begin(), w.end(), "nonexistence-i"), w.end());
    // The pure types are allowed.
    r.type_mask = mask_of({5});
    EXPECT_TRUE(admissibility_check(r, in).empty());
    // The rule does not apply in dimension 5.
    r.type_mask = mask_of({5, 6});
    in.n = 2;
    const std::vector<std::string> w2 = admissibility_check(r, in);
    EXPECT_EQ(std::find(w2.begin(), w2.end(), "nonexistence-i"), w2.end());
}
