#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "acmlab/acm_structure.hpp"
#include "acmlab/catalog.hpp"
#include "acmlab/tensor.hpp"

using namespace acmlab;

namespace {

Tensor random_skew(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Tensor a(2, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            a(i, j) = nd(rng);
            a(j, i) = -a(i, j);
        }
    return a;
}

std::vector<Tensor> parts(const TwoFormSplit& s) {
    return {s.f_part * s.F, s.herm0, s.antiherm, s.mixed()};
}

}  // namespace

TEST(InnerProduct, IdentityWithItselfIsDimension) {
    EXPECT_DOUBLE_EQ(inner_product(Tensor::identity(5), Tensor::identity(5)), 5.0);
}

TEST(InnerProduct, FundamentalFormHasNormSquared2n) {
    for (int n = 1; n <= 4; ++n) {
        const ACMStructure acm = make_acm(standard_phi(n), basis_vector(2 * n + 1, 2 * n));
        EXPECT_NEAR(inner_product(acm.F, acm.F), 2.0 * n, 1e-14);
    }
    // Rotated structure: still 2n.
    const Tensor g = random_orthogonal(5, 3);
    const Tensor phi = matmul(matmul(g, standard_phi(2)), transpose(g));
    const ACMStructure acm = make_acm(phi, apply(g, basis_vector(5, 4)));
    EXPECT_NEAR(inner_product(acm.F, acm.F), 4.0, 1e-13);
}

TEST(InnerProduct, ShapeMismatchIsRejected) {
    EXPECT_THROW(inner_product(Tensor(2, 3), Tensor(2, 5)), std::invalid_argument);
    EXPECT_THROW(inner_product(Tensor(2, 3), Tensor(3, 3)), std::invalid_argument);
}

TEST(TwoFormSplit, FundamentalFormIsPureTrace) {
    const Tensor phi = standard_phi(2);
    const TwoFormSplit s = two_form_split(make_acm(phi, basis_vector(5, 4)).F, phi);
    EXPECT_NEAR(s.f_part, 1.0, 1e-14);
    EXPECT_LE(s.herm0.max_abs(), 1e-14);
    EXPECT_LE(s.antiherm.max_abs(), 1e-14);
    EXPECT_LE(s.eta_wedge.max_abs(), 1e-14);
}

TEST(TwoFormSplit, EtaWedgeBlock) {
    const int n = 2;
    const Tensor phi = standard_phi(n);
    const Tensor eta = basis_vector(5, 4);
    Tensor beta(1, 5);
    beta(0) = 0.3;
    beta(1) = -1.2;
    beta(3) = 0.7;
    const TwoFormSplit s = two_form_split(wedge(eta, beta), phi);
    EXPECT_LE(max_abs_diff(s.eta_wedge, beta), 1e-14);
    EXPECT_NEAR(s.f_part, 0.0, 1e-14);
    EXPECT_LE(s.herm0.max_abs(), 1e-14);
    EXPECT_LE(s.antiherm.max_abs(), 1e-14);
}

TEST(TwoFormSplit, NonSkewInputIsRejected) {
    Tensor a(2, 5);
    a(0, 1) = 1.0;
    EXPECT_THROW(two_form_split(a, standard_phi(2)), std::invalid_argument);
}

TEST(TwoFormSplit, RandomFormsReconstructOrthogonallyAndIdempotently) {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 4; ++n) {
        const Tensor phi = standard_phi(n);
        for (int trial = 0; trial < 25; ++trial) {
            const Tensor alpha = random_skew(2 * n + 1, rng);
            const double scale = std::max(1.0, alpha.max_abs());
            const TwoFormSplit s = two_form_split(alpha, phi);
            EXPECT_LE(max_abs_diff(s.reconstruct(), alpha), 1e-12 * scale);

            const std::vector<Tensor> p = parts(s);
            const double a2 = inner_product(alpha, alpha);
            for (std::size_t i = 0; i < p.size(); ++i)
                for (std::size_t j = i + 1; j < p.size(); ++j)
                    EXPECT_LE(std::fabs(inner_product(p[i], p[j])), 1e-12 * a2) << "parts " << i << "," << j;

            // Splitting a single part returns it in its own slot only.
            for (std::size_t i = 0; i < p.size(); ++i) {
                const std::vector<Tensor> q = parts(two_form_split(p[i], phi));
                for (std::size_t j = 0; j < q.size(); ++j) {
                    if (i == j)
                        EXPECT_LE(max_abs_diff(q[j], p[i]), 1e-12 * scale);
                    else
                        EXPECT_LE(q[j].max_abs(), 1e-12 * scale);
                }
            }
        }
    }
}

TEST(TensorAlgebra, WedgeAndPullbackConventions) {
    const Tensor a = basis_vector(3, 0);
    const Tensor b = basis_vector(3, 1);
    const Tensor w = wedge(a, b);
    EXPECT_DOUBLE_EQ(w(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(w(1, 0), -1.0);
    // Pullback through the identity is the identity.
    EXPECT_LE(max_abs_diff(pullback(w, Tensor::identity(3)), w), 0.0);
}
