#include "acmlab/torsion_split.hpp"

#include <algorithm>
#include <cmath>

namespace acmlab {

Tensor TorsionComponents::sum() const {
    Tensor s(3, comp[0].dim());
    for (const auto& c : comp) s += c;
    return s;
}

namespace {

// Embed a bilinear form b on zeta-perp into the mixed block of the xi layout:
// <xi_X Y, zeta> = -b(X,Y), <xi_X zeta, Y> = b(X,Y).
Tensor embed_mixed(const Tensor& b, int z) {
    const int D = b.dim();
    Tensor t(3, D);
    for (int x = 0; x < z; ++x)
        for (int y = 0; y < z; ++y) {
            t(x, y, z) = -b(x, y);
            t(x, z, y) = b(x, y);
        }
    return t;
}

}  // namespace

TorsionComponents decompose_torsion(const Tensor& xi, const ACMStructure& acm) {
    const int D = acm.dim();
    const int z = acm.z();
    const int n = acm.n;
    if (xi.order() != 3 || xi.dim() != D) throw std::invalid_argument("decompose_torsion: xi has wrong shape");
    const Tensor& P = acm.phi;
    TorsionComponents out;
    for (auto& c : out.comp) c = Tensor(3, D);

    // (a) Horizontal block and the involution T -> T(phi., phi., .).
    Tensor T(3, D), theta_T(3, D);
    for (int x = 0; x < z; ++x)
        for (int y = 0; y < z; ++y)
            for (int k = 0; k < z; ++k) T(x, y, k) = xi(x, y, k);
    for (int x = 0; x < z; ++x)
        for (int y = 0; y < z; ++y)
            for (int k = 0; k < z; ++k) {
                double s = 0.0;
                for (int a = 0; a < z; ++a)
                    for (int b = 0; b < z; ++b) s += P(a, x) * P(b, y) * T(a, b, k);
                theta_T(x, y, k) = s;
            }
    const Tensor A = 0.5 * (T - theta_T);
    const Tensor B = 0.5 * (T + theta_T);
    Tensor& c1 = out.comp[0];
    for (int x = 0; x < z; ++x)
        for (int y = 0; y < z; ++y)
            for (int k = 0; k < z; ++k) c1(x, y, k) = (A(x, y, k) + A(y, k, x) + A(k, x, y)) / 3.0;
    out.comp[1] = A - c1;

    Tensor& c4 = out.comp[3];
    if (n > 1) {
        Tensor theta(1, D);
        for (int k = 0; k < z; ++k) {
            double tr = 0.0;
            for (int i = 0; i < z; ++i) tr += B(i, i, k);
            theta(k) = 2.0 * tr / (n - 1);
        }
        const Tensor phi_theta = apply(P, theta);
        for (int x = 0; x < z; ++x)
            for (int y = 0; y < z; ++y)
                for (int k = 0; k < z; ++k) {
                    const double v = (x == y ? theta(k) : 0.0) - (x == k ? theta(y) : 0.0) - P(y, x) * phi_theta(k) +
                                     phi_theta(y) * P(k, x);
                    c4(x, y, k) = 0.25 * v;
                }
    }
    out.comp[2] = B - c4;

    // (b) Mixed block b(X,Y) = (xi_X eta)(Y) = -<xi_X Y, zeta>.
    Tensor b(2, D);
    for (int x = 0; x < z; ++x)
        for (int y = 0; y < z; ++y) b(x, y) = -xi(x, y, z);
    const Tensor bs = sym_part(b);
    const Tensor ba = skew_part(b);
    const Tensor bs_phi = pullback(bs, P);
    const Tensor ba_phi = pullback(ba, P);
    const Tensor s_herm = 0.5 * (bs + bs_phi);
    const Tensor s_anti = 0.5 * (bs - bs_phi);
    const Tensor a_herm = 0.5 * (ba + ba_phi);
    const Tensor a_anti = 0.5 * (ba - ba_phi);
    Tensor g_perp(2, D);
    double tr = 0.0;
    for (int i = 0; i < z; ++i) {
        g_perp(i, i) = 1.0;
        tr += bs(i, i);
    }
    const Tensor b5 = (tr / (2.0 * n)) * g_perp;
    const Tensor b6 = (inner_product(a_herm, acm.F) / (2.0 * n)) * acm.F;
    out.comp[4] = embed_mixed(b5, z);
    out.comp[7] = embed_mixed(s_herm - b5, z);
    out.comp[8] = embed_mixed(s_anti, z);
    out.comp[5] = embed_mixed(b6, z);
    out.comp[6] = embed_mixed(a_herm - b6, z);
    out.comp[9] = embed_mixed(a_anti, z);

    // (c) zeta-slot block.
    for (int y = 0; y < z; ++y) {
        for (int k = 0; k < z; ++k) out.comp[10](z, y, k) = xi(z, y, k);
        out.comp[11](z, y, z) = xi(z, y, z);
        out.comp[11](z, z, y) = xi(z, z, y);
    }

    for (int i = 0; i < kNumClasses; ++i) out.norms[i] = out.comp[i].norm();
    out.xi_norm = xi.norm();
    return out;
}

ClassMask admissible_classes(int n) {
    ClassMask m;
    m.fill(true);
    if (n == 1) {
        m.fill(false);
        for (int c : {5, 6, 9, 12}) m[c - 1] = true;
    } else if (n == 2) {
        m[0] = false;
        m[2] = false;
    }
    return m;
}

ClassMask mask_of(std::initializer_list<int> classes) {
    ClassMask m{};
    for (int c : classes) {
        if (c < 1 || c > kNumClasses) throw std::invalid_argument("mask_of: class out of range");
        m[c - 1] = true;
    }
    return m;
}

bool mask_within(const ClassMask& type, const ClassMask& family) {
    for (int i = 0; i < kNumClasses; ++i)
        if (type[i] && !family[i]) return false;
    return true;
}

std::string type_string(const ClassMask& mask) {
    std::string s;
    for (int i = 0; i < kNumClasses; ++i) {
        if (!mask[i]) continue;
        if (!s.empty()) s += "+";
        s += "C" + std::to_string(i + 1);
    }
    return s.empty() ? "cosymplectic" : s;
}

ClassificationReport classify_type(const TorsionComponents& comps, int n, double tol) {
    ClassificationReport r;
    r.tol = tol;
    r.norms = comps.norms;
    r.xi_norm = comps.xi_norm;
    const double scale = std::max(1.0, comps.xi_norm);
    const double thr = tol * scale;
    const double strict_thr = std::sqrt(tol) * scale;
    const ClassMask allowed = admissible_classes(n);
    for (int i = 0; i < kNumClasses; ++i) {
        r.type_mask[i] = allowed[i] && comps.norms[i] > thr;
        r.strict[i] = r.type_mask[i] && comps.norms[i] >= strict_thr;
    }
    r.type_name = type_string(r.type_mask);
    return r;
}

const std::vector<AdmissibilityRule>& admissibility_rules() {
    using S = SideCondition;
    static const std::vector<AdmissibilityRule> rules = {
        // n > 2
        {"nonexistence-i", 3, 1 << 20, mask_of({1, 2, 3, 5, 6, 7, 9, 10, 12}), mask_of({1, 2, 3, 5, 7, 9, 10, 12}),
         mask_of({1, 2, 3, 6, 7, 9, 10, 12})},
        {"nonexistence-ii", 3, 1 << 20, mask_of({1, 2, 3, 5, 6, 8, 9, 10, 12}), mask_of({1, 2, 3, 5, 8, 9, 10, 12}),
         mask_of({1, 2, 3, 6, 8, 9, 10, 12})},
        {"nonexistence-iii", 3, 1 << 20, mask_of({1, 2, 3, 5, 6, 7, 9, 11, 12}), mask_of({1, 2, 3, 5, 7, 9, 11, 12}),
         mask_of({1, 2, 3, 6, 7, 9, 11, 12})},
        {"nonexistence-iv", 3, 1 << 20, mask_of({1, 2, 3, 5, 6, 8, 9, 11, 12}), mask_of({1, 2, 3, 5, 8, 9, 11, 12}),
         mask_of({1, 2, 3, 6, 8, 9, 11, 12})},
        {"nonexistence-v", 3, 1 << 20, mask_of({1, 5, 7, 9, 10, 12}), mask_of({1, 5, 9, 10, 12}),
         mask_of({1, 7, 9, 10, 12})},
        {"nonexistence-vi", 3, 1 << 20, mask_of({2, 5, 7, 9, 10, 12}), mask_of({2, 5, 9, 10, 12}),
         mask_of({2, 7, 9, 10, 12})},
        {"nonexistence-vii", 3, 1 << 20, mask_of({1, 5, 7, 9, 11, 12}), mask_of({1, 5, 9, 11, 12}),
         mask_of({1, 7, 9, 11, 12})},
        {"nonexistence-viii", 3, 1 << 20, mask_of({2, 5, 7, 9, 11, 12}), mask_of({2, 5, 9, 11, 12}),
         mask_of({2, 7, 9, 11, 12})},
        {"nonexistence-ix", 3, 1 << 20, mask_of({1, 6, 8, 9, 10, 12}), mask_of({1, 6, 9, 10, 12}),
         mask_of({1, 8, 9, 10, 12})},
        {"nonexistence-x", 3, 1 << 20, mask_of({2, 6, 8, 9, 10, 12}), mask_of({2, 6, 9, 12}),
         mask_of({2, 8, 9, 10, 12})},
        {"nonexistence-xi", 3, 1 << 20, mask_of({1, 6, 8, 9, 11, 12}), mask_of({1, 6, 9, 11, 12}),
         mask_of({1, 8, 9, 11, 12})},
        {"nonexistence-xii", 3, 1 << 20, mask_of({2, 6, 8, 9, 11, 12}), mask_of({2, 6, 9, 12}),
         mask_of({2, 8, 9, 11, 12})},
        {"nonexistence-xiii", 3, 1 << 20, mask_of({2, 5, 6, 8, 9, 11, 12}), mask_of({2, 6, 9, 12}),
         mask_of({2, 5, 8, 9, 11, 12})},
        {"nonexistence-xiv", 3, 1 << 20, mask_of({2, 6, 9, 10, 11, 12}), mask_of({2, 6, 9, 12}),
         mask_of({2, 9, 10, 11, 12})},
        {"nonexistence-xv", 3, 1 << 20, mask_of({2, 5, 9, 10, 11, 12}), mask_of({2, 5, 9, 11, 12}),
         mask_of({2, 9, 10, 11, 12})},
        {"nonexistence-xvi", 3, 1 << 20, mask_of({2, 5, 7, 10, 12}), mask_of({2, 5, 12}), mask_of({2, 7, 10, 12})},
        {"nonexistence-xvii", 3, 1 << 20, mask_of({2, 6, 9, 10, 12}), mask_of({2, 6, 9, 12}),
         mask_of({2, 9, 10, 12})},
        {"nonexistence-xviii", 3, 1 << 20, mask_of({1, 2, 3, 5, 6, 12}), mask_of({1, 2, 3, 5}),
         mask_of({1, 2, 3, 6, 12}), S::DDStarEtaPropEta},
        {"nonexistence-xix", 3, 1 << 20, mask_of({1, 2, 5, 6, 7, 12}), mask_of({1, 2, 5, 7}),
         mask_of({1, 2, 6, 7, 12}), S::DDStarEtaPropEta},
        {"nonexistence-xx", 3, 1 << 20, mask_of({1, 2, 3, 4, 5, 6, 8, 9, 11}), mask_of({1, 2, 3, 4, 5, 8, 9, 11}),
         mask_of({1, 2, 3, 6, 7, 9, 11}), S::DDStarFZetaPropEta},
        {"nonexistence-xxi", 3, 1 << 20, mask_of({1, 2, 3, 5, 6, 8, 9, 11, 12}), mask_of({2, 6, 9}),
         mask_of({1, 2, 3, 5, 8, 9, 11, 12}), S::DDStarFZetaPropEta},
        {"nonexistence-xxii", 3, 1 << 20, mask_of({1, 2, 3, 5, 6, 8, 9, 11, 12}), mask_of({2, 6, 9, 12}),
         mask_of({1, 2, 3, 5, 8, 9, 11, 12}), S::DXiZetaEtaFZero},
        // n = 2
        {"nonexistence-dim5-i", 2, 2, mask_of({2, 5, 6, 7, 9, 10, 12}), mask_of({2, 5, 9, 10, 12}),
         mask_of({2, 6, 7, 9, 10, 12})},
        {"nonexistence-dim5-ii", 2, 2, mask_of({2, 5, 6, 8, 9, 10, 12}), mask_of({2, 5, 8, 9, 10, 12}),
         mask_of({2, 6, 9, 10, 12})},
        {"nonexistence-dim5-iii", 2, 2, mask_of({2, 5, 6, 7, 9, 11, 12}), mask_of({2, 5, 9, 11, 12}),
         mask_of({2, 6, 7, 9, 11, 12})},
        {"nonexistence-dim5-iv", 2, 2, mask_of({2, 5, 6, 8, 9, 11, 12}), mask_of({2, 5, 8, 9, 11, 12}),
         mask_of({2, 6, 9, 12})},
        {"nonexistence-dim5-v", 2, 2, mask_of({2, 6, 9, 10, 11, 12}), mask_of({2, 6, 9, 10, 12}),
         mask_of({2, 9, 10, 11, 12})},
        {"nonexistence-dim5-vi", 2, 2, mask_of({2, 5, 6, 7, 12}), mask_of({2, 5}), mask_of({2, 6, 7, 12}),
         S::DDStarEtaPropEta},
        {"nonexistence-dim5-vii", 2, 2, mask_of({2, 4, 5, 6, 8, 9, 11}), mask_of({2, 4, 5, 8, 9, 11}),
         mask_of({2, 6, 9}), S::DDStarFZetaPropEta},
        {"nonexistence-dim5-viii", 2, 2, mask_of({2, 5, 6, 8, 9, 11, 12}), mask_of({2, 6, 9}),
         mask_of({2, 5, 8, 9, 11, 12}), S::DDStarFZetaPropEta},
    };
    return rules;
}

double d_xi_zeta_eta_pair_F(const Tensor& xi, const Tensor& gamma, const ACMStructure& acm) {
    const int D = acm.dim();
    const int z = acm.z();
    Tensor beta(1, D);  // (xi_zeta eta)(Y) = -<xi_zeta Y, zeta>
    for (int y = 0; y < D; ++y) beta(y) = -xi(z, y, z);
    const Tensor nb = covariant_derivative(beta, gamma);
    double s = 0.0;
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) s += (nb(i, j) - nb(j, i)) * acm.F(i, j);
    return s;
}

std::vector<std::string> admissibility_check(const ClassificationReport& report, const AdmissibilityInputs& in,
                                             double tol) {
    std::vector<std::string> warnings;
    for (const auto& rule : admissibility_rules()) {
        if (in.n < rule.min_n || in.n > rule.max_n) continue;
        if (!mask_within(report.type_mask, rule.family)) continue;
        if (rule.side == SideCondition::DXiZetaEtaFZero &&
            std::fabs(in.d_xi_zeta_eta_F) > tol * std::max(1.0, report.xi_norm * report.xi_norm))
            continue;
        if (mask_within(report.type_mask, rule.first) || mask_within(report.type_mask, rule.second)) continue;
        warnings.push_back(rule.id);
    }
    return warnings;
}

}  // namespace acmlab
