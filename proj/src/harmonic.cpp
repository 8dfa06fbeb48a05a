#include "acmlab/harmonic.hpp"

#include <algorithm>
#include <cmath>

namespace acmlab {

Tensor minimal_connection(const Tensor& gamma, const Tensor& xi) { return gamma + xi; }

namespace {

// -sum_i T(i,i,...) for an order-4 tensor with derivative slot first.
Tensor neg_trace01(const Tensor& t) {
    const int D = t.dim();
    Tensor out(2, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k) out(j, k) -= t(i, i, j, k);
    return out;
}

}  // namespace

Tensor coderivative_torsion(const Tensor& xi, const Tensor& gamma) {
    return neg_trace01(covariant_derivative(xi, gamma));
}

Tensor coderivative_torsion_minimal(const Tensor& xi, const Tensor& gamma) {
    const int D = xi.dim();
    Tensor out = neg_trace01(covariant_derivative(xi, minimal_connection(gamma, xi)));
    std::vector<double> tr(D, 0.0);
    for (int i = 0; i < D; ++i)
        for (int m = 0; m < D; ++m) tr[m] += xi(i, i, m);
    for (int j = 0; j < D; ++j)
        for (int k = 0; k < D; ++k) {
            double s = 0.0;
            for (int m = 0; m < D; ++m) s += tr[m] * xi(m, j, k);
            out(j, k) -= s;
        }
    return out;
}

Tensor nu_sigma(const Tensor& xi, const Tensor& riemann) {
    const int D = xi.dim();
    Tensor nu(1, D);
    for (int x = 0; x < D; ++x) {
        double s = 0.0;
        for (int i = 0; i < D; ++i)
            for (int a = 0; a < D; ++a)
                for (int b = 0; b < D; ++b) s += xi(i, a, b) * riemann(i, x, a, b);
        nu(x) = s;
    }
    return nu;
}

Tensor star_ricci(const Tensor& riemann, const ACMStructure& acm) {
    const int D = acm.dim();
    const Tensor& P = acm.phi;
    Tensor r(2, D);
    for (int x = 0; x < D; ++x)
        for (int y = 0; y < D; ++y) {
            double s = 0.0;
            for (int i = 0; i < D; ++i)
                for (int a = 0; a < D; ++a) {
                    if (P(a, i) == 0.0) continue;
                    for (int b = 0; b < D; ++b) s += riemann(i, x, a, b) * P(a, i) * P(b, y);
                }
            r(x, y) = s;
        }
    return r;
}

Tensor rough_laplacian_zeta(const Tensor& nabla_eta, const Tensor& gamma) {
    const int D = nabla_eta.dim();
    const Tensor h = covariant_derivative(nabla_eta, gamma);
    Tensor lap(1, D);
    for (int i = 0; i < D; ++i)
        for (int k = 0; k < D; ++k) lap(k) -= h(i, i, k);
    return lap;
}

HarmonicityReport harmonicity(const Connection& conn, const ACMStructure& acm, const Torsion& t, double tol) {
    const int D = acm.dim();
    const int z = acm.z();
    HarmonicityReport h;
    h.tol = tol;
    const double xn = t.xi.norm();
    h.scale = std::max(1.0, xn * xn);
    const double thr = tol * h.scale;

    h.d_star_xi = coderivative_torsion(t.xi, conn.gamma);
    h.d_star_xi_alt = coderivative_torsion_minimal(t.xi, conn.gamma);
    h.d_star_xi_agreement = max_abs_diff(h.d_star_xi, h.d_star_xi_alt);
    h.d_star_xi_norm = h.d_star_xi.norm();
    for (int x = 0; x < D; ++x)
        for (int y = 0; y < D; ++y) {
            const double v = std::fabs(h.d_star_xi(x, y));
            if (x == z || y == z)
                h.zeta_residual = std::max(h.zeta_residual, v);
            else
                h.horizontal_residual = std::max(h.horizontal_residual, v);
        }
    h.harmonic_structure = h.horizontal_residual <= thr && h.zeta_residual <= thr;

    h.nu = nu_sigma(t.xi, conn.riemann);
    h.nu_norm = h.nu.norm();
    double skew = 0.0;
    for (int x = 0; x < D; ++x)
        for (int y = 0; y < D; ++y)
            for (int k = 0; k < D; ++k) skew = std::max(skew, std::fabs(t.xi(x, y, k) + t.xi(y, x, k)));
    h.skew_torsion = skew <= tol * std::max(1.0, xn);
    h.harmonic_map = h.harmonic_structure && (h.skew_torsion || h.nu.max_abs() <= thr);

    h.ric_star = star_ricci(conn.riemann, acm);
    h.ric_star_alt = skew_part(h.ric_star);
    h.ric_star_zeta = Tensor(1, D);
    for (int y = 0; y < D; ++y) h.ric_star_zeta(y) = h.ric_star(z, y);
    for (int i = 0; i < D; ++i) h.s_star += h.ric_star(i, i);
    for (int x = 0; x < D; ++x)
        for (int y = 0; y < D; ++y) {
            const double target = (x == y && x != z) ? h.s_star / (2.0 * acm.n) : 0.0;
            h.ac_einstein_residual = std::max(h.ac_einstein_residual, std::fabs(h.ric_star(x, y) - target));
        }
    h.weakly_ac_einstein = h.ac_einstein_residual <= thr;

    h.laplacian_zeta = rough_laplacian_zeta(t.nabla_eta, conn.gamma);
    const Tensor dxu = covariant_derivative(t.xi, minimal_connection(conn.gamma, t.xi));
    // (nabla^U_{e_i} xi)_{e_i} zeta + xi_{xi_{e_i} e_i} zeta - xi_{e_i} xi_{e_i} zeta
    h.laplacian_zeta_alt = Tensor(1, D);
    std::vector<double> tr(D, 0.0);
    for (int i = 0; i < D; ++i)
        for (int m = 0; m < D; ++m) tr[m] += t.xi(i, i, m);
    for (int k = 0; k < D; ++k) {
        double s = 0.0;
        for (int m = 0; m < D; ++m) {
            double a = 0.0;
            for (int i = 0; i < D; ++i) a += dxu(i, i, m, k);
            double b = 0.0;
            for (int q = 0; q < D; ++q) b += tr[q] * t.xi(q, m, k);
            s += (a + b) * acm.zeta(m);
        }
        for (int i = 0; i < D; ++i)
            for (int m = 0; m < D; ++m) s -= t.xi(i, z, m) * t.xi(i, m, k);
        h.laplacian_zeta_alt(k) = s;
    }
    h.laplacian_agreement = max_abs_diff(h.laplacian_zeta, h.laplacian_zeta_alt);
    h.nabla_zeta_sq = inner_product(t.nabla_eta, t.nabla_eta);
    for (int k = 0; k < D; ++k)
        h.reeb_residual = std::max(h.reeb_residual, std::fabs(h.laplacian_zeta(k) - h.nabla_zeta_sq * acm.zeta(k)));
    h.reeb_harmonic = h.reeb_residual <= thr;
    return h;
}

Analysis analyze(const FrameModel& model, const ACMStructure& acm, double tol) {
    Analysis a;
    a.model = model;
    a.acm = acm;
    a.conn = connection(model);
    a.torsion = intrinsic_torsion(a.conn, acm);
    a.minimal = minimal_connection(a.conn.gamma, a.torsion.xi);
    a.inv = scalar_invariants(a.torsion, acm);
    a.inv_res = invariant_residuals(a.inv, acm);
    a.comps = decompose_torsion(a.torsion.xi, acm);
    a.cls = classify_type(a.comps, acm.n, tol);
    AdmissibilityInputs in;
    in.n = acm.n;
    in.d_xi_zeta_eta_F = d_xi_zeta_eta_pair_F(a.torsion.xi, a.conn.gamma, acm);
    a.cls.admissibility_warnings = admissibility_check(a.cls, in, tol);
    a.harm = harmonicity(a.conn, acm, a.torsion, tol);
    return a;
}

}  // namespace acmlab
