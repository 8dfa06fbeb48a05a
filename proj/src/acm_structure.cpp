#include "acmlab/acm_structure.hpp"

#include <algorithm>
#include <cmath>

namespace acmlab {

ACMStructure make_acm(const Tensor& phi, const Tensor& zeta) {
    ACMStructure a;
    a.n = (phi.dim() - 1) / 2;
    a.phi = phi;
    a.zeta = zeta;
    a.eta = zeta;
    a.F = phi;
    return a;
}

Tensor standard_phi(int n) {
    Tensor p(2, 2 * n + 1);
    for (int i = 0; i < n; ++i) {
        p(2 * i + 1, 2 * i) = 1.0;
        p(2 * i, 2 * i + 1) = -1.0;
    }
    return p;
}

Tensor basis_vector(int dim, int k) {
    Tensor v(1, dim);
    v(k) = 1.0;
    return v;
}

AcmDiagnostics validate_acm(const FrameModel& m, const Tensor& phi, const Tensor& zeta, double tol) {
    AcmDiagnostics d;
    const int D = m.dim();
    if (phi.order() != 2 || phi.dim() != D || zeta.order() != 1 || zeta.dim() != D)
        throw std::invalid_argument("acm: phi/zeta shape does not match the model");
    const Tensor p2 = matmul(phi, phi);
    for (int k = 0; k < D; ++k)
        for (int j = 0; j < D; ++j)
            d.phi_square = std::max(d.phi_square, std::fabs(p2(k, j) + (k == j ? 1.0 : 0.0) - zeta(k) * zeta(j)));
    const Tensor pp = pullback(Tensor::identity(D), phi);
    for (int x = 0; x < D; ++x)
        for (int y = 0; y < D; ++y)
            d.compatibility = std::max(d.compatibility, std::fabs(pp(x, y) - (x == y ? 1.0 : 0.0) + zeta(x) * zeta(y)));
    d.phi_zeta = apply(phi, zeta).max_abs();
    d.eta_phi = apply(transpose(phi), zeta).max_abs();
    d.zeta_unit = std::fabs(zeta.norm() - 1.0);
    d.f_skew = max_abs_diff(phi, -1.0 * transpose(phi));
    const double t = tol;
    if (!phi.all_finite() || !zeta.all_finite()) d.violated.push_back("finite entries");
    if (d.zeta_unit > t) d.violated.push_back("|zeta| = 1");
    if (d.phi_zeta > t) d.violated.push_back("phi zeta = 0");
    if (d.eta_phi > t) d.violated.push_back("eta o phi = 0");
    if (d.phi_square > t) d.violated.push_back("phi^2 = -I + eta (x) zeta");
    if (d.compatibility > t) d.violated.push_back("<phi X, phi Y> = <X,Y> - eta(X) eta(Y)");
    if (d.f_skew > t) d.violated.push_back("F skew");
    d.pass = d.violated.empty();
    return d;
}

Tensor frame_aligning(const Tensor& zeta) {
    const int D = zeta.dim();
    Tensor h = Tensor::identity(D);
    Tensor v = basis_vector(D, D - 1) - zeta;
    const double vv = inner_product(v, v);
    if (vv < 1e-30) return h;
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) h(i, j) -= 2.0 * v(i) * v(j) / vv;
    // Householder reflections have det -1; flip the first column.
    for (int i = 0; i < D; ++i) h(i, 0) = -h(i, 0);
    return h;
}

NormalizedModel normalize_frame(const FrameModel& m, const Tensor& phi, const Tensor& zeta) {
    NormalizedModel out;
    out.frame = frame_aligning(zeta);
    out.model = transform_model(m, out.frame);
    Tensor p = transform_tensor(phi, out.frame);
    const int D = m.dim();
    for (int j = 0; j < D; ++j) {
        p(D - 1, j) = 0.0;
        p(j, D - 1) = 0.0;
    }
    out.acm = make_acm(p, basis_vector(D, D - 1));
    return out;
}

Tensor derivation_action(const Tensor& a, const Tensor& t) {
    const int D = t.dim();
    const int r = t.order();
    Tensor out(r, D);
    std::vector<std::size_t> stride(r);
    for (int s = r - 1, st = 1; s >= 0; --s, st *= D) stride[s] = static_cast<std::size_t>(st);
    for (std::size_t off = 0; off < t.size(); ++off) {
        double v = 0.0;
        for (int s = 0; s < r; ++s) {
            const int j = static_cast<int>((off / stride[s]) % D);
            const std::size_t base = off - static_cast<std::size_t>(j) * stride[s];
            for (int k = 0; k < D; ++k) v -= a(j, k) * t.flat(base + static_cast<std::size_t>(k) * stride[s]);
        }
        out.flat(off) = v;
    }
    return out;
}

Torsion intrinsic_torsion(const Connection& conn, const ACMStructure& acm) {
    const int D = acm.dim();
    Torsion t;
    t.nabla_eta = covariant_derivative(acm.eta, conn.gamma);
    t.nabla_F = covariant_derivative(acm.F, conn.gamma);
    const Tensor Phi = transpose(acm.F);  // Phi(j,k) = <phi e_j, e_k>
    t.nabla_phi = covariant_derivative(Phi, conn.gamma);
    t.xi = Tensor(3, D);
    t.xi_second = Tensor(3, D);
    for (int x = 0; x < D; ++x)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k) {
                double a = 0.0, b = 0.0;
                for (int m = 0; m < D; ++m) {
                    a += t.nabla_phi(x, j, m) * Phi(m, k);
                    b += Phi(j, m) * t.nabla_phi(x, m, k);
                }
                t.xi(x, j, k) = -0.5 * a + t.nabla_eta(x, j) * acm.zeta(k) - 0.5 * acm.eta(j) * t.nabla_eta(x, k);
                t.xi_second(x, j, k) = 0.5 * b + 0.5 * t.nabla_eta(x, j) * acm.zeta(k) - acm.eta(j) * t.nabla_eta(x, k);
            }
    t.formula_agreement = max_abs_diff(t.xi, t.xi_second);
    return t;
}

Tensor project_u(const Tensor& a, const ACMStructure& acm) {
    const Tensor phi2 = matmul(acm.phi, acm.phi);
    return 0.5 * (pullback(a, phi2) + pullback(a, acm.phi));
}

Tensor project_m(const Tensor& a, const ACMStructure& acm) { return a - project_u(a, acm); }

Tensor torsion_from_connection(const Tensor& gamma, const ACMStructure& acm) {
    const int D = acm.dim();
    Tensor xi(3, D);
    for (int x = 0; x < D; ++x) {
        Tensor gx(2, D);
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k) gx(j, k) = gamma(x, j, k);
        const Tensor pm = project_m(gx, acm);
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k) xi(x, j, k) = -pm(j, k);
    }
    return xi;
}

double membership_residual(const Tensor& xi, const ACMStructure& acm) {
    const int D = acm.dim();
    const Tensor& P = acm.phi;
    double res = 0.0;
    std::vector<double> xz(D), xphiy(D);
    for (int x = 0; x < D; ++x) {
        for (int k = 0; k < D; ++k) {
            double s = 0.0;
            for (int m = 0; m < D; ++m) s += acm.zeta(m) * xi(x, m, k);
            xz[k] = s;  // xi_X zeta
        }
        for (int y = 0; y < D; ++y) {
            for (int k = 0; k < D; ++k) {
                double s = 0.0;
                for (int m = 0; m < D; ++m) s += P(m, y) * xi(x, m, k);
                xphiy[k] = s;  // xi_X phi Y
            }
            double eta_xphiy = 0.0;
            for (int k = 0; k < D; ++k) eta_xphiy += acm.eta(k) * xphiy[k];
            for (int k = 0; k < D; ++k) {
                double phi_xy = 0.0, phi_xz = 0.0;
                for (int m = 0; m < D; ++m) {
                    phi_xy += P(k, m) * xi(x, y, m);
                    phi_xz += P(k, m) * xz[m];
                }
                const double r = phi_xy + xphiy[k] - acm.eta(y) * phi_xz - eta_xphiy * acm.zeta(k);
                res = std::max(res, std::fabs(r));
            }
        }
    }
    return res;
}

double skew_residual(const Tensor& xi) {
    const int D = xi.dim();
    double r = 0.0;
    for (int x = 0; x < D; ++x)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k) r = std::max(r, std::fabs(xi(x, j, k) + xi(x, k, j)));
    return r;
}

ScalarInvariants scalar_invariants(const Torsion& t, const ACMStructure& acm) {
    const int D = acm.dim();
    const int z = acm.z();
    const int n = acm.n;
    ScalarInvariants s;
    for (int i = 0; i < D; ++i) s.d_star_eta -= t.nabla_eta(i, i);
    s.d_star_F = Tensor(1, D);
    for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) s.d_star_F(j) -= t.nabla_F(i, i, j);
    s.d_star_F_zeta = inner_product(s.d_star_F, acm.zeta);
    s.nabla_zeta_zeta = Tensor(1, D);
    for (int k = 0; k < D; ++k) s.nabla_zeta_zeta(k) = -t.xi(z, z, k);
    s.trace_vec = Tensor(1, D);
    s.phi_trace_vec = Tensor(1, D);
    for (int i = 0; i < D; ++i)
        for (int k = 0; k < D; ++k) {
            s.trace_vec(k) += t.xi(i, i, k);
            for (int m = 0; m < D; ++m) s.phi_trace_vec(k) += acm.phi(m, i) * t.xi(i, m, k);
        }
    // Lee form from the horizontal trace: sum_{i<2n} xi_{e_i} e_i = (n-1)/2 theta.
    s.theta = Tensor(1, D);
    s.has_theta = n > 1;
    if (s.has_theta) {
        for (int k = 0; k < z; ++k) {
            double tr = 0.0;
            for (int i = 0; i < z; ++i) tr += t.xi(i, i, k);
            s.theta(k) = 2.0 * tr / (n - 1);
        }
    }
    return s;
}

InvariantResiduals invariant_residuals(const ScalarInvariants& s, const ACMStructure& acm) {
    const int D = acm.dim();
    const int z = acm.z();
    InvariantResiduals r;
    const Tensor phi_dF = apply(acm.phi, s.d_star_F);
    const Tensor phi_nzz = apply(acm.phi, s.nabla_zeta_zeta);
    if (s.has_theta) {
        for (int k = 0; k < z; ++k)
            r.lee = std::max(r.lee, std::fabs((acm.n - 1) * s.theta(k) - (-phi_dF(k) + s.nabla_zeta_zeta(k))));
    }
    for (int k = 0; k < D; ++k) {
        const double t1 = -0.5 * phi_dF(k) - s.d_star_eta * acm.zeta(k) - 0.5 * s.nabla_zeta_zeta(k);
        r.trace = std::max(r.trace, std::fabs(s.trace_vec(k) - t1));
        const double t2 = -0.5 * s.d_star_F(k) - 0.5 * s.d_star_F_zeta * acm.zeta(k) - phi_nzz(k);
        r.phi_trace = std::max(r.phi_trace, std::fabs(s.phi_trace_vec(k) - t2));
        r.phi_trace_half = std::max(r.phi_trace_half, std::fabs(s.phi_trace_vec(k) - t2 - 0.5 * phi_nzz(k)));
    }
    return r;
}

}  // namespace acmlab
