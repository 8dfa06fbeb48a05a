#include "acmlab/bending.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>

namespace acmlab {

namespace {

Eigen::MatrixXd to_eigen(const Tensor& t) {
    const int D = t.dim();
    Eigen::MatrixXd m(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) m(i, j) = t(i, j);
    return m;
}

Tensor from_eigen(const Eigen::MatrixXd& m) {
    const int D = static_cast<int>(m.rows());
    Tensor t(2, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) t(i, j) = m(i, j);
    return t;
}

ACMStructure standard_acm(int n) { return make_acm(standard_phi(n), basis_vector(2 * n + 1, 2 * n)); }

Analysis analyze_point(const OrbitPoint& p, const FrameModel& m) {
    return analyze(body_model(p, m), standard_acm(m.n));
}

OrbitPoint moved(const OrbitPoint& p, const Tensor& b, double t) {
    return orbit_point(p.acm.n, matmul(p.g, expm(t * b)));
}

// Gram-Schmidt on the projections of the elementary skew matrices.
std::vector<Tensor> block_basis(int n, bool m_block) {
    const int D = 2 * n + 1;
    const ACMStructure acm = standard_acm(n);
    std::vector<Tensor> basis;
    for (int j = 0; j < D; ++j)
        for (int k = j + 1; k < D; ++k) {
            Tensor e(2, D);
            e(j, k) = 1.0;
            e(k, j) = -1.0;
            Tensor v = m_block ? project_m(e, acm) : project_u(e, acm);
            for (const Tensor& q : basis) v = v - inner_product(v, q) * q;
            const double nv = v.norm();
            if (nv > 1e-10) basis.push_back((1.0 / nv) * v);
        }
    return basis;
}

}  // namespace

OrbitPoint orbit_point(int n, const Tensor& g) {
    OrbitPoint p;
    p.g = g;
    p.acm = make_acm(matmul(matmul(g, standard_phi(n)), transpose(g)), apply(g, basis_vector(2 * n + 1, 2 * n)));
    return p;
}

FrameModel body_model(const OrbitPoint& p, const FrameModel& m) { return transform_model(m, p.g); }

double bending(const OrbitPoint& p, const FrameModel& m) {
    const Torsion t = intrinsic_torsion(connection(body_model(p, m)), standard_acm(m.n));
    const double nx = t.xi.norm();
    return 0.5 * nx * nx;
}

Tensor bending_gradient(const Analysis& a) { return a.harm.d_star_xi; }

Tensor unimodular_defect(const FrameModel& m) {
    const int D = m.dim();
    Tensor h(1, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) h(i) += m.c(i, j, j);
    return h;
}

Tensor homogeneous_bending_gradient(const Analysis& a) {
    const int D = a.model.dim();
    const Tensor h = unimodular_defect(a.model);
    Tensor g = a.harm.d_star_xi;
    for (int i = 0; i < D; ++i)
        if (h(i) != 0.0)
            for (int j = 0; j < D; ++j)
                for (int k = 0; k < D; ++k) g(j, k) -= h(i) * a.torsion.xi(i, j, k);
    return g;
}

double directional_derivative(const OrbitPoint& p, const FrameModel& m, const Tensor& b) {
    return inner_product(bending_gradient(analyze_point(p, m)), b);
}

double fd_directional_derivative(const OrbitPoint& p, const FrameModel& m, const Tensor& b, double h) {
    return (bending(moved(p, b, h), m) - bending(moved(p, b, -h), m)) / (2.0 * h);
}

Tensor fd_gradient(const OrbitPoint& p, const FrameModel& m, double h) {
    Tensor g(2, m.dim());
    for (const Tensor& q : m_block_basis(m.n)) g = g + fd_directional_derivative(p, m, q, h) * q;
    return g;
}

Tensor expm(const Tensor& a) { return from_eigen(to_eigen(a).exp()); }

std::vector<Tensor> m_block_basis(int n) { return block_basis(n, true); }
std::vector<Tensor> u_block_basis(int n) { return block_basis(n, false); }

StepResult flow_step(const OrbitPoint& p, const FrameModel& m, double step, const Tensor* gradient) {
    StepResult r;
    r.point = p;
    r.bending_before = bending(p, m);
    r.bending_after = r.bending_before;
    const Tensor g = gradient ? *gradient : bending_gradient(analyze_point(p, m));
    const double gn = g.norm();
    r.grad_norm = gn;
    if (gn == 0.0) return r;
    double s = step;
    while (s >= 1e-12) {
        const OrbitPoint q = moved(p, g, -s);
        const double b = bending(q, m);
        if (b <= r.bending_before - 1e-4 * s * gn * gn) {
            r.point = q;
            r.bending_after = b;
            r.step = s;
            r.decreased = true;
            return r;
        }
        s *= 0.5;
    }
    r.stagnated = true;
    return r;
}

namespace {

enum class Source { DStarXi, Homogeneous, FiniteDifference };

// Largest mismatch between an analytic gradient and central differences over
// the u(n)^perp basis, relative to the gradient norm floored at the rounding
// level eps |xi|^2 / h of the differences.
double gradient_mismatch(const OrbitPoint& p, const FrameModel& m, const std::vector<Tensor>& basis, const Tensor& g) {
    const double gs = std::max(g.norm(), 1e-4 * std::max(1.0, bending(p, m)));
    double worst = 0.0;
    for (const Tensor& q : basis)
        worst = std::max(worst, std::fabs(inner_product(g, q) - fd_directional_derivative(p, m, q)) / gs);
    return worst;
}

Tensor gradient_at(const OrbitPoint& p, const FrameModel& m, Source src) {
    switch (src) {
        case Source::DStarXi:
            return bending_gradient(analyze_point(p, m));
        case Source::Homogeneous:
            return homogeneous_bending_gradient(analyze_point(p, m));
        default:
            return fd_gradient(p, m);
    }
}

// Coordinates of the gradient in an orthonormal basis of the u(n)^perp block.
Eigen::VectorXd coords(const Tensor& g, const std::vector<Tensor>& basis) {
    Eigen::VectorXd v(static_cast<int>(basis.size()));
    for (size_t i = 0; i < basis.size(); ++i) v(static_cast<int>(i)) = inner_product(g, basis[i]);
    return v;
}

// Damped Newton direction: Hessian from central differences of the gradient,
// symmetrized, with eigenvalues replaced by max(|lambda|, mu), mu ~ |grad|.
// Degenerate minima make plain gradient descent sublinear; this keeps the
// rate linear there and quadratic at nondegenerate minima.
Tensor newton_direction(const OrbitPoint& p, const FrameModel& m, const std::vector<Tensor>& basis,
                        const Eigen::VectorXd& gv, Source src) {
    const int k = static_cast<int>(basis.size());
    const double h = 1e-4;
    Eigen::MatrixXd H(k, k);
    for (int j = 0; j < k; ++j) {
        const OrbitPoint a = moved(p, basis[j], h);
        const OrbitPoint b = moved(p, basis[j], -h);
        const Tensor ga = gradient_at(a, m, src);
        const Tensor gb = gradient_at(b, m, src);
        H.col(j) = (coords(ga, basis) - coords(gb, basis)) / (2.0 * h);
    }
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const double mu = std::max(1e-12, gv.norm());
    Eigen::VectorXd lam = es.eigenvalues().cwiseAbs().cwiseMax(mu);
    const Eigen::VectorXd d = -es.eigenvectors() * (es.eigenvectors().transpose() * gv).cwiseQuotient(lam);
    Tensor dir(2, m.dim());
    for (int i = 0; i < k; ++i) dir = dir + d(i) * basis[i];
    return dir;
}

}  // namespace


FlowTrace minimize_bending(const OrbitPoint& p0, const FrameModel& m, int max_iters, double gtol) {
    FlowTrace tr;
    OrbitPoint p = p0;
    const std::vector<Tensor> basis = m_block_basis(m.n);

    const Analysis a0 = analyze_point(p, m);
    tr.gradient_check = gradient_mismatch(p, m, basis, bending_gradient(a0));
    tr.homogeneous_gradient_check = gradient_mismatch(p, m, basis, homogeneous_bending_gradient(a0));
    Source src = Source::DStarXi;
    if (tr.gradient_check > 1e-5) src = tr.homogeneous_gradient_check > 1e-5 ? Source::FiniteDifference : Source::Homogeneous;
    tr.fd_fallback = src == Source::FiniteDifference;
    tr.gradient_source = src == Source::DStarXi ? "d*xi" : (src == Source::Homogeneous ? "homogeneous" : "finite-difference");
    // Finite-difference gradients are only accurate to about 1e-9.
    const double stop = tr.fd_fallback ? std::max(gtol, 1e-7) : gtol;

    double prev = bending(p, m);
    for (int it = 0; it < max_iters; ++it) {
        const Tensor g = gradient_at(p, m, src);
        if (g.norm() <= stop) {
            tr.converged = true;
            break;
        }
        const Eigen::VectorXd gv = coords(g, basis);
        const Tensor dir = newton_direction(p, m, basis, gv, src);
        const double slope = inner_product(g, dir);

        // Armijo backtracking along the Newton direction; plain gradient step
        // if that fails.
        bool accepted = false;
        for (double s = 1.0; s >= 1e-12 && slope < 0.0; s *= 0.5) {
            const OrbitPoint q = moved(p, dir, s);
            const double b = bending(q, m);
            if (b <= prev + 1e-4 * s * slope) {
                tr.steps.push_back({b, g.norm(), s});
                p = q;
                prev = b;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            const StepResult st = flow_step(p, m, 1.0, &g);
            tr.steps.push_back({st.bending_after, st.grad_norm, st.step});
            if (st.stagnated) {
                tr.stagnated = true;
                break;
            }
            if (st.bending_after > prev) tr.monotone = false;
            prev = st.bending_after;
            p = st.point;
        }
    }
    const Analysis a = analyze_point(p, m);
    tr.final = p;
    tr.final_bending = 0.5 * a.torsion.xi.norm() * a.torsion.xi.norm();
    tr.final_d_star_xi_norm = a.harm.d_star_xi.norm();
    tr.final_harmonic_structure = a.harm.harmonic_structure;
    if (!tr.converged && gradient_at(p, m, src).norm() <= stop) tr.converged = true;
    return tr;
}

}  // namespace acmlab
