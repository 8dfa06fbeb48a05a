#include "acmlab/frame_model.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace acmlab {

FrameModel make_model(int n, std::string label) {
    if (n < 1) throw std::invalid_argument("model: n must be positive");
    FrameModel m;
    m.n = n;
    m.c = Tensor(3, 2 * n + 1);
    m.label = std::move(label);
    return m;
}

ModelDiagnostics validate_model(const FrameModel& m, double tol) {
    ModelDiagnostics d;
    const int D = m.dim();
    if (m.c.order() != 3 || m.c.dim() != D) throw std::invalid_argument("model: c has wrong shape");
    d.finite = m.c.all_finite();
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k)
                d.antisymmetry_residual = std::max(d.antisymmetry_residual, std::fabs(m.c(i, j, k) + m.c(j, i, k)));
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int l = 0; l < D; ++l)
                for (int k = 0; k < D; ++k) {
                    double s = 0.0;
                    for (int q = 0; q < D; ++q)
                        s += m.c(i, j, q) * m.c(q, l, k) + m.c(j, l, q) * m.c(q, i, k) + m.c(l, i, q) * m.c(q, j, k);
                    d.jacobi_residual = std::max(d.jacobi_residual, std::fabs(s));
                }
    d.pass = d.finite && d.antisymmetry_residual <= tol && d.jacobi_residual <= tol;
    return d;
}

Tensor levi_civita(const FrameModel& m) {
    const int D = m.dim();
    Tensor g(3, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k) g(i, j, k) = 0.5 * (m.c(i, j, k) - m.c(j, k, i) + m.c(k, i, j));
    return g;
}

Connection curvature_tensor(const FrameModel& m, const Tensor& gamma) {
    const int D = m.dim();
    Connection cd;
    cd.gamma = gamma;
    cd.riemann = Tensor(4, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k)
                for (int l = 0; l < D; ++l) {
                    double s = 0.0;
                    for (int q = 0; q < D; ++q)
                        s += gamma(j, k, q) * gamma(i, q, l) - gamma(i, k, q) * gamma(j, q, l) - m.c(i, j, q) * gamma(q, k, l);
                    cd.riemann(i, j, k, l) = -s;
                }
    cd.ricci = Tensor(2, D);
    for (int x = 0; x < D; ++x)
        for (int y = 0; y < D; ++y) {
            double s = 0.0;
            for (int i = 0; i < D; ++i) s += cd.riemann(x, i, y, i);
            cd.ricci(x, y) = s;
        }
    cd.scalar = 0.0;
    for (int i = 0; i < D; ++i) cd.scalar += cd.ricci(i, i);

    // Weyl tensor as the totally trace-free part, with (h . g)(i,j,k,l) =
    // h_ik g_jl + h_jl g_ik - h_il g_jk - h_jk g_il.
    cd.weyl = cd.riemann;
    if (D > 2) {
        auto kn = [](const Tensor& h, int i, int j, int k, int l) {
            auto g = [](int a, int b) { return a == b ? 1.0 : 0.0; };
            return h(i, k) * g(j, l) + h(j, l) * g(i, k) - h(i, l) * g(j, k) - h(j, k) * g(i, l);
        };
        const Tensor id = Tensor::identity(D);
        const double a = 1.0 / (D - 2);
        const double b = cd.scalar / (2.0 * (D - 1) * (D - 2));
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j)
                for (int k = 0; k < D; ++k)
                    for (int l = 0; l < D; ++l)
                        cd.weyl(i, j, k, l) += -a * kn(cd.ricci, i, j, k, l) + b * kn(id, i, j, k, l);
    }
    return cd;
}

Connection connection(const FrameModel& m) { return curvature_tensor(m, levi_civita(m)); }

Tensor covariant_derivative(const Tensor& t, const Tensor& conn) {
    const int D = t.dim();
    const int r = t.order();
    if (conn.order() != 3 || conn.dim() != D) throw std::invalid_argument("covariant_derivative: bad connection");
    Tensor out(r + 1, D);
    const std::size_t block = t.size();
    std::vector<int> idx(r);
    std::vector<std::size_t> stride(r);
    for (int s = r - 1, st = 1; s >= 0; --s, st *= D) stride[s] = static_cast<std::size_t>(st);
    for (int w = 0; w < D; ++w) {
        for (std::size_t off = 0; off < block; ++off) {
            std::size_t rem = off;
            for (int s = r - 1; s >= 0; --s) {
                idx[s] = static_cast<int>(rem % D);
                rem /= D;
            }
            double v = 0.0;
            for (int s = 0; s < r; ++s) {
                const std::size_t base = off - static_cast<std::size_t>(idx[s]) * stride[s];
                for (int q = 0; q < D; ++q) {
                    const double cw = conn(w, idx[s], q);
                    if (cw != 0.0) v -= cw * t.flat(base + static_cast<std::size_t>(q) * stride[s]);
                }
            }
            out.flat(static_cast<std::size_t>(w) * block + off) = v;
        }
    }
    return out;
}

Tensor transform_tensor(const Tensor& t, const Tensor& g) {
    const int D = t.dim();
    const int r = t.order();
    Tensor cur = t;
    // contract one slot at a time: slot s gets new index a with weight g(i,a)
    std::vector<std::size_t> stride(r);
    for (int s = r - 1, st = 1; s >= 0; --s, st *= D) stride[s] = static_cast<std::size_t>(st);
    for (int s = 0; s < r; ++s) {
        Tensor nxt(r, D);
        for (std::size_t off = 0; off < cur.size(); ++off) {
            const int a = static_cast<int>((off / stride[s]) % D);
            const std::size_t base = off - static_cast<std::size_t>(a) * stride[s];
            double v = 0.0;
            for (int i = 0; i < D; ++i) v += g(i, a) * cur.flat(base + static_cast<std::size_t>(i) * stride[s]);
            nxt.flat(off) = v;
        }
        cur = std::move(nxt);
    }
    return cur;
}

FrameModel transform_model(const FrameModel& m, const Tensor& g) {
    FrameModel out = m;
    out.c = transform_tensor(m.c, g);
    return out;
}

double second_bianchi_residual(const Connection& conn) {
    const Tensor dr = covariant_derivative(conn.riemann, conn.gamma);
    const int D = conn.riemann.dim();
    double m = 0.0;
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
            for (int c = 0; c < D; ++c)
                for (int k = 0; k < D; ++k)
                    for (int l = 0; l < D; ++l)
                        m = std::max(m, std::fabs(dr(a, b, c, k, l) + dr(b, c, a, k, l) + dr(c, a, b, k, l)));
    return m;
}

double first_bianchi_residual(const Tensor& r) {
    const int D = r.dim();
    double m = 0.0;
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k)
                for (int l = 0; l < D; ++l)
                    m = std::max(m, std::fabs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
    return m;
}

}  // namespace acmlab
