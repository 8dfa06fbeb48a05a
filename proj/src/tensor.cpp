#include "acmlab/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace acmlab {

Tensor::Tensor(int order, int dim, double fill) : order_(order), dim_(dim) {
    if (order < 0 || dim <= 0) throw std::invalid_argument("tensor: bad shape");
    std::size_t n = 1;
    for (int k = 0; k < order; ++k) n *= static_cast<std::size_t>(dim);
    data_.assign(n, fill);
}

Tensor& Tensor::operator+=(const Tensor& o) {
    require_same_shape(*this, o, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
    require_same_shape(*this, o, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

Tensor& Tensor::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

double Tensor::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::fabs(x));
    return m;
}

double Tensor::norm() const { return std::sqrt(inner_product(*this, *this)); }

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Tensor Tensor::identity(int dim) {
    Tensor t(2, dim);
    for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
    return t;
}

Tensor Tensor::vector(const std::vector<double>& v) {
    Tensor t(1, static_cast<int>(v.size()));
    t.data_ = v;
    return t;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(double s, Tensor a) { return a *= s; }

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (a.order() != b.order() || a.dim() != b.dim())
        throw std::invalid_argument(std::string("tensor shape mismatch in ") + what);
}

double inner_product(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "inner_product");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a.flat(k) * b.flat(k);
    return s;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::fabs(a.flat(k) - b.flat(k)));
    return m;
}

static void require_order(const Tensor& a, int order, const char* what) {
    if (a.order() != order) throw std::invalid_argument(std::string("wrong tensor order in ") + what);
}

Tensor transpose(const Tensor& a) {
    require_order(a, 2, "transpose");
    const int d = a.dim();
    Tensor t(2, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(i, j) = a(j, i);
    return t;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_order(a, 2, "matmul");
    require_same_shape(a, b, "matmul");
    const int d = a.dim();
    Tensor t(2, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < d; ++j) t(i, j) += aik * b(k, j);
        }
    return t;
}

Tensor skew_part(const Tensor& a) { return 0.5 * (a - transpose(a)); }
Tensor sym_part(const Tensor& a) { return 0.5 * (a + transpose(a)); }

Tensor outer(const Tensor& a, const Tensor& b) {
    require_order(a, 1, "outer");
    require_same_shape(a, b, "outer");
    const int d = a.dim();
    Tensor t(2, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(i, j) = a(i) * b(j);
    return t;
}

Tensor wedge(const Tensor& a, const Tensor& b) { return outer(a, b) - outer(b, a); }

Tensor pullback(const Tensor& b, const Tensor& p) {
    require_order(b, 2, "pullback");
    require_same_shape(b, p, "pullback");
    // B(P e_x, P e_y) = sum_{a,c} P(a,x) P(c,y) B(a,c)
    return matmul(matmul(transpose(p), b), p);
}

Tensor apply(const Tensor& p, const Tensor& v) {
    require_order(p, 2, "apply");
    require_order(v, 1, "apply");
    const int d = p.dim();
    Tensor w(1, d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) w(k) += p(k, j) * v(j);
    return w;
}

Tensor TwoFormSplit::lambda11() const { return herm0 + f_part * F; }

Tensor TwoFormSplit::mixed() const {
    const int d = F.dim();
    Tensor eta(1, d);
    eta(d - 1) = 1.0;
    return wedge(eta, eta_wedge);
}

Tensor TwoFormSplit::reconstruct() const { return lambda11() + antiherm + mixed(); }

TwoFormSplit two_form_split(const Tensor& alpha, const Tensor& phi) {
    require_order(alpha, 2, "two_form_split");
    require_same_shape(alpha, phi, "two_form_split");
    const double scale = std::max(1.0, alpha.max_abs());
    if (max_abs_diff(alpha, -1.0 * transpose(alpha)) > 1e-12 * scale)
        throw std::invalid_argument("two_form_split: input is not skew-symmetric");
    const int d = alpha.dim();
    const int n2 = d - 1;
    const Tensor phi2 = matmul(phi, phi);
    const Tensor a_phi2 = pullback(alpha, phi2);
    const Tensor a_phi = pullback(alpha, phi);

    TwoFormSplit s;
    s.F = phi;  // F(e_i,e_j) = <e_i, phi e_j> = phi(i,j)
    const Tensor l11 = 0.5 * (a_phi2 + a_phi);
    s.antiherm = 0.5 * (a_phi2 - a_phi);
    s.f_part = inner_product(alpha, s.F) / static_cast<double>(n2);
    s.herm0 = l11 - s.f_part * s.F;
    s.eta_wedge = Tensor(1, d);
    for (int j = 0; j < n2; ++j) s.eta_wedge(j) = alpha(d - 1, j);
    return s;
}

}  // namespace acmlab
