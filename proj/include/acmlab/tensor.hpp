#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace acmlab {

// Dense tensor over the orthonormal frame of R^dim. Every slot has the same
// dimension; entries are stored row-major (last index fastest).
class Tensor {
public:
    Tensor() = default;
    Tensor(int order, int dim, double fill = 0.0);

    int order() const { return order_; }
    int dim() const { return dim_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    template <class... I>
    double& operator()(I... idx) { return data_[offset({static_cast<int>(idx)...})]; }
    template <class... I>
    double operator()(I... idx) const { return data_[offset({static_cast<int>(idx)...})]; }

    double& flat(std::size_t k) { return data_[k]; }
    double flat(std::size_t k) const { return data_[k]; }

    Tensor& operator+=(const Tensor& o);
    Tensor& operator-=(const Tensor& o);
    Tensor& operator*=(double s);

    double max_abs() const;
    double norm() const;
    bool all_finite() const;

    static Tensor identity(int dim);
    static Tensor vector(const std::vector<double>& v);

private:
    std::size_t offset(std::initializer_list<int> idx) const {
        std::size_t off = 0;
        for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return off;
    }

    int order_ = 0;
    int dim_ = 0;
    std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(double s, Tensor a);

void require_same_shape(const Tensor& a, const Tensor& b, const char* what);

// Full contraction <A,B> = sum over all index tuples of A*B.
double inner_product(const Tensor& a, const Tensor& b);

// Max-abs of (a - b).
double max_abs_diff(const Tensor& a, const Tensor& b);

// Order-2 helpers.
Tensor transpose(const Tensor& a);
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor skew_part(const Tensor& a);
Tensor sym_part(const Tensor& a);

// Wedge of one-forms with the convention (a^b)(X,Y) = a(X)b(Y) - a(Y)b(X).
Tensor wedge(const Tensor& a, const Tensor& b);
Tensor outer(const Tensor& a, const Tensor& b);

// Pull back a bilinear form through an endomorphism P (P(k,j) = <P e_j, e_k>):
// returns B(PX, PY).
Tensor pullback(const Tensor& b, const Tensor& p);

// Apply an endomorphism matrix to a vector.
Tensor apply(const Tensor& p, const Tensor& v);

// U(n)-splitting of a two-form relative to an almost contact structure whose
// Reeb field is the last frame vector. phi(k,j) = <phi e_j, e_k>.
struct TwoFormSplit {
    double f_part = 0.0;  // coefficient of F
    Tensor herm0;         // trace-free Hermitian part on zeta-perp
    Tensor antiherm;      // anti-Hermitian part on zeta-perp
    Tensor eta_wedge;     // one-form beta with alpha_mixed = eta ^ beta
    Tensor F;             // the fundamental two-form used for the split

    Tensor lambda11() const;  // f_part * F + herm0
    Tensor mixed() const;     // eta ^ eta_wedge
    Tensor reconstruct() const;
};

TwoFormSplit two_form_split(const Tensor& alpha, const Tensor& phi);

}  // namespace acmlab
