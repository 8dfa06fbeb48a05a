#pragma once

#include <string>
#include <vector>

#include "acmlab/frame_model.hpp"
#include "acmlab/tensor.hpp"

namespace acmlab {

// Almost contact metric structure on a frame model. phi(k,j) = <phi e_j, e_k>,
// so F(i,j) = <e_i, phi e_j> coincides with phi as an array. After
// normalization the Reeb field is the last frame vector.
struct ACMStructure {
    int n = 1;
    Tensor phi;
    Tensor zeta;
    Tensor eta;
    Tensor F;

    int dim() const { return 2 * n + 1; }
    int z() const { return 2 * n; }
};

ACMStructure make_acm(const Tensor& phi, const Tensor& zeta);

// Block rotation by J on the pairs (e_{2i}, e_{2i+1}) (0-based), zeta = e_{2n}.
Tensor standard_phi(int n);
Tensor basis_vector(int dim, int k);

struct AcmDiagnostics {
    double phi_square = 0.0;     // |phi^2 + I - eta (x) zeta|
    double compatibility = 0.0;  // |<phi X, phi Y> - <X,Y> + eta(X) eta(Y)|
    double phi_zeta = 0.0;
    double eta_phi = 0.0;
    double zeta_unit = 0.0;
    double f_skew = 0.0;
    bool pass = false;
    std::vector<std::string> violated;
};

AcmDiagnostics validate_acm(const FrameModel& m, const Tensor& phi, const Tensor& zeta, double tol = 1e-12);

// Orthogonal matrix h with h e_last = zeta and det h = +1 (identity if zeta is
// already e_last).
Tensor frame_aligning(const Tensor& zeta);

struct NormalizedModel {
    FrameModel model;
    ACMStructure acm;
    Tensor frame;  // columns are the new frame in the old one
};

// Rotate the frame so that zeta becomes the last frame vector.
NormalizedModel normalize_frame(const FrameModel& m, const Tensor& phi, const Tensor& zeta);

struct Torsion {
    Tensor xi;         // xi(i,j,k) = <xi_{e_i} e_j, e_k>
    Tensor xi_second;  // same tensor from the second displayed formula
    Tensor nabla_eta;  // (nabla_{e_i} eta)(e_j); also <nabla_{e_i} zeta, e_j>
    Tensor nabla_F;    // (nabla_{e_i} F)(e_j, e_k)
    Tensor nabla_phi;  // <(nabla_{e_i} phi) e_j, e_k>
    double formula_agreement = 0.0;
};

Torsion intrinsic_torsion(const Connection& conn, const ACMStructure& acm);

// Independent route: xi_X = -(Gamma_X)_{m}, the projection of the connection
// form onto the complement of u(n) in so(2n+1).
Tensor torsion_from_connection(const Tensor& gamma, const ACMStructure& acm);

// Projection of a skew two-form onto the complement of u(n).
Tensor project_m(const Tensor& a, const ACMStructure& acm);
Tensor project_u(const Tensor& a, const ACMStructure& acm);

// Max-abs residual of phi xi_X Y + xi_X phi Y - eta(Y) phi xi_X zeta
// - eta(xi_X phi Y) zeta over all frame X, Y.
double membership_residual(const Tensor& xi, const ACMStructure& acm);

// Max-abs residual of skewness in the last two slots.
double skew_residual(const Tensor& xi);

struct ScalarInvariants {
    double d_star_eta = 0.0;
    double d_star_F_zeta = 0.0;
    Tensor d_star_F;          // one-form d*F
    bool has_theta = false;   // false for n = 1
    Tensor theta;             // Lee form (zero when absent)
    Tensor nabla_zeta_zeta;   // nabla_zeta zeta = -xi_zeta zeta
    Tensor trace_vec;         // xi_{e_i} e_i
    Tensor phi_trace_vec;     // xi_{e_i} phi e_i
};

ScalarInvariants scalar_invariants(const Torsion& t, const ACMStructure& acm);

// Residuals of the three identities tying the scalar invariants together.
struct InvariantResiduals {
    double lee = 0.0;
    double trace = 0.0;
    double phi_trace = 0.0;       // as displayed, with the term -phi nabla_zeta zeta
    double phi_trace_half = 0.0;  // with -1/2 phi nabla_zeta zeta instead
};
InvariantResiduals invariant_residuals(const ScalarInvariants& s, const ACMStructure& acm);

// Action of an endomorphism A (A(j,k) = <A e_j, e_k>) as a derivation on a
// covariant tensor: (A.T)(X_1,..) = -sum_s T(.., A X_s, ..).
Tensor derivation_action(const Tensor& a, const Tensor& t);

}  // namespace acmlab
