#pragma once

#include "acmlab/acm_structure.hpp"
#include "acmlab/frame_model.hpp"
#include "acmlab/torsion_split.hpp"

namespace acmlab {

struct HarmonicityReport {
    Tensor d_star_xi;       // <(d* xi) e_j, e_k> = -sum_i (nabla_{e_i} xi)_{e_i}
    Tensor d_star_xi_alt;   // -sum_i (nabla^U_{e_i} xi)_{e_i} - xi_{xi_{e_i} e_i}
    double d_star_xi_agreement = 0.0;
    double horizontal_residual = 0.0;  // max |<(d* xi) X, Y>|, X, Y orthogonal to zeta
    double zeta_residual = 0.0;        // max |<(d* xi) X, zeta>|
    double d_star_xi_norm = 0.0;

    Tensor nu;  // nu(X) = sum_i <xi_{e_i}, R_{e_i,X}>
    double nu_norm = 0.0;
    bool skew_torsion = false;  // xi_X Y = -xi_Y X, harmonic structure implies harmonic map

    Tensor ric_star;      // Ric*(X,Y) = sum_i <R_{e_i,X} phi e_i, phi Y>
    Tensor ric_star_alt;  // skew part of Ric*
    Tensor ric_star_zeta; // Ric*(zeta, .)
    double s_star = 0.0;
    double ac_einstein_residual = 0.0;

    Tensor laplacian_zeta;      // nabla* nabla zeta, from the second covariant derivative
    Tensor laplacian_zeta_alt;  // sum_i (nabla^U_{e_i} xi)_{e_i} zeta
    double laplacian_agreement = 0.0;
    double nabla_zeta_sq = 0.0;  // |nabla zeta|^2
    double reeb_residual = 0.0;  // |nabla* nabla zeta - |nabla zeta|^2 zeta|

    double tol = 1e-9;
    double scale = 1.0;  // tolerances are relative to max(1, |xi|^2)
    bool harmonic_structure = false;
    bool harmonic_map = false;
    bool reeb_harmonic = false;
    bool weakly_ac_einstein = false;
};

// Coefficients of the minimal connection nabla^U = nabla + xi.
Tensor minimal_connection(const Tensor& gamma, const Tensor& xi);

Tensor coderivative_torsion(const Tensor& xi, const Tensor& gamma);
Tensor coderivative_torsion_minimal(const Tensor& xi, const Tensor& gamma);

Tensor nu_sigma(const Tensor& xi, const Tensor& riemann);
Tensor star_ricci(const Tensor& riemann, const ACMStructure& acm);
Tensor rough_laplacian_zeta(const Tensor& nabla_eta, const Tensor& gamma);

HarmonicityReport harmonicity(const Connection& conn, const ACMStructure& acm, const Torsion& t, double tol = 1e-9);

// Everything computed for one normalized model.
struct Analysis {
    FrameModel model;
    ACMStructure acm;
    Connection conn;
    Torsion torsion;
    Tensor minimal;  // nabla^U coefficients
    ScalarInvariants inv;
    InvariantResiduals inv_res;
    TorsionComponents comps;
    ClassificationReport cls;
    HarmonicityReport harm;
};

Analysis analyze(const FrameModel& model, const ACMStructure& acm, double tol = 1e-9);

}  // namespace acmlab
