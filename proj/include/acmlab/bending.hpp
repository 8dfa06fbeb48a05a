#pragma once

#include <string>
#include <vector>

#include "acmlab/harmonic.hpp"

namespace acmlab {

// A compatible structure on a fixed frame model: phi = g phi0 g^T, zeta = g zeta0
// with phi0 the standard structure and zeta0 = e_{2n}.
struct OrbitPoint {
    Tensor g;
    ACMStructure acm;
};

OrbitPoint orbit_point(int n, const Tensor& g);

// Rotated frame f_a = sum_b g(b,a) e_b, in which the structure is standard.
FrameModel body_model(const OrbitPoint& p, const FrameModel& m);

// Total-bending density 1/2 |xi|^2 (the volume factor is constant).
double bending(const OrbitPoint& p, const FrameModel& m);

// Variations are g -> g exp(t B) with B skew, B(k,j) = <B f_j, f_k> in the
// body frame. The first variation of the bending is
//   d/dt bending = <G, B> = sum_{j,k} G(j,k) B(j,k)
// with G = d* xi in the same index convention; G lies in the u(n)^perp
// block because d* xi does.
Tensor bending_gradient(const Analysis& a);

// Frame-constant variations only integrate by parts on unimodular algebras.
// In general div(e_i) = tr ad_{e_i}, and the exact first variation of the
// bending density is <G - xi_H, B> with H = sum_i tr(ad_{e_i}) e_i.
Tensor unimodular_defect(const FrameModel& m);  // the vector H
Tensor homogeneous_bending_gradient(const Analysis& a);
double directional_derivative(const OrbitPoint& p, const FrameModel& m, const Tensor& b);
double fd_directional_derivative(const OrbitPoint& p, const FrameModel& m, const Tensor& b, double h = 1e-5);

// Gradient assembled from finite differences along an orthonormal basis of the
// u(n)^perp block; used when the analytic gradient disagrees.
Tensor fd_gradient(const OrbitPoint& p, const FrameModel& m, double h = 1e-5);

// Matrix exponential (scaling and squaring).
Tensor expm(const Tensor& a);

// Orthonormal basis (Frobenius) of skew matrices in the u(n)^perp block.
std::vector<Tensor> m_block_basis(int n);
// Same for the stabilizer block u(n) x 1.
std::vector<Tensor> u_block_basis(int n);

struct FlowStep {
    double bending = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

struct StepResult {
    OrbitPoint point;
    double bending_before = 0.0;
    double bending_after = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
    bool decreased = false;
    bool stagnated = false;  // step fell below 1e-12 without decrease
};

// Gradient-descent step used as the fallback of the damped Newton flow.
// One Armijo step g <- g exp(-s G), halving s until the bending decreases
// enough or s < 1e-12. When `gradient` is given it replaces the analytic one.
StepResult flow_step(const OrbitPoint& p, const FrameModel& m, double step, const Tensor* gradient = nullptr);

struct FlowTrace {
    std::vector<FlowStep> steps;
    bool converged = false;
    bool stagnated = false;
    bool fd_fallback = false;
    double gradient_check = 0.0;              // d* xi against finite differences at the start
    double homogeneous_gradient_check = 0.0;  // d* xi - xi_H against finite differences
    std::string gradient_source;              // "d*xi", "homogeneous" or "finite-difference"
    OrbitPoint final;
    double final_bending = 0.0;
    double final_d_star_xi_norm = 0.0;
    bool final_harmonic_structure = false;
    bool monotone = true;
};

// Damped Newton iteration on the u(n)^perp block (Hessian from differences of
// the gradient) with Armijo backtracking; the gradient is d* xi when it passes
// the finite-difference check, else the homogeneous gradient, else finite
// differences. Stops when the gradient in use has norm <= gtol.
FlowTrace minimize_bending(const OrbitPoint& p0, const FrameModel& m, int max_iters = 200, double gtol = 1e-11);

}  // namespace acmlab
