#pragma once

#include <string>

#include "acmlab/tensor.hpp"

namespace acmlab {

// Manifold of dimension 2n+1 given by an orthonormal frame with constant
// structure coefficients: [e_i, e_j] = sum_k c(i,j,k) e_k.
struct FrameModel {
    int n = 1;
    Tensor c;
    std::string label;

    int dim() const { return 2 * n + 1; }
};

FrameModel make_model(int n, std::string label = {});

struct ModelDiagnostics {
    double antisymmetry_residual = 0.0;
    double jacobi_residual = 0.0;
    bool finite = true;
    bool pass = false;
};

ModelDiagnostics validate_model(const FrameModel& m, double tol = 1e-10);

struct Connection {
    Tensor gamma;    // gamma(i,j,k) = <nabla_{e_i} e_j, e_k>
    Tensor riemann;  // R(i,j,k,l) = <R_{e_i,e_j} e_k, e_l>
    Tensor ricci;    // Ric(x,y) = sum_i R(x,i,y,i)
    double scalar = 0.0;
    Tensor weyl;
};

// Koszul formula in an orthonormal frame with constant coefficients.
Tensor levi_civita(const FrameModel& m);

// Curvature with the convention R_{X,Y} = nabla_{[X,Y]} - [nabla_X, nabla_Y],
// under which round spheres have R(X,Y,X,Y) > 0 and hyperbolic space has
// s* = -2n c^2.
Connection curvature_tensor(const FrameModel& m, const Tensor& gamma);
Connection connection(const FrameModel& m);

// Covariant derivative of a frame-constant covariant tensor using connection
// coefficients conn(i,j,k) = <D_{e_i} e_j, e_k>. The derivative slot is first.
Tensor covariant_derivative(const Tensor& t, const Tensor& conn);

// Change of orthonormal frame f_a = sum_b g(b,a) e_b; all covariant tensors
// transform with g in every slot.
Tensor transform_tensor(const Tensor& t, const Tensor& g);
FrameModel transform_model(const FrameModel& m, const Tensor& g);

// Residual of the second Bianchi identity for the given connection data.
double second_bianchi_residual(const Connection& conn);
double first_bianchi_residual(const Tensor& riemann);

}  // namespace acmlab
