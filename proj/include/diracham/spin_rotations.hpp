#pragma once

#include "diracham/report.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <complex>

namespace diracham {

using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;
using Vector4r = Eigen::Vector4d;
using Matrix4r = Eigen::Matrix4d;

// v = V⁰I₂ + V^μσ^μ = [[V⁰+V³, V¹−iV²], [V¹+iV², V⁰−V³]]
Matrix2c vector_to_matrix(const Vector4r& V);
Vector4r matrix_to_vector(const Matrix2c& v);
bool is_null(const Vector4r& V, double tol = 1e-12);

// SO(2) rotation about z acting on (V⁰, V¹, V², V³).
Matrix4r rotation_z(double phi);
// U = diag(e^{iφ/2}, e^{−iφ/2})
Matrix2c sl2c_z(double phi);
// v′ = U v U†
Matrix2c rotate_z(const Matrix2c& v, double phi);

struct SpinorPhases {
  Complex psi_left;    // ψ_L′ = phase·ψ_L
  Complex psibar_right;  // ψ̄_R′ = phase·ψ̄_R
  Complex psi_right;   // ψ_R′ = phase·ψ_R, through ψ̄_R = εψ_R†
  Complex dirac;       // ψ′ = phase·ψ for ψ = (ψ_L, ψ_R^T)
  double dirac_residual;  // |ψ′ − phase·ψ|
};

struct HelicityPhases {
  SpinorPhases spinor;
  Complex photon_plus;
  Complex photon_minus;
  Complex graviton_plus;
  Complex graviton_minus;
  double graviton_gauge_residual;  // symmetry, trace, transversality of ε′
};

// Phases measured from the rotation action on the null vector ½(1,0,0,1),
// an EM polarization (0, e₁, e₂, 0) and a TT polarization tensor.
HelicityPhases helicity_phases(double phi, Complex e1 = {0.6, 0.2}, Complex e2 = {-0.3, 0.5},
                               Complex e11 = {0.4, -0.1}, Complex e12 = {0.25, 0.7});

// Every appendix statement at one angle against the printed phases.
Report verify_rotations(double phi);

}  // namespace diracham
