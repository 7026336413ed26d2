#include "diracham/spin_rotations.hpp"

#include <cmath>
#include <string>

namespace diracham {

namespace {

const Complex kI{0.0, 1.0};

Complex ratio(const Complex& after, const Complex& before) { return after / before; }

std::string angle_text(double phi) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", phi);
  return buf;
}

}  // namespace

Matrix2c vector_to_matrix(const Vector4r& V) {
  Matrix2c v;
  v << Complex(V(0) + V(3)), Complex(V(1), -V(2)), Complex(V(1), V(2)), Complex(V(0) - V(3));
  return v;
}

Vector4r matrix_to_vector(const Matrix2c& v) {
  return {0.5 * (v(0, 0) + v(1, 1)).real(), 0.5 * (v(0, 1) + v(1, 0)).real(), 0.5 * (v(1, 0) - v(0, 1)).imag(),
          0.5 * (v(0, 0) - v(1, 1)).real()};
}

bool is_null(const Vector4r& V, double tol) {
  return std::abs(-V(0) * V(0) + V(1) * V(1) + V(2) * V(2) + V(3) * V(3)) <= tol;
}

Matrix4r rotation_z(double phi) {
  Matrix4r r = Matrix4r::Identity();
  r(1, 1) = std::cos(phi);
  r(1, 2) = std::sin(phi);
  r(2, 1) = -std::sin(phi);
  r(2, 2) = std::cos(phi);
  return r;
}

Matrix2c sl2c_z(double phi) {
  Matrix2c u = Matrix2c::Zero();
  u(0, 0) = std::exp(kI * (phi / 2));
  u(1, 1) = std::exp(-kI * (phi / 2));
  return u;
}

Matrix2c rotate_z(const Matrix2c& v, double phi) {
  const Matrix2c u = sl2c_z(phi);
  return u * v * u.adjoint();
}

HelicityPhases helicity_phases(double phi, Complex e1, Complex e2, Complex e11, Complex e12) {
  HelicityPhases out{};
  const Matrix2c u = sl2c_z(phi);
  // v = ψ_L ψ̄_R^T for the null vector ½(1,0,0,1)
  const Vector2c psi_l(1.0, 0.0);
  const Vector2c psibar_r(1.0, 0.0);
  Matrix2c eps;
  eps << 0.0, 1.0, -1.0, 0.0;
  const Matrix2c eps_inv = -eps;  // ε⁻¹ = −ε
  const Vector2c psi_l2 = u * psi_l;
  const Vector2c psibar_r2 = (psibar_r.transpose() * u.adjoint()).transpose();
  // ψ̄_R = εψ_R† ⇒ ψ_R = (ε⁻¹ψ̄_R)†, a row
  const Vector2c psi_r = (eps_inv * psibar_r).conjugate();
  const Vector2c psi_r2 = (eps_inv * psibar_r2).conjugate();
  out.spinor.psi_left = ratio(psi_l2(0), psi_l(0));
  out.spinor.psibar_right = ratio(psibar_r2(0), psibar_r(0));
  out.spinor.psi_right = ratio(psi_r2(1), psi_r(1));
  Eigen::Vector4cd dirac, dirac2;
  dirac << psi_l, psi_r;
  dirac2 << psi_l2, psi_r2;
  out.spinor.dirac = ratio(dirac2(0), dirac(0));
  out.spinor.dirac_residual = (dirac2 - out.spinor.dirac * dirac).cwiseAbs().maxCoeff();

  const Matrix4r r = rotation_z(phi);
  Eigen::Vector4cd e(0.0, e1, e2, 0.0);
  const Eigen::Vector4cd e_rot = r.cast<Complex>() * e;
  out.photon_plus = ratio(e_rot(1) - kI * e_rot(2), e(1) - kI * e(2));
  out.photon_minus = ratio(e_rot(1) + kI * e_rot(2), e(1) + kI * e(2));

  Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
  t(1, 1) = e11;
  t(1, 2) = e12;
  t(2, 1) = e12;
  t(2, 2) = -e11;
  const Eigen::Matrix4cd t_rot = r.cast<Complex>() * t * r.transpose().cast<Complex>();
  out.graviton_plus = ratio(t_rot(1, 1) - kI * t_rot(1, 2), e11 - kI * e12);
  out.graviton_minus = ratio(t_rot(1, 1) + kI * t_rot(1, 2), e11 + kI * e12);
  double gauge = (t_rot - t_rot.transpose()).cwiseAbs().maxCoeff();
  gauge = std::max(gauge, std::abs(t_rot.trace()));
  gauge = std::max(gauge, t_rot.row(0).cwiseAbs().maxCoeff());
  gauge = std::max(gauge, t_rot.row(3).cwiseAbs().maxCoeff());
  out.graviton_gauge_residual = gauge;
  return out;
}

Report verify_rotations(double phi) {
  Report rep;
  const std::string suite = "rotations(phi=" + angle_text(phi) + ")";
  const double tol = 1e-12;
  auto phase_check = [&](const std::string& name, Complex measured, Complex printed) {
    const double res = std::abs(measured - printed);
    rep.add(suite, name, res <= tol, res);
  };

  // the SL(2,C) conjugation against the SO(2) action on V
  const Vector4r V(0.7, -0.4, 1.3, 0.2);
  const Matrix2c via_su2 = rotate_z(vector_to_matrix(V), phi);
  const Matrix2c via_so2 = vector_to_matrix(rotation_z(phi) * V);
  const double route = (via_su2 - via_so2).cwiseAbs().maxCoeff();
  rep.add(suite, "sl2c_matches_vector_rotation", route <= tol, route);
  const Matrix2c v = vector_to_matrix(V);
  const double off = std::abs(via_su2(0, 1) - v(0, 1) * std::exp(kI * phi));
  rep.add(suite, "offdiagonal_phase", off <= tol, off);
  const double det = std::abs(via_su2.determinant() - v.determinant());
  rep.add(suite, "determinant_invariant", det <= tol, det);

  const auto h = helicity_phases(phi);
  const Complex half = std::exp(kI * (phi / 2));
  phase_check("psi_left_phase", h.spinor.psi_left, half);
  phase_check("psibar_right_phase", h.spinor.psibar_right, std::conj(half));
  phase_check("psi_right_phase", h.spinor.psi_right, half);
  phase_check("dirac_spinor_phase", h.spinor.dirac, half);
  rep.add(suite, "dirac_spinor_is_global_phase", h.spinor.dirac_residual <= tol, h.spinor.dirac_residual);
  phase_check("photon_plus_phase", h.photon_plus, std::exp(kI * phi));
  phase_check("photon_minus_phase", h.photon_minus, std::exp(-kI * phi));
  phase_check("graviton_plus_phase", h.graviton_plus, std::exp(2.0 * kI * phi));
  phase_check("graviton_minus_phase", h.graviton_minus, std::exp(-2.0 * kI * phi));
  rep.add(suite, "graviton_tt_gauge_preserved", h.graviton_gauge_residual <= tol, h.graviton_gauge_residual);

  // v′ rebuilt from the rotated spinor factors
  const Vector2c l = sl2c_z(phi) * Vector2c(1.0, 0.0);
  const Eigen::RowVector2cd rbar = Eigen::RowVector2cd(1.0, 0.0) * sl2c_z(phi).adjoint();
  const Matrix2c null_v = vector_to_matrix(Vector4r(0.5, 0.0, 0.0, 0.5));
  const double outer = (l * rbar - rotate_z(null_v, phi)).cwiseAbs().maxCoeff();
  rep.add(suite, "null_matrix_factorization", outer <= tol, outer);
  return rep;
}

}  // namespace diracham
