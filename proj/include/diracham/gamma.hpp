#pragma once

#include "diracham/scalar.hpp"

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace diracham {

enum class Representation { dirac, weyl, majorana };

std::string to_string(Representation rep);
Representation representation_from_string(const std::string& name);
inline constexpr std::array<Representation, 3> kAllRepresentations{
    Representation::dirac, Representation::weyl, Representation::majorana};

template <class S>
using Matrix2 = Eigen::Matrix<S, 2, 2>;
template <class S>
using Matrix4 = Eigen::Matrix<S, 4, 4>;
template <class S>
using Vector4 = Eigen::Matrix<S, 4, 1>;

// Metric signature (-,+,+,+).
inline constexpr std::array<int, 4> kMetric{-1, 1, 1, 1};

template <class M>
auto dagger(const Eigen::MatrixBase<M>& m) {
  using S = typename M::Scalar;
  Eigen::Matrix<S, M::ColsAtCompileTime, M::RowsAtCompileTime> out(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(j, i) = conjugate(m(i, j));
  return out;
}

// Largest entry magnitude; zero exactly when every entry is zero.
template <class M>
double max_norm(const Eigen::MatrixBase<M>& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) best = std::max(best, magnitude(m(i, j)));
  return best;
}

template <class M>
bool all_zero(const Eigen::MatrixBase<M>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j))) return false;
  return true;
}

template <FieldScalar S>
struct PauliSet {
  std::array<Matrix2<S>, 3> sigma;
  Matrix2<S> identity;
};

template <FieldScalar S>
PauliSet<S> pauli_set() {
  const S i = imag_unit<S>();
  PauliSet<S> p;
  p.identity = Matrix2<S>::Identity();
  p.sigma[0] << S(0), S(1), S(1), S(0);
  p.sigma[1] << S(0), -i, i, S(0);
  p.sigma[2] << S(1), S(0), S(0), S(-1);
  return p;
}

template <FieldScalar S>
struct GammaSet {
  Representation representation;
  std::array<Matrix4<S>, 4> gamma;

  const Matrix4<S>& operator[](int a) const { return gamma[a]; }
  Matrix4<S>& operator[](int a) { return gamma[a]; }
};

namespace detail {
template <FieldScalar S>
Matrix4<S> blocks(const Matrix2<S>& a, const Matrix2<S>& b, const Matrix2<S>& c, const Matrix2<S>& d) {
  Matrix4<S> m;
  m.template topLeftCorner<2, 2>() = a;
  m.template topRightCorner<2, 2>() = b;
  m.template bottomLeftCorner<2, 2>() = c;
  m.template bottomRightCorner<2, 2>() = d;
  return m;
}
}  // namespace detail

template <FieldScalar S>
GammaSet<S> build_gamma_set(Representation rep) {
  const auto p = pauli_set<S>();
  const Matrix2<S> I = p.identity;
  const Matrix2<S> O = Matrix2<S>::Zero();
  const S i = imag_unit<S>();
  GammaSet<S> gs{rep, {}};
  switch (rep) {
    case Representation::dirac:
      gs[0] = detail::blocks<S>(I, O, O, -I);
      for (int mu = 1; mu <= 3; ++mu) gs[mu] = detail::blocks<S>(O, p.sigma[mu - 1], -p.sigma[mu - 1], O);
      break;
    case Representation::weyl:
      gs[0] = detail::blocks<S>(O, I, I, O);
      for (int mu = 1; mu <= 3; ++mu) gs[mu] = detail::blocks<S>(O, -p.sigma[mu - 1], p.sigma[mu - 1], O);
      break;
    case Representation::majorana: {
      const Matrix2<S>& s1 = p.sigma[0];
      const Matrix2<S>& s2 = p.sigma[1];
      const Matrix2<S>& s3 = p.sigma[2];
      gs[0] = detail::blocks<S>(O, s2, s2, O);
      gs[1] = detail::blocks<S>(i * s3, O, O, i * s3);
      gs[2] = detail::blocks<S>(O, -s2, s2, O);
      gs[3] = detail::blocks<S>(-i * s1, O, O, -i * s1);
      break;
    }
  }
  return gs;
}

template <FieldScalar S>
Matrix4<S> slash(const GammaSet<S>& gs, const std::array<S, 4>& v) {
  Matrix4<S> out = Matrix4<S>::Zero();
  for (int a = 0; a < 4; ++a) out += gs[a] * v[a];
  return out;
}

struct IdentityCheck {
  std::string representation;
  std::string identity;
  std::vector<int> indices;
  double residual_norm = 0.0;
  bool passed = true;
};

template <class M>
IdentityCheck make_identity_check(Representation rep, std::string identity, std::vector<int> indices,
                                  const Eigen::MatrixBase<M>& residual) {
  using S = typename M::Scalar;
  IdentityCheck c{to_string(rep), std::move(identity), std::move(indices), max_norm(residual), true};
  c.passed = is_exact_v<S> ? all_zero(residual) : c.residual_norm <= kFloatTolerance;
  return c;
}

// 16 residuals [g^a, g^b]_+ + 2 eta^{ab} I.
template <FieldScalar S>
std::vector<IdentityCheck> check_clifford(const GammaSet<S>& gs) {
  std::vector<IdentityCheck> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Matrix4<S> r = gs[a] * gs[b] + gs[b] * gs[a];
      if (a == b) r += Matrix4<S>::Identity() * S(2 * kMetric[a]);
      out.push_back(make_identity_check(gs.representation, "clifford", {a, b}, r));
    }
  return out;
}

template <FieldScalar S>
std::vector<IdentityCheck> check_adjoint_relations(const GammaSet<S>& gs) {
  std::vector<IdentityCheck> out;
  const Matrix4<S> I = Matrix4<S>::Identity();
  out.push_back(make_identity_check(gs.representation, "gamma0_unitary", {0},
                                    Matrix4<S>(dagger(gs[0]) * gs[0] - I)));
  for (int a = 0; a < 4; ++a)
    out.push_back(make_identity_check(gs.representation, "gamma0_adjoint_conjugation", {a},
                                      Matrix4<S>(gs[0] * dagger(gs[a]) * gs[0] - gs[a])));
  // hermiticity pattern: g0 hermitian, spatial gammas antihermitian
  for (int a = 0; a < 4; ++a) {
    Matrix4<S> r = a == 0 ? Matrix4<S>(dagger(gs[a]) - gs[a]) : Matrix4<S>(dagger(gs[a]) + gs[a]);
    out.push_back(make_identity_check(gs.representation, "hermiticity", {a}, r));
  }
  return out;
}

// [s^m, s^n] = 2i eps^{mn}_r s^r and hermiticity.
template <FieldScalar S>
std::vector<IdentityCheck> check_pauli(const PauliSet<S>& p) {
  std::vector<IdentityCheck> out;
  const S i = imag_unit<S>();
  auto eps = [](int a, int b, int c) { return (a - b) * (b - c) * (c - a) / 2; };
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      Matrix2<S> r = p.sigma[m] * p.sigma[n] - p.sigma[n] * p.sigma[m];
      for (int k = 0; k < 3; ++k) r -= p.sigma[k] * (S(2 * eps(m, n, k)) * i);
      IdentityCheck c{"pauli", "pauli_commutator", {m + 1, n + 1}, max_norm(r), true};
      c.passed = is_exact_v<S> ? all_zero(r) : c.residual_norm <= kFloatTolerance;
      out.push_back(std::move(c));
    }
    Matrix2<S> h = dagger(p.sigma[m]) - p.sigma[m];
    IdentityCheck c{"pauli", "pauli_hermiticity", {m + 1}, max_norm(h), true};
    c.passed = is_exact_v<S> ? all_zero(h) : c.residual_norm <= kFloatTolerance;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace diracham
