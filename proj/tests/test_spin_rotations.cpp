#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diracham/spin_rotations.hpp"

#include <numbers>
#include <random>

using namespace diracham;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

void require_passed(const Report& r) {
  for (const auto& c : r.checks()) {
    INFO(c.suite << " / " << c.name << " residual " << c.residual);
    CHECK(c.passed);
  }
}

}  // namespace

TEST_CASE("vector and matrix forms round trip") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> nd;
  for (int n = 0; n < 100; ++n) {
    Vector4r V(nd(rng), nd(rng), nd(rng), nd(rng));
    Matrix2c v = vector_to_matrix(V);
    CHECK((matrix_to_vector(v) - V).cwiseAbs().maxCoeff() <= 1e-14);
    // det v is the Minkowski square V⁰² − |V|²
    const double minkowski = V(0) * V(0) - V.tail<3>().squaredNorm();
    CHECK(std::abs(v.determinant() - minkowski) <= 1e-12);
    CHECK((v - v.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(is_null(Vector4r(0.5, 0.0, 0.0, 0.5)));
  CHECK_FALSE(is_null(Vector4r(1.0, 0.0, 0.0, 0.5)));
}

TEST_CASE("the z rotation in both forms") {
  for (double phi : {kPi / 4, kPi / 2, kPi, 2 * kPi, 0.3}) {
    Matrix2c u = sl2c_z(phi);
    CHECK(std::abs(u(0, 0) - std::exp(kI * phi / 2.0)) <= 1e-15);
    CHECK(std::abs(u(1, 1) - std::exp(-kI * phi / 2.0)) <= 1e-15);
    CHECK(std::abs(u.determinant() - 1.0) <= 1e-14);
    const Matrix4r r = rotation_z(phi);
    CHECK((r.transpose() * r - Matrix4r::Identity()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(r(0, 0) == 1.0);
    CHECK(r(3, 3) == 1.0);
  }
}

TEST_CASE("printed helicity phases") {
  for (double phi : {kPi / 4, kPi / 2, kPi, 2 * kPi}) {
    auto h = helicity_phases(phi);
    CHECK(std::abs(h.spinor.psi_left - std::exp(kI * phi / 2.0)) <= 1e-12);
    CHECK(std::abs(h.spinor.psibar_right - std::exp(-kI * phi / 2.0)) <= 1e-12);
    CHECK(std::abs(h.spinor.psi_right - std::exp(kI * phi / 2.0)) <= 1e-12);
    CHECK(std::abs(h.photon_plus - std::exp(kI * phi)) <= 1e-12);
    CHECK(std::abs(h.photon_minus - std::exp(-kI * phi)) <= 1e-12);
    CHECK(std::abs(h.graviton_plus - std::exp(2.0 * kI * phi)) <= 1e-12);
    CHECK(std::abs(h.graviton_minus - std::exp(-2.0 * kI * phi)) <= 1e-12);
    require_passed(verify_rotations(phi));
  }
}

TEST_CASE("spinors see the double cover") {
  CHECK((sl2c_z(2 * kPi) + Matrix2c::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((sl2c_z(4 * kPi) - Matrix2c::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((rotation_z(2 * kPi) - Matrix4r::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
  // vectors are blind to the sign
  Matrix2c v = vector_to_matrix(Vector4r(0.7, -0.4, 1.3, 0.2));
  CHECK((rotate_z(v, 2 * kPi) - v).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(std::abs(helicity_phases(2 * kPi).spinor.dirac + 1.0) <= 1e-12);
}
