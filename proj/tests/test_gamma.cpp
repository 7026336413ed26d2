#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diracham/algebra_suite.hpp"
#include "diracham/gamma.hpp"

using namespace diracham;
using Q = GaussianRational;

namespace {

// Hand-written reference entries, row-major.
Matrix4<Q> literal(std::initializer_list<Q> entries) {
  Matrix4<Q> m;
  auto it = entries.begin();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = *it++;
  return m;
}

const Q I{Rational(0), Rational(1)};

}  // namespace

TEST_CASE("Dirac representation matches the printed blocks") {
  auto gs = build_gamma_set<Q>(Representation::dirac);
  CHECK(gs[0] == literal({1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1}));
  CHECK(gs[1] == literal({0, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 0}));
  CHECK(gs[2] == literal({0, 0, 0, -I, 0, 0, I, 0, 0, I, 0, 0, -I, 0, 0, 0}));
  CHECK(gs[3] == literal({0, 0, 1, 0, 0, 0, 0, -1, -1, 0, 0, 0, 0, 1, 0, 0}));
}

TEST_CASE("Weyl representation matches the printed blocks") {
  auto gs = build_gamma_set<Q>(Representation::weyl);
  CHECK(gs[0] == literal({0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0}));
  CHECK(gs[3] == literal({0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0}));
}

TEST_CASE("Majorana gammas are purely imaginary") {
  auto gs = build_gamma_set<Q>(Representation::majorana);
  for (int mu = 0; mu < 4; ++mu)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) CHECK(gs[mu](r, c).real() == 0);
}

TEST_CASE("Clifford and adjoint relations hold in every representation") {
  for (auto rep : kAllRepresentations) {
    CAPTURE(to_string(rep));
    CHECK(gamma_report<Q>(rep).passed());
    auto floating = gamma_report<Complex>(rep);
    CHECK(floating.passed());
    // the oracle: {γ^a, γ^b} = −2η^{ab} by direct multiplication
    auto gs = build_gamma_set<Q>(rep);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        Matrix4<Q> ac = gs[a] * gs[b] + gs[b] * gs[a];
        Q diag = a == b ? Q(a == 0 ? 2 : -2) : Q(0);
        CHECK(ac == Matrix4<Q>(Matrix4<Q>::Identity() * diag));
      }
  }
  CHECK(pauli_report<Q>().passed());
  CHECK(pauli_report<Complex>().passed());
}

TEST_CASE("a corrupted entry is caught and named") {
  for (auto rep : kAllRepresentations) {
    CAPTURE(to_string(rep));
    auto r = gamma_report<Q>(rep, Fault::gamma);
    REQUIRE_FALSE(r.passed());
    auto first = r.first_failure();
    REQUIRE(first);
    CHECK(first->name.rfind("clifford", 0) == 0);
    CHECK_FALSE(gamma_report<Complex>(rep, Fault::gamma).passed());
  }
}

TEST_CASE("representation names round-trip") {
  for (auto rep : kAllRepresentations) CHECK(representation_from_string(to_string(rep)) == rep);
  CHECK_THROWS(representation_from_string("chiral"));
}

TEST_CASE("slash is linear in the vector") {
  auto gs = build_gamma_set<Complex>(Representation::dirac);
  std::array<Complex, 4> p{1.5, -0.25, 2.0, 0.5};
  // p̸p̸ = −p² with p² = −p0² + p·p in the (−,+,+,+) metric
  const Complex p2 = -p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
  Matrix4<Complex> sq = slash(gs, p) * slash(gs, p);
  CHECK(max_norm(Matrix4<Complex>(sq + Matrix4<Complex>::Identity() * p2)) < 1e-14);
}
