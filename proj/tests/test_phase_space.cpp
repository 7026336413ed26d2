#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diracham/phase_space.hpp"
#include "diracham/random.hpp"

#include <random>

using namespace diracham;
using Q = GaussianRational;
using K = FieldKind;

namespace {

template <FieldScalar S>
DiracModel<S> model_1d(int sites, Rational dx, Representation rep = Representation::dirac) {
  return make_model<S>(LatticeSpec(1, sites, dx), rep, S(1), S(1), S(1));
}

FieldAtom at(K k, int a, int i) { return FieldAtom{k, a, i}; }

}  // namespace

TEST_CASE("commuting functionals keep adjoint-then-spinor order") {
  auto row = field<Q>(Statistics::commuting, K::psibar, 0, 0);
  auto col = field<Q>(Statistics::commuting, K::psi, 1, 0);
  CHECK_NOTHROW(row * col);
  CHECK_THROWS_AS(col * row, FactorOrderingError);
  CHECK_THROWS_AS(row * col * col, FactorOrderingError);
  CHECK_THROWS_AS(row + PhaseFunctional<Q>(Statistics::grassmann), std::invalid_argument);
}

TEST_CASE("grassmann monomials carry the reordering sign") {
  const auto st = Statistics::grassmann;
  auto a = field<Q>(st, K::psibar, 0, 0);
  auto b = field<Q>(st, K::psi, 0, 0);
  // stored sorted: psi before psibar
  CHECK((a * b).coefficient({at(K::psi, 0, 0), at(K::psibar, 0, 0)}) == Q(-1));
  CHECK((b * a).coefficient({at(K::psi, 0, 0), at(K::psibar, 0, 0)}) == Q(1));
  CHECK((a * b + b * a).is_zero());
  CHECK((b * b).is_zero());
  CHECK((a * b).parity() == Parity::even);
  CHECK(a.parity() == Parity::odd);
  CHECK((a + a * b).parity() == Parity::mixed);
}

TEST_CASE("evaluation multiplies atom values in order") {
  const auto st = Statistics::commuting;
  auto f = field<Q>(st, K::psibar, 0, 0, Q(2)) * field<Q>(st, K::psi, 1, 0) + PhaseFunctional<Q>::constant(st, Q(3));
  FieldConfig<Q> cfg(1);
  cfg.set(at(K::psibar, 0, 0), Q(Rational(1, 2), 1));
  cfg.set(at(K::psi, 1, 0), Q(4));
  CHECK(evaluate(f, cfg) == Q(3) + Q(2) * Q(Rational(1, 2), 1) * Q(4));
  FieldConfig<Q> missing(1);
  CHECK_THROWS_AS(evaluate(f, missing), MissingAtomError);
  CHECK_THROWS_AS(cfg.set(at(K::psi, 0, 1), Q(1)), std::out_of_range);
}

TEST_CASE("plain, left and right partial derivatives") {
  const auto g = Statistics::grassmann;
  auto x = field<Q>(g, K::psi, 0, 0), y = field<Q>(g, K::psibar, 0, 0), z = field<Q>(g, K::pi, 0, 0);
  auto xyz = x * y * z;
  // ∂^L/∂y (x y z) = −x z, ∂^R/∂y (x y z) = −x z, ∂^L/∂x = y z, ∂^R/∂x = y z
  CHECK(partial_derivative(xyz, at(K::psibar, 0, 0), DerivativeSide::left) == -(x * z));
  CHECK(partial_derivative(xyz, at(K::psibar, 0, 0), DerivativeSide::right) == -(x * z));
  CHECK(partial_derivative(xyz, at(K::psi, 0, 0), DerivativeSide::left) == y * z);
  CHECK(partial_derivative(xyz, at(K::psi, 0, 0), DerivativeSide::right) == y * z);
  auto xy = x * y;
  CHECK(partial_derivative(xy, at(K::psi, 0, 0), DerivativeSide::left) == y);
  CHECK(partial_derivative(xy, at(K::psi, 0, 0), DerivativeSide::right) == -y);

  const auto c = Statistics::commuting;
  auto f = field<Q>(c, K::psibar, 2, 0, Q(5)) * field<Q>(c, K::psi, 2, 0);
  CHECK(partial_derivative(f, at(K::psi, 2, 0), DerivativeSide::plain) == field<Q>(c, K::psibar, 2, 0, Q(5)));
  CHECK_THROWS_AS(partial_derivative(f, at(K::psi, 2, 0), DerivativeSide::left), std::invalid_argument);
  CHECK_THROWS_AS(partial_derivative(xy, at(K::psi, 0, 0), DerivativeSide::plain), std::invalid_argument);
  auto model = model_1d<Q>(3, Rational(1, 2));
  CHECK(functional_derivative(f, at(K::psi, 2, 0), DerivativeSide::plain, model.volume) ==
        field<Q>(c, K::psibar, 2, 0, Q(10)));
}

TEST_CASE("gradient agrees with per-atom derivatives") {
  std::mt19937_64 rng(7);
  RandomFunctionalSpec spec{{K::psi, K::psibar, K::pi, K::pibar}, 2, 4, 3};
  for (int n = 0; n < 50; ++n) {
    auto f = random_functional<Q>(rng, Statistics::grassmann, spec);
    for (auto side : {DerivativeSide::left, DerivativeSide::right}) {
      auto grad = gradient(f, side);
      for (const auto& x : f.support()) {
        auto d = partial_derivative(f, x, side);
        auto it = grad.find(x);
        CHECK((it == grad.end() ? d.is_zero() : it->second == d));
      }
    }
  }
}

TEST_CASE("slashed spatial derivative matches a matrix central difference") {
  for (auto rep : kAllRepresentations) {
    auto model = model_1d<Complex>(5, Rational(1, 4), rep);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    Eigen::Matrix<Complex, 4, Eigen::Dynamic> psi(4, 5), bar(4, 5);
    FieldConfig<Complex> cfg(5);
    for (int i = 0; i < 5; ++i)
      for (int a = 0; a < 4; ++a) {
        psi(a, i) = Complex(nd(rng), nd(rng));
        bar(a, i) = Complex(nd(rng), nd(rng));
        cfg.set(at(K::psi, a, i), psi(a, i));
        cfg.set(at(K::psibar, a, i), bar(a, i));
      }
    const auto& g1 = model.gammas[1];
    for (int i = 0; i < 5; ++i) {
      const int f = (i + 1) % 5, b = (i + 4) % 5;
      Eigen::Vector4cd want = g1 * (psi.col(f) - psi.col(b)) / (2.0 * 0.25);
      Eigen::RowVector4cd want_bar = (bar.col(f) - bar.col(b)).transpose() * g1 / (2.0 * 0.25);
      for (int a = 0; a < 4; ++a) {
        auto s = slashed_spatial_derivative(K::psi, a, i, model, Statistics::commuting);
        auto sb = slashed_spatial_derivative(K::psibar, a, i, model, Statistics::commuting);
        CHECK(std::abs(evaluate(s, cfg) - want(a)) < 1e-12);
        CHECK(std::abs(evaluate(sb, cfg) - want_bar(a)) < 1e-12);
      }
    }
  }
}

TEST_CASE("two sites collapse the stencil") {
  auto model = model_1d<Q>(2, Rational(1));
  for (int a = 0; a < 4; ++a) CHECK(slashed_spatial_derivative(K::psi, a, 0, model, Statistics::commuting).is_zero());
}

TEST_CASE("substitution and lattice pairing") {
  const auto c = Statistics::commuting;
  auto model = model_1d<Q>(3, Rational(1, 2));
  auto pairing = lattice_pairing(K::pi, K::psi, model, c);
  CHECK(pairing.terms().size() == 12);
  CHECK(pairing.coefficient({at(K::pi, 2, 1), at(K::psi, 2, 1)}) == Q(Rational(1, 2)));
  auto sub = substitute<Q>(pairing, [&](const FieldAtom& x) -> std::optional<PhaseFunctional<Q>> {
    if (x.kind == K::pi) return field<Q>(c, K::psibar, x.component, x.site, Q(0, 2));
    return std::nullopt;
  });
  CHECK(sub == lattice_pairing(K::psibar, K::psi, model, c, Q(0, 2)));
  CHECK_THROWS_AS(substitute<Q>(pairing,
                                [&](const FieldAtom& x) -> std::optional<PhaseFunctional<Q>> {
                                  if (x.kind == K::pi) return field<Q>(c, K::psi, x.component, x.site);
                                  return std::nullopt;
                                }),
                  FactorOrderingError);
}

TEST_CASE("model rejects unphysical constants") {
  LatticeSpec lat(1, 3, Rational(1));
  CHECK_THROWS_AS(make_model<Q>(lat, Representation::dirac, Q(0), Q(1), Q(1)), std::invalid_argument);
  CHECK_THROWS_AS(make_model<Q>(lat, Representation::dirac, Q(1), Q(0, 1), Q(1)), std::invalid_argument);
  CHECK_THROWS_AS(make_model<Q>(lat, Representation::dirac, Q(1), Q(1), Q(-1)), std::invalid_argument);
}
