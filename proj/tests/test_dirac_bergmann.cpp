#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diracham/dirac_bergmann.hpp"

#include <random>

using namespace diracham;
using Q = GaussianRational;
using K = FieldKind;

namespace {

DiracModel<Q> model(const Q& hbar, const Q& c, int sites = 3, Representation rep = Representation::dirac) {
  return make_model<Q>(LatticeSpec(1, sites, Rational(1, 2)), rep, hbar, c, Q(1));
}

Matrix2<Q> mat(const Q& a, const Q& b, const Q& c, const Q& d) {
  Matrix2<Q> m;
  m << a, b, c, d;
  return m;
}

void require_passed(const Report& r) {
  for (const auto& c : r.checks()) {
    INFO(c.suite << " / " << c.name << ": " << c.detail);
    CHECK(c.passed);
  }
}

}  // namespace

TEST_CASE("momenta as tabulated") {
  const auto m = model(Q(2), Q(3));
  const Q i3 = Q(0, 3);  // iħc/2 with ħc = 6
  auto sp = build_momenta(Track::spinorial, LagrangianKind::hermitian, m);
  CHECK(sp.pi_coef == i3);
  CHECK(sp.pibar_coef == -i3);
  auto l = build_momenta(Track::grassmann_left, LagrangianKind::hermitian, m);
  CHECK(l.pi_coef == -i3);
  CHECK(l.pibar_coef == -i3);
  auto r = build_momenta(Track::grassmann_right, LagrangianKind::hermitian, m);
  CHECK(r.pi_coef == i3);
  CHECK(r.pibar_coef == i3);
  auto bd = build_momenta(Track::spinorial, LagrangianKind::bjorken_drell, m);
  CHECK(bd.pi_coef == Q(0, 6));
  CHECK(bd.pibar_coef == Q(0));
  CHECK_THROWS_AS(build_momenta(Track::grassmann_left, LagrangianKind::bjorken_drell, m), std::invalid_argument);
  for (Track t : kAllTracks) require_passed(verify_momenta(build_momenta(t, LagrangianKind::hermitian, m), m));
  require_passed(verify_momenta(bd, m));
}

TEST_CASE("a corrupted momentum is caught by name") {
  const auto m = model(Q(1), Q(1));
  auto table = build_momenta(Track::spinorial, LagrangianKind::hermitian, m);
  table.pi_coef = -table.pi_coef;
  auto r = verify_momenta(table, m);
  REQUIRE(r.first_failure());
  CHECK(r.first_failure()->name == "momentum_pi");
  CHECK(r.failures() == 1);
}

TEST_CASE("printed constraints") {
  for (Track t : kAllTracks) {
    const auto m = model(Q(2), Q(3));
    require_passed(verify_printed_constraints(build_constraints(build_momenta(t, LagrangianKind::hermitian, m)), m));
  }
}

TEST_CASE("constraint matrices as printed") {
  for (auto [hbar, c] : {std::pair{Q(1), Q(1)}, std::pair{Q(2), Q(3)}}) {
    const auto m = model(hbar, c);
    const Q ihc = Q(0, 1) * hbar * c;
    const Q i_hc = Q(0, 1) / (hbar * c);
    // oracle: {φ̄, φ} from the canonical brackets by hand, e.g. spinorial
    // {π − (iħc/2)ψ̄, π̄ + (iħc/2)ψ} = −(iħc/2)/v − (iħc/2)/v
    const Matrix2<Q> a_sp = mat(Q(0), -ihc, ihc, Q(0));
    const Matrix2<Q> a_l = mat(Q(0), -ihc, -ihc, Q(0));
    const Matrix2<Q> inv_sp = mat(Q(0), -i_hc, i_hc, Q(0));
    const Matrix2<Q> inv_l = mat(Q(0), i_hc, i_hc, Q(0));
    Report checks;
    auto cm = [&](Track t) {
      return constraint_matrix(build_constraints(build_momenta(t, LagrangianKind::hermitian, m)), m, &checks);
    };
    auto sp = cm(Track::spinorial), l = cm(Track::grassmann_left), r = cm(Track::grassmann_right);
    CHECK(sp.a == a_sp);
    CHECK(sp.inverse == inv_sp);
    CHECK(l.a == a_l);
    CHECK(l.inverse == inv_l);
    CHECK(r.a == Matrix2<Q>(-a_l));
    CHECK(r.inverse == Matrix2<Q>(-inv_l));
    require_passed(checks);
  }
}

TEST_CASE("eight-site constraint matrix keeps the delta structure") {
  const auto m = make_model<Q>(LatticeSpec(1, 8, Rational(1)), Representation::weyl, Q(1), Q(1), Q(1));
  for (Track t : kAllTracks) {
    Report checks;
    constraint_matrix(build_constraints(build_momenta(t, LagrangianKind::hermitian, m)), m, &checks);
    require_passed(checks);
  }
}

TEST_CASE("Legendre transform") {
  const auto m = model(Q(2), Q(3));
  for (Track t : kAllTracks) require_passed(legendre_check(t, m));
  // the printed Grassmann mass term is not the transform
  for (Track t : {Track::grassmann_left, Track::grassmann_right}) {
    auto printed = grassmann_hamiltonian_as_printed(t, m);
    auto r = legendre_check(t, m, std::optional{printed});
    CHECK_FALSE(r.passed());
  }
}

TEST_CASE("consistency fixes the multipliers") {
  for (auto rep : kAllRepresentations) {
    const auto m = model(Q(2), Q(3), 3, rep);
    for (Track t : kAllTracks) {
      auto res = run_consistency(t, m);
      require_passed(res.report);
      CHECK(res.residual_phi.size() == 12);
    }
  }
  require_passed(field_equations(model(Q(2), Q(3))));
}

TEST_CASE("spinorial multipliers are the Dirac velocities") {
  const auto m = model(Q(1), Q(1));
  auto res = run_consistency(Track::spinorial, m);
  for (int site = 0; site < 3; ++site)
    for (int a = 0; a < 4; ++a) {
      CHECK(res.multiplier_dpsi0[4 * site + a] == dirac_velocity(false, a, site, m, Statistics::commuting));
      CHECK(res.multiplier_dpsibar0[4 * site + a] == dirac_velocity(true, a, site, m, Statistics::commuting));
    }
}

TEST_CASE("canonical Dirac brackets") {
  for (auto [hbar, c] : {std::pair{Q(1), Q(1)}, std::pair{Q(2), Q(3)}}) {
    const auto m = model(hbar, c);
    for (Track t : kAllTracks) require_passed(verify_canonical_brackets(t, m));
  }
  // one entry by hand: {ψ, ψ̄}_D = −(i/ħc) δ/v in the spinorial track
  const auto m = model(Q(2), Q(3));
  const auto st = Statistics::commuting;
  CHECK(dirac_fo(field<Q>(st, K::psi, 1, 2), field<Q>(st, K::psibar, 1, 2), m) ==
        PhaseFunctional<Q>::constant(st, Q(0, -1) / Q(6) / m.volume));
}

TEST_CASE("reduced chart and reduction") {
  const auto m = model(Q(2), Q(3));
  std::mt19937_64 rng(17);
  for (Track t : kAllTracks) {
    auto cs = build_constraints(build_momenta(t, LagrangianKind::hermitian, m));
    auto chart = reduced_chart(t, m);
    require_passed(verify_chart(chart, cs, m));
    require_passed(verify_reduction(chart, m, rng, 40));
    // round trip through the chart
    auto f = random_functional<Q>(rng, statistics_of(t), {{K::psi, K::psibar, K::pi, K::pibar}, 2, 3, 2});
    CHECK(chart.to_original(chart.to_chart(f)) == f);
  }
}

TEST_CASE("reduced Hamiltonian") {
  const auto m = model(Q(2), Q(3));
  const Track t = Track::spinorial;
  auto chart = reduced_chart(t, m);
  auto hr = build_hamiltonian(t, HamiltonianKind::reduced, m, &chart);
  auto restrict = [&](const PhaseFunctional<Q>& h) { return chart.restrict_reduced(chart.to_chart(h)); };
  CHECK(hr == restrict(build_hamiltonian(t, HamiltonianKind::hermitian, m)));
  CHECK(hr == restrict(build_hamiltonian(t, HamiltonianKind::canonical, m)));
  for (const auto& x : hr.support()) CHECK((x.kind == K::psi1 || x.kind == K::pi1));
}
