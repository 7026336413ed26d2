// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "diracham/algebra_suite.hpp"
#include "diracham/commands.hpp"
#include "diracham/dirac_bergmann.hpp"
#include "diracham/dynamics.hpp"
#include "diracham/quantization.hpp"
#include "diracham/spin_rotations.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace diracham;
using Q = GaussianRational;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

struct Outcome {
  bool passed;
  std::string note;
};

DiracModel<Q> exact_model(int sites, const Q& hbar, const Q& c, Rational dx = Rational(1),
                          Representation rep = Representation::dirac) {
  return make_model<Q>(LatticeSpec(1, sites, dx), rep, hbar, c, Q(1));
}

std::string first_failure_text(const Report& r) {
  auto f = r.first_failure();
  return f ? f->suite + " / " + f->name : "";
}

Outcome gamma_criterion() {
  const auto t0 = Clock::now();
  Report r;
  for (auto rep : kAllRepresentations) {
    r.merge(gamma_report<Q>(rep, Fault::none));
    r.merge(gamma_report<Complex>(rep, Fault::none));
  }
  r.merge(pauli_report<Q>());
  r.merge(pauli_report<Complex>());
  const double t = seconds_since(t0);
  return {r.passed() && t < 1.0,
          std::to_string(r.size()) + " identities, " + sci(t) + " s " + first_failure_text(r)};
}

Outcome grassmann_criterion() {
  std::mt19937_64 rng(20240917);
  Report r = grassmann_report<Q>(rng, 500, 12);
  r.merge(grassmann_report<Complex>(rng, 500, 12));
  return {r.passed(), std::to_string(r.size()) + " checks over 500 samples " + first_failure_text(r)};
}

Outcome constraint_matrix_criterion() {
  bool ok = true;
  for (auto [hbar, c] : {std::pair{Q(1), Q(1)}, std::pair{Q(2), Q(3)}}) {
    const auto m = exact_model(8, hbar, c);
    const Q ihc = Q(0, 1) * hbar * c, i_hc = Q(0, 1) / (hbar * c);
    Matrix2<Q> a_sp, inv_sp, a_l, inv_l;
    a_sp << Q(0), -ihc, ihc, Q(0);
    inv_sp << Q(0), -i_hc, i_hc, Q(0);
    a_l << Q(0), -ihc, -ihc, Q(0);
    inv_l << Q(0), i_hc, i_hc, Q(0);
    for (Track t : kAllTracks) {
      Report checks;
      auto cm = constraint_matrix(build_constraints(build_momenta(t, LagrangianKind::hermitian, m)), m, &checks);
      const Matrix2<Q> a = t == Track::spinorial ? a_sp : t == Track::grassmann_left ? a_l : Matrix2<Q>(-a_l);
      const Matrix2<Q> inv = t == Track::spinorial ? inv_sp : t == Track::grassmann_left ? inv_l : Matrix2<Q>(-inv_l);
      ok = ok && checks.passed() && cm.a == a && cm.inverse == inv;
    }
  }
  return {ok, "8 sites, three tracks, hbar c in {1, 6}"};
}

Outcome canonical_criterion() {
  Report r;
  for (auto [hbar, c] : {std::pair{Q(1), Q(1)}, std::pair{Q(2), Q(3)}})
    for (Track t : kAllTracks) r.merge(verify_canonical_brackets(t, exact_model(3, hbar, c)));
  return {r.passed(), std::to_string(r.size()) + " bracket families " + first_failure_text(r)};
}

Outcome consistency_criterion() {
  Report r;
  for (Track t : kAllTracks) r.merge(run_consistency(t, exact_model(8, Q(2), Q(3))).report);
  r.merge(field_equations(exact_model(8, Q(2), Q(3))));
  const auto m = make_dynamics_model(LatticeSpec(1, 32, Rational(1, 10)), Representation::dirac, 1.0, 1.0, 1.0);
  const std::vector<double> k{2 * std::numbers::pi / 3.2};
  const auto pw = plane_wave(m, k);
  const double residual =
      (time_derivative(m, pw) + Complex(0.0, lattice_frequency(m, k)) * pw).cwiseAbs().maxCoeff();
  return {r.passed() && residual <= 1e-10,
          "plane-wave residual " + sci(residual) + " " + first_failure_text(r)};
}

Outcome reduction_criterion() {
  std::mt19937_64 rng(20240917);
  Report r;
  const auto m = exact_model(8, Q(2), Q(3));
  for (Track t : kAllTracks) {
    auto chart = reduced_chart(t, m);
    r.merge(verify_chart(chart, build_constraints(build_momenta(t, LagrangianKind::hermitian, m)), m));
    r.merge(verify_reduction(chart, m, rng, 200));
  }
  return {r.passed(), "200 samples per track " + first_failure_text(r)};
}

Outcome hamiltonian_criterion() {
  const auto m = make_dynamics_model(LatticeSpec(1, 16, Rational(1, 10)), Representation::weyl, 1.0, 1.0, 1.0);
  std::mt19937_64 rng(20240917);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    SpinorField psi(4, m.sites());
    for (int i = 0; i < m.sites(); ++i)
      for (int a = 0; a < 4; ++a) psi(a, i) = Complex(nd(rng), nd(rng));
    auto cmp = hamiltonian_comparison(m, on_shell_point(m, psi));
    const double scale = std::max(1.0, std::abs(cmp.h_r));
    worst = std::max({worst, std::abs(cmp.h_r - cmp.h_iz_chart) / scale, std::abs(cmp.divergence) / scale});
  }
  // the symbolic statement on an exact lattice
  const auto em = exact_model(4, Q(2), Q(3));
  auto chart = reduced_chart(Track::spinorial, em);
  auto hr = build_hamiltonian(Track::spinorial, HamiltonianKind::reduced, em, &chart);
  const bool symbolic =
      hr == chart.restrict_reduced(chart.to_chart(build_hamiltonian(Track::spinorial, HamiltonianKind::hermitian, em)));
  return {worst <= 1e-10 && symbolic, "100 configurations, worst relative residual " + sci(worst)};
}

Outcome quantization_criterion() {
  Report r;
  for (int sites : {1, 2})
    for (Track t : kAllTracks) r.merge(quantization_report(QuantizedField<Q>(t, exact_model(sites, Q(2), Q(3)))));
  return {r.passed(), std::to_string(r.size()) + " operator identities " + first_failure_text(r)};
}

Outcome dynamics_criterion() {
  const auto t0 = Clock::now();
  RunConfig cfg;
  cfg.command = "evolve";
  cfg.validate();
  auto res = run_evolve(cfg);
  const double t = seconds_since(t0);
  const auto& d = res.details;
  const double omega = d["omega_dispersion"], measured = d["omega_measured"], ratio = d["phase_error_ratio"];
  const double energy = d["trajectory"]["max_energy_drift"], norm = d["trajectory"]["max_norm_drift"];
  const bool ok = std::abs(measured - omega) <= 1e-6 * omega && energy <= 1e-8 && norm <= 1e-8 && ratio >= 12.0 &&
                  res.report.passed() && t < 60.0;
  return {ok, "|omega - dispersion| " + sci(std::abs(measured - omega)) + ", drifts " + sci(energy) + " " + sci(norm) + ", ratio " +
                  std::to_string(ratio) + ", " + sci(t) + " s"};
}

Outcome rotation_criterion() {
  Report r;
  for (double phi : {std::numbers::pi / 4, std::numbers::pi / 2, std::numbers::pi, 2 * std::numbers::pi})
    r.merge(verify_rotations(phi));
  const double cover = (sl2c_z(2 * std::numbers::pi) + Matrix2c::Identity()).cwiseAbs().maxCoeff();
  return {r.passed() && cover <= 1e-12, std::to_string(r.size()) + " checks, U(2 pi) = -I " + first_failure_text(r)};
}

Outcome fault_criterion() {
  RunConfig g;
  g.command = "verify-algebra";
  g.samples = 20;
  g.inject_fault = "gamma";
  g.validate();
  auto gf = run_verify_algebra(g).report.first_failure();
  RunConfig m;
  m.command = "bergmann";
  m.track = "spinorial";
  m.sites = 3;
  m.samples = 10;
  m.inject_fault = "momentum";
  m.validate();
  auto mf = run_bergmann(m).report.first_failure();
  const bool ok = gf && gf->name.find("clifford") != std::string::npos && mf && mf->name == "momentum_pi";
  return {ok, "gamma -> " + (gf ? gf->name : std::string("none")) + ", momentum -> " +
                  (mf ? mf->name : std::string("none"))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gamma algebra in every representation", gamma_criterion},
      {"Grassmann algebra and derivatives", grassmann_criterion},
      {"constraint matrices and inverses", constraint_matrix_criterion},
      {"canonical Dirac brackets", canonical_criterion},
      {"consistency and plane-wave solutions", consistency_criterion},
      {"Dirac bracket equals reduced Poisson bracket", reduction_criterion},
      {"reduced Hamiltonian on shell", hamiltonian_criterion},
      {"quantization recipe on 1 and 2 sites", quantization_criterion},
      {"lattice dynamics", dynamics_criterion},
      {"rotation phases and double cover", rotation_criterion},
      {"injected faults are named", fault_criterion},
  };
  int failures = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    Outcome o;
    try {
      o = criteria[n].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " " << n + 1 << " " << criteria[n].first << " (" << o.note << ")"
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
