#include "diracham/commands.hpp"

#include "diracham/algebra_suite.hpp"
#include "diracham/dirac_bergmann.hpp"
#include "diracham/dynamics.hpp"
#include "diracham/quantization.hpp"
#include "diracham/random.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace diracham {

namespace {

using Exact = GaussianRational;
using json = nlohmann::ordered_json;

Report prefixed(const Report& r, const std::string& prefix) {
  Report out;
  for (auto c : r.checks()) {
    c.suite = prefix + "/" + c.suite;
    out.add(std::move(c));
  }
  return out;
}

template <FieldScalar S>
DiracModel<S> model_from(const RunConfig& cfg, Representation rep) {
  return make_model<S>(cfg.lattice(), rep, from_text<S>(cfg.hbar), from_text<S>(cfg.c), from_text<S>(cfg.mass));
}

template <class M>
json matrix_json(const Eigen::MatrixBase<M>& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(scalar_text(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

std::string scope_name(const RunConfig& cfg, Representation rep, const std::string& rest) {
  return cfg.representations().size() > 1 ? to_string(rep) + "/" + rest : rest;
}

// ------------------------------------------------------------ verify-algebra

template <FieldScalar S>
Report gamma_suite(Representation rep, Fault fault, const std::string& backend) {
  return prefixed(gamma_report<S>(rep, fault), "gamma[" + backend + "]");
}

// ----------------------------------------------------------------- bergmann

// The matrices as printed: spinorial A = [[0, −iħc], [iħc, 0]], Grassmann
// A^L = [[0, −iħc], [−iħc, 0]] = −A^R, with the inverses printed alongside.
template <FieldScalar S>
std::pair<Matrix2<S>, Matrix2<S>> printed_constraint_matrix(Track t, const DiracModel<S>& model) {
  const S i = imag_unit<S>();
  const S hc = model.hbar_c();
  Matrix2<S> a, inv;
  switch (t) {
    case Track::spinorial:
      a << S(0), -(i * hc), i * hc, S(0);
      inv << S(0), -(i / hc), i / hc, S(0);
      break;
    case Track::grassmann_left:
      a << S(0), -(i * hc), -(i * hc), S(0);
      inv << S(0), i / hc, i / hc, S(0);
      break;
    case Track::grassmann_right:
      a << S(0), i * hc, i * hc, S(0);
      inv << S(0), -(i / hc), -(i / hc), S(0);
      break;
  }
  return {a, inv};
}

// {F, H} in the direction that gives ∂̸₀F (see evolution()).
template <FieldScalar S>
PhaseFunctional<S> dirac_evolution(Track t, const PhaseFunctional<S>& f, const PhaseFunctional<S>& h,
                                   const DiracModel<S>& model) {
  return t == Track::grassmann_right ? track_dirac(t, h, f, model) : track_dirac(t, f, h, model);
}

template <FieldScalar S>
Report bergmann_track(Track t, const DiracModel<S>& model, Fault fault, std::mt19937_64& rng, int samples,
                      json& d) {
  using K = FieldKind;
  Report r;
  const Statistics st = statistics_of(t);

  auto momenta = build_momenta(t, LagrangianKind::hermitian, model);
  if (fault == Fault::momentum) momenta.pi_coef = -momenta.pi_coef;
  r.merge(verify_momenta(momenta, model));
  d["momenta"] = {{"pi", scalar_text(momenta.pi_coef) + " psibar"}, {"pibar", scalar_text(momenta.pibar_coef) + " psi"}};

  // the rest of the pipeline runs on the derived momenta
  auto cs = build_constraints(build_momenta(t, LagrangianKind::hermitian, model));
  r.merge(verify_printed_constraints(cs, model));
  d["constraints"] = {{"phibar", to_string(cs.phibar(0, 0))}, {"phi", to_string(cs.phi(0, 0))}};

  r.merge(legendre_check(t, model));
  if (t != Track::spinorial) {
    // the printed Grassmann mass term fails the Legendre transform
    auto printed = legendre_check(t, model, std::optional(grassmann_hamiltonian_as_printed(t, model)));
    r.add("legendre", "printed_hamiltonian_is_not_legendre_transform", !printed.passed());
  }

  auto cm = constraint_matrix(cs, model, &r);
  auto [printed_a, printed_inv] = printed_constraint_matrix(t, model);
  r.add("constraint_matrix", "A_matches_printed", matrices_match(cm.a, printed_a));
  r.add("constraint_matrix", "inverse_matches_printed", matrices_match(cm.inverse, printed_inv));
  if (t == Track::grassmann_right) {
    auto left = constraint_matrix(build_constraints(build_momenta(Track::grassmann_left, LagrangianKind::hermitian, model)), model);
    r.add("constraint_matrix", "A_R_equals_minus_A_L", matrices_match(cm.a, Matrix2<S>(-left.a)));
  }
  d["A"] = matrix_json(cm.a);
  d["A_inverse"] = matrix_json(cm.inverse);
  d["matrix_unit"] = "delta_ab delta_ij / v";

  auto cons = run_consistency(t, model);
  r.merge(cons.report);
  json mult = json::object();
  for (int a = 0; a < 4; ++a) {
    mult["dpsi0_" + std::to_string(a) + "(0)"] = to_string(cons.multiplier_dpsi0[a]);
    mult["dpsibar0_" + std::to_string(a) + "(0)"] = to_string(cons.multiplier_dpsibar0[a]);
  }
  d["multipliers"] = mult;
  if (t == Track::spinorial) {
    d["residuals"] = {{"phibar_0(0)", to_string(cons.residual_phibar[0])}, {"phi_0(0)", to_string(cons.residual_phi[0])}};
  }

  // ∂̸₀f ≈ {f, H_P}_D ≈ {f, H_P} with the solved multipliers
  auto hp = build_hamiltonian(t, HamiltonianKind::primary, model);
  bool weak_ok = true;
  std::string weak_detail;
  for (int site = 0; site < model.sites(); ++site)
    for (int a = 0; a < 4; ++a)
      for (K k : {K::psi, K::psibar, K::pi, K::pibar}) {
        auto f = field<S>(st, k, a, site);
        auto via_dirac = on_shell(dirac_evolution(t, f, hp, model), cs);
        auto via_poisson = on_shell(evolution(t, f, cons.primary_solved, model), cs);
        if (!functionals_match(via_dirac, via_poisson)) {
          if (weak_ok) weak_detail = to_string(FieldAtom{k, a, site});
          weak_ok = false;
        }
      }
  r.add("consistency", "dirac_bracket_evolution_matches_weakly", weak_ok, 0.0, weak_detail);

  RandomFunctionalSpec spec{{K::psi, K::psibar, K::pi, K::pibar}, std::min(model.sites(), 2), 3, 2};
  bool closed_ok = true;
  for (int n = 0; n < std::max(1, samples / 10); ++n) {
    auto f = random_functional<S>(rng, st, spec);
    auto g = random_functional<S>(rng, st, spec);
    closed_ok = closed_ok && functionals_match(track_dirac(t, f, g, model), dirac_via_constraints(f, g, cs, cm, model));
  }
  r.add("dirac_bracket", "closed_form_matches_definition", closed_ok);

  r.merge(verify_canonical_brackets(t, model));
  json table = json::array();
  for (const auto& e : canonical_table(t, model))
    table.push_back({{"bracket", e.label}, {"coefficient", scalar_text(e.expected)}});
  d["canonical_dirac_brackets"] = table;

  auto chart = reduced_chart(t, model);
  r.merge(verify_chart(chart, cs, model));
  r.merge(verify_reduction(chart, model, rng, samples));
  d["chart"] = {{"forward", matrix_json(chart.forward)},
                {"old", {"psi", "pibar", "psibar", "pi"}},
                {"new", {"psi1", "psi2", "pi1", "pi2"}}};

  if (t == Track::spinorial) {
    r.merge(field_equations(model));
    auto hc = build_hamiltonian(t, HamiltonianKind::canonical, model);
    auto constraint_part = detail::lattice_sum(model, st, [&](int a, int s) {
      return cs.phibar(a, s) * field<S>(st, K::dpsi0, a, s) + field<S>(st, K::dpsibar0, a, s) * cs.phi(a, s);
    });
    r.add("hamiltonian", "primary_minus_canonical_is_constraint_combination", functionals_match(hp - hc, constraint_part));
    auto hr = build_hamiltonian(t, HamiltonianKind::reduced, model, &chart);
    auto restrict = [&](const PhaseFunctional<S>& h) { return chart.restrict_reduced(chart.to_chart(h)); };
    r.add("hamiltonian", "reduced_equals_canonical_on_chart", functionals_match(hr, restrict(hc)));
    r.add("hamiltonian", "reduced_equals_hermitian_on_chart",
          functionals_match(hr, restrict(build_hamiltonian(t, HamiltonianKind::hermitian, model))));
    // H_BD(ψ₁, π₁): the divergence ½∂̸(π₁ψ₁) telescopes on the periodic lattice
    auto bd = substitute<S>(build_hamiltonian(t, HamiltonianKind::bjorken_drell, model),
                            [&](const FieldAtom& x) -> std::optional<PhaseFunctional<S>> {
                              if (x.kind == K::psi) return field<S>(st, K::psi1, x.component, x.site);
                              if (x.kind == K::pi) return field<S>(st, K::pi1, x.component, x.site);
                              return std::nullopt;
                            });
    r.add("hamiltonian", "reduced_equals_bjorken_drell_after_summation", functionals_match(hr, bd));
  }
  return r;
}

// ------------------------------------------------------------------ quantize

template <FieldScalar S>
Report quantize_track(Track t, const DiracModel<S>& model, std::mt19937_64& rng, json& d) {
  using K = FieldKind;
  QuantizedField<S> q(t, model);
  std::vector<QuantizationVerdict<S>> verdicts;
  Report r = quantization_report(q, &verdicts);
  json list = json::array();
  for (const auto& v : verdicts)
    list.push_back({{"pair", v.pair},
                    {"classical_coefficient", scalar_text(v.classical_value)},
                    {"recipe", v.recipe},
                    {"operator_residual", v.operator_residual_norm},
                    {"passed", v.passed}});
  d["recipe"] = recipe_text(t);
  d["verdicts"] = list;
  if (t == Track::spinorial) {
    RandomFunctionalSpec spec{{K::psi, K::psibar, K::pi, K::pibar}, model.sites(), 4, 2};
    auto bilinear = [&] {
      auto f = random_functional<S>(rng, Statistics::commuting, spec);
      PhaseFunctional<S> out(Statistics::commuting);
      for (const auto& [m, c] : f.terms())
        if (m.size() != 1) out.add_term(m, c);
      return out;
    };
    for (int n = 0; n < 3; ++n) {
      auto rep = leibniz_quantization_check(q, bilinear(), bilinear());
      for (auto c : rep.checks()) {
        c.suite = "quantization/spinorial/" + c.suite;
        c.name += "#" + std::to_string(n);
        r.add(std::move(c));
      }
    }
  }
  return r;
}

json field_json(const SpinorField& psi) {
  json sites = json::array();
  for (int i = 0; i < psi.cols(); ++i) {
    json comps = json::array();
    for (int a = 0; a < 4; ++a) comps.push_back({psi(a, i).real(), psi(a, i).imag()});
    sites.push_back(comps);
  }
  return sites;
}

}  // namespace

CommandResult run_verify_algebra(const RunConfig& cfg) {
  CommandResult res;
  const Fault fault = cfg.fault();
  for (auto rep : cfg.representations()) {
    res.report.merge(gamma_suite<Exact>(rep, fault, "exact"));
    res.report.merge(gamma_suite<Complex>(rep, fault, "float"));
  }
  res.report.merge(pauli_report<Exact>());
  std::mt19937_64 rng(cfg.seed);
  res.report.merge(grassmann_report<Exact>(rng, cfg.effective_samples()));
  res.details["grassmann_samples"] = cfg.effective_samples();
  res.details["representations"] = json::array();
  for (auto rep : cfg.representations()) res.details["representations"].push_back(to_string(rep));
  return res;
}

CommandResult run_bergmann(const RunConfig& cfg) {
  CommandResult res;
  std::mt19937_64 rng(cfg.seed);
  for (auto rep : cfg.representations()) {
    auto model = model_from<Exact>(cfg, rep);
    for (auto t : cfg.tracks()) {
      const std::string scope = scope_name(cfg, rep, to_string(t));
      json d = json::object();
      res.report.merge(prefixed(bergmann_track(t, model, cfg.fault(), rng, cfg.effective_samples(), d), scope));
      res.details[scope] = d;
    }
  }
  return res;
}

CommandResult run_quantize(const RunConfig& cfg) {
  CommandResult res;
  std::mt19937_64 rng(cfg.seed);
  for (auto rep : cfg.representations()) {
    auto model = model_from<Exact>(cfg, rep);
    for (auto t : cfg.tracks()) {
      json d = json::object();
      Report r = quantize_track(t, model, rng, d);
      res.report.merge(cfg.representations().size() > 1 ? prefixed(r, to_string(rep)) : r);
      res.details[scope_name(cfg, rep, to_string(t))] = d;
    }
  }
  return res;
}

CommandResult run_evolve(const RunConfig& cfg) {
  CommandResult res;
  const auto rep = cfg.representations().front();
  const auto model = make_dynamics_model(cfg.lattice(), rep, static_cast<double>(parse_rational(cfg.hbar)),
                                         static_cast<double>(parse_rational(cfg.c)),
                                         static_cast<double>(parse_rational(cfg.mass)));
  const double length = model.lattice.sites_per_axis() * model.lattice.spacing();
  std::vector<double> k(model.lattice.dimension(), 0.0);
  k[0] = 2.0 * std::numbers::pi * cfg.k_mode / length;
  const bool wave = cfg.initial == "plane-wave";
  const SpinorField initial = wave ? plane_wave(model, k) : SpinorField::Zero(4, model.sites());

  EvolveOptions opts;
  opts.dt = cfg.effective_dt();
  opts.steps = cfg.steps;
  opts.record_every = cfg.record_every;
  const Trajectory traj = evolve(model, initial, opts);
  const double total_time = opts.dt * opts.steps;
  Report& r = res.report;
  const std::string suite = "evolve";

  double worst_residual = 0.0;
  for (const auto& d : traj.diagnostics) worst_residual = std::max(worst_residual, d.constraint_residual);
  r.add(suite, "constraints_hold_on_trajectory", worst_residual <= 1e-12, worst_residual);
  r.add(suite, "energy_drift", traj.max_energy_drift <= 1e-8, traj.max_energy_drift);
  r.add(suite, "norm_drift", traj.max_norm_drift <= 1e-8, traj.max_norm_drift);

  const auto cmp = hamiltonian_comparison(model, on_shell_point(model, traj.final_state));
  const double scale = std::max(1.0, std::abs(cmp.h_r));
  r.add(suite, "reduced_equals_hermitian_on_chart", std::abs(cmp.h_r - cmp.h_iz_chart) <= 1e-10 * scale,
        std::abs(cmp.h_r - cmp.h_iz_chart) / scale);
  r.add(suite, "divergence_term_vanishes", std::abs(cmp.divergence) <= 1e-10 * scale, std::abs(cmp.divergence) / scale);
  r.add(suite, "reduced_equals_bjorken_drell", std::abs(cmp.h_r - cmp.h_bd) <= 1e-10 * scale,
        std::abs(cmp.h_r - cmp.h_bd) / scale);

  json d = json::object();
  d["k"] = k;
  if (wave) {
    const double omega = lattice_frequency(model, k);
    const double energy0 = traj.diagnostics.front().energy;
    const double hbar_omega = to_real(model.hbar) * omega;
    r.add(suite, "plane_wave_energy_is_hbar_omega", std::abs(energy0 - hbar_omega) <= 1e-10 * hbar_omega,
          std::abs(energy0 - hbar_omega) / hbar_omega);
    d["omega_dispersion"] = omega;
    if (opts.steps > 0) {
      const double measured = -traj.accumulated_phase / total_time;
      const double rel = std::abs(measured - omega) / omega;
      r.add(suite, "frequency_matches_dispersion", rel <= 1e-6, rel);
      d["omega_measured"] = measured;
      // same final time at dt/2
      EvolveOptions half = opts;
      half.dt = opts.dt / 2;
      half.steps = 2 * opts.steps;
      half.record_every = half.steps;
      const Trajectory fine = evolve(model, initial, half);
      const double err = std::abs(traj.accumulated_phase + omega * total_time);
      const double err_half = std::abs(fine.accumulated_phase + omega * total_time);
      d["phase_error"] = err;
      d["phase_error_half_dt"] = err_half;
      d["phase_error_ratio"] = err_half > 0.0 ? err / err_half : 0.0;
    }
  } else {
    const double moved = traj.final_state.cwiseAbs().maxCoeff();
    r.add(suite, "static_trajectory", moved == 0.0, moved);
  }
  d["h_r"] = cmp.h_r.real();
  d["trajectory"] = to_json(traj);
  d["final_state"] = field_json(traj.final_state);
  res.details = d;
  res.table = diagnostics_table(traj);
  return res;
}

CommandResult run_command(const RunConfig& cfg) {
  if (cfg.command == "verify-algebra") return run_verify_algebra(cfg);
  if (cfg.command == "bergmann") return run_bergmann(cfg);
  if (cfg.command == "evolve") return run_evolve(cfg);
  if (cfg.command == "quantize") return run_quantize(cfg);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

nlohmann::ordered_json report_document(const RunConfig& cfg, const CommandResult& result) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["command"] = cfg.command;
  doc["config"] = cfg.to_json();
  doc["passed"] = result.report.passed();
  doc["failures"] = result.report.failures();
  if (auto f = result.report.first_failure())
    doc["first_failure"] = {{"suite", f->suite}, {"name", f->name}, {"detail", f->detail}};
  else
    doc["first_failure"] = nullptr;
  doc["checks"] = result.report.to_json();
  doc["details"] = result.details;
  return doc;
}

std::string summary_text(const RunConfig& cfg, const CommandResult& result) {
  std::map<std::string, std::pair<int, int>> suites;  // passed, total
  std::vector<std::string> order;
  for (const auto& c : result.report.checks()) {
    auto [it, fresh] = suites.try_emplace(c.suite, 0, 0);
    if (fresh) order.push_back(c.suite);
    it->second.first += c.passed;
    it->second.second += 1;
  }
  std::ostringstream os;
  os << cfg.command << ": " << result.report.size() - result.report.failures() << "/" << result.report.size()
     << " checks passed\n";
  for (const auto& s : order)
    os << "  " << (suites[s].first == suites[s].second ? "ok   " : "FAIL ") << s << " (" << suites[s].first << "/"
       << suites[s].second << ")\n";
  if (auto f = result.report.first_failure()) {
    os << "first failure: " << f->suite << " / " << f->name;
    if (!f->detail.empty()) os << ": " << f->detail;
    os << "\n";
  }
  if (cfg.command == "evolve" && result.details.contains("omega_measured")) {
    os.precision(12);
    os << "omega measured " << result.details["omega_measured"].get<double>() << ", dispersion "
       << result.details["omega_dispersion"].get<double>() << "\n";
  }
  return os.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirac-Bergmann verification engine and lattice Dirac simulator"};
  app.name("diracham");
  RunConfig cfg;
  app.add_option("command", cfg.command, "verify-algebra | bergmann | evolve | quantize")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.set_config("--config", "", "key = value file; command-line flags override it");
  app.add_option("--track", cfg.track, "spinorial | grassmann-l | grassmann-r | all");
  app.add_option("--rep", cfg.rep, "dirac | weyl | majorana | all");
  app.add_option("--dim", cfg.dim, "spatial dimension");
  app.add_option("--sites", cfg.sites, "sites per axis (default: command dependent)");
  app.add_option("--dx", cfg.dx, "lattice spacing, decimal or fraction");
  app.add_option("--dt", cfg.dt, "time step (default 0.05 dx)");
  app.add_option("--steps", cfg.steps, "RK4 steps");
  app.add_option("--record-every", cfg.record_every, "diagnostics stride");
  app.add_option("--k-mode", cfg.k_mode, "plane-wave mode number along x");
  app.add_option("--initial", cfg.initial, "plane-wave | zero");
  app.add_option("--hbar", cfg.hbar, "reduced Planck constant");
  app.add_option("--c", cfg.c, "speed of light");
  app.add_option("--mass", cfg.mass, "fermion mass");
  app.add_option("--seed", cfg.seed, "seed for the randomized property checks");
  app.add_option("--samples", cfg.samples, "random samples per property (default: command dependent)");
  app.add_option("--out", cfg.out, "write the JSON report here ('-' for standard output)");
  app.add_option("--table", cfg.table, "evolve: write the diagnostics table here");
  app.add_option("--inject-fault", cfg.inject_fault, "test hook: none | gamma | momentum");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  CommandResult result;
  try {
    result = run_command(cfg);
  } catch (const StabilityBoundError& e) {
    err << "abort: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InstabilityError& e) {
    err << "abort: " << e.what() << "\n";
    return kExitAbort;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "abort: " << e.what() << "\n";
    return kExitAbort;
  }

  const json doc = report_document(cfg, result);
  if (cfg.out == "-") {
    out << doc.dump(2) << "\n";
  } else {
    out << summary_text(cfg, result);
    if (!cfg.out.empty()) {
      std::ofstream f(cfg.out);
      if (!f) {
        err << "cannot write " << cfg.out << "\n";
        return kExitAbort;
      }
      f << doc.dump(2) << "\n";
    }
  }
  if (!cfg.table.empty()) {
    std::ofstream f(cfg.table);
    if (!f) {
      err << "cannot write " << cfg.table << "\n";
      return kExitAbort;
    }
    f << result.table;
  }
  return result.report.passed() ? kExitPass : kExitFailure;
}

}  // namespace diracham
