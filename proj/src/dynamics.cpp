#include "diracham/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace diracham {

namespace {

Complex imag_i() { return {0.0, 1.0}; }

void require_shape(const DynamicsModel& model, const SpinorField& f) {
  if (f.cols() != model.sites())
    throw std::invalid_argument("field has " + std::to_string(f.cols()) + " sites, lattice has " +
                                std::to_string(model.sites()));
}

// Σ over sites of (row)_a(i)·(col)_a(i), row spinors stored as columns.
Complex pair_sum(const SpinorField& row, const SpinorField& col) { return (row.array() * col.array()).sum(); }

double mass_frequency(const DynamicsModel& m) { return to_real(m.mass * m.c * m.c / m.hbar); }

}  // namespace

double to_real(const Complex& z) { return z.real(); }

DynamicsModel make_dynamics_model(const LatticeSpec& lattice, Representation rep, double hbar, double c, double mass) {
  return make_model<Complex>(lattice, rep, Complex(hbar), Complex(c), Complex(mass));
}

PhaseSpacePoint on_shell_point(const DynamicsModel& model, const SpinorField& psi) {
  require_shape(model, psi);
  const Complex half_ihc = imag_i() * model.hbar_c() / 2.0;
  PhaseSpacePoint p;
  p.psi = psi;
  // (ψ†γ⁰)_a = Σ_b conj(ψ_b) γ⁰_{ba}
  p.psibar = model.gammas[0].transpose() * psi.conjugate();
  p.pi = half_ihc * p.psibar;
  p.pibar = -half_ihc * psi;
  return p;
}

double constraint_residual(const DynamicsModel& model, const PhaseSpacePoint& p) {
  const Complex half_ihc = imag_i() * model.hbar_c() / 2.0;
  const double phibar = (p.pi - half_ihc * p.psibar).cwiseAbs().maxCoeff();
  const double phi = (p.pibar + half_ihc * p.psi).cwiseAbs().maxCoeff();
  return std::max(phibar, phi);
}

SpinorField lattice_derivative(const DynamicsModel& model, const SpinorField& f, int axis) {
  require_shape(model, f);
  SpinorField out(4, f.cols());
  const double inv = 1.0 / (2.0 * model.lattice.spacing());
  for (int i = 0; i < f.cols(); ++i)
    out.col(i) = (f.col(model.lattice.neighbor(i, axis, +1)) - f.col(model.lattice.neighbor(i, axis, -1))) * inv;
  return out;
}

SpinorField slash_spinor(const DynamicsModel& model, const SpinorField& psi) {
  SpinorField out = SpinorField::Zero(4, psi.cols());
  for (int mu = 1; mu <= model.lattice.dimension(); ++mu)
    out += model.gammas[mu] * lattice_derivative(model, psi, mu - 1);
  return out;
}

SpinorField slash_adjoint(const DynamicsModel& model, const SpinorField& psibar) {
  SpinorField out = SpinorField::Zero(4, psibar.cols());
  // (χ̄γ)_a = Σ_b χ̄_b γ_{ba}
  for (int mu = 1; mu <= model.lattice.dimension(); ++mu)
    out += model.gammas[mu].transpose() * lattice_derivative(model, psibar, mu - 1);
  return out;
}

SpinorField time_derivative(const DynamicsModel& model, const SpinorField& psi) {
  require_shape(model, psi);
  const Matrix4<Complex>& g0 = model.gammas[0];
  SpinorField out = (-imag_i() * mass_frequency(model)) * (g0 * psi);
  out -= model.c * (g0 * slash_spinor(model, psi));
  return out;
}

SpinorField rk4_step(const DynamicsModel& model, const SpinorField& psi, double dt) {
  const SpinorField k1 = time_derivative(model, psi);
  const SpinorField k2 = time_derivative(model, psi + 0.5 * dt * k1);
  const SpinorField k3 = time_derivative(model, psi + 0.5 * dt * k2);
  const SpinorField k4 = time_derivative(model, psi + dt * k3);
  return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double field_norm(const DynamicsModel& model, const SpinorField& psi) {
  return to_real(model.volume) * psi.squaredNorm();
}

Complex hamiltonian_iz(const DynamicsModel& model, const PhaseSpacePoint& p) {
  const Complex imc_h = imag_i() * model.mass * model.c / model.hbar;
  // −π∂̸ψ − (∂̸ψ̄)π̄ − (imc/ħ)(πψ − ψ̄π̄)
  Complex h = -pair_sum(p.pi, slash_spinor(model, p.psi)) - pair_sum(slash_adjoint(model, p.psibar), p.pibar) -
              imc_h * (pair_sum(p.pi, p.psi) - pair_sum(p.psibar, p.pibar));
  return h * model.volume;
}

HamiltonianComparison hamiltonian_comparison(const DynamicsModel& model, const PhaseSpacePoint& p) {
  const double residual = constraint_residual(model, p);
  if (residual > 1e-10)
    throw OffShellError("hamiltonian comparison needs an on-shell point, constraint residual " +
                        std::to_string(residual));
  const Complex i = imag_i();
  const Complex hc = model.hbar_c();
  const SpinorField& psi1 = p.psi;
  const SpinorField pi1 = i * hc * p.psibar;
  const Complex imc_h = i * model.mass * model.c / model.hbar;
  const SpinorField dpsi1 = slash_spinor(model, psi1);
  const SpinorField dpi1 = slash_adjoint(model, pi1);
  HamiltonianComparison out;
  out.h_r = model.volume * (0.5 * (pair_sum(dpi1, psi1) - pair_sum(pi1, dpsi1)) - imc_h * pair_sum(pi1, psi1));
  out.h_bd = model.volume * (-pair_sum(pi1, dpsi1) - imc_h * pair_sum(pi1, psi1));
  out.divergence = model.volume * 0.5 * (pair_sum(dpi1, psi1) + pair_sum(pi1, dpsi1));
  // chart inverse with ψ₂ = π₂ = 0: ψ = ψ₁, π = π₁/2, ψ̄ = −(i/ħc)π₁, π̄ = −(iħc/2)ψ₁
  PhaseSpacePoint chart{psi1, (-i / hc) * pi1, 0.5 * pi1, (-i * hc / 2.0) * psi1};
  out.h_iz_chart = hamiltonian_iz(model, chart);
  return out;
}

double lattice_frequency(const DynamicsModel& model, const std::vector<double>& k) {
  if (static_cast<int>(k.size()) != model.lattice.dimension())
    throw std::invalid_argument("wave vector dimension does not match the lattice");
  const double dx = model.lattice.spacing();
  const double c = to_real(model.c);
  double s2 = 0.0;
  for (double km : k) s2 += std::pow(std::sin(km * dx) / dx, 2);
  return std::sqrt(std::pow(mass_frequency(model), 2) + c * c * s2);
}

SpinorField plane_wave(const DynamicsModel& model, const std::vector<double>& k, int band) {
  if (static_cast<int>(k.size()) != model.lattice.dimension())
    throw std::invalid_argument("wave vector dimension does not match the lattice");
  const double dx = model.lattice.spacing();
  // ∂_t u = −i K u with K = (mc²/ħ)γ⁰ + c Σ_μ s_μ γ⁰γ^μ, Hermitian
  Matrix4<Complex> K = mass_frequency(model) * model.gammas[0];
  for (int mu = 1; mu <= model.lattice.dimension(); ++mu)
    K += model.c * (std::sin(k[mu - 1] * dx) / dx) * (model.gammas[0] * model.gammas[mu]);
  Eigen::SelfAdjointEigenSolver<Matrix4<Complex>> eig(K);
  const Vector4<Complex> u = eig.eigenvectors().col(band > 0 ? 3 : 0);
  SpinorField psi(4, model.sites());
  for (int i = 0; i < model.sites(); ++i) {
    double phase = 0.0;
    for (int mu = 0; mu < model.lattice.dimension(); ++mu)
      phase += k[mu] * dx * model.lattice.coordinate(i, mu);
    psi.col(i) = u * std::exp(imag_i() * phase);
  }
  return psi / std::sqrt(field_norm(model, psi));
}

double stability_bound(const DynamicsModel& model) { return 0.5 * model.lattice.spacing() / to_real(model.c); }

Trajectory evolve(const DynamicsModel& model, const SpinorField& initial, const EvolveOptions& options) {
  require_shape(model, initial);
  if (options.dt <= 0.0 || options.steps < 0) throw std::invalid_argument("evolve needs dt > 0 and steps >= 0");
  if (options.enforce_bound && options.dt > stability_bound(model))
    throw StabilityBoundError("dt = " + std::to_string(options.dt) + " exceeds the stability bound 0.5 dx/c = " +
                              std::to_string(stability_bound(model)));
  Trajectory traj;
  SpinorField psi = initial;
  const double e0 = to_real(hamiltonian_iz(model, psi));
  const double n0 = field_norm(model, psi);
  auto record = [&](int step) {
    auto p = on_shell_point(model, psi);
    const double res = constraint_residual(model, p);
    if (res > 1e-12 * std::max(1.0, psi.cwiseAbs().maxCoeff()))
      throw std::logic_error("on-shell reconstruction left a constraint residual");
    const Complex e = hamiltonian_iz(model, p);
    const double n = field_norm(model, psi);
    traj.diagnostics.push_back({step, step * options.dt, e.real(), e.imag(), n, res});
    if (e0 != 0.0) traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(e.real() - e0) / std::abs(e0));
    if (n0 != 0.0) traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(n - n0) / n0);
  };
  record(0);
  for (int step = 1; step <= options.steps; ++step) {
    SpinorField next = rk4_step(model, psi, options.dt);
    const Complex overlap = (psi.conjugate().array() * next.array()).sum();
    if (std::abs(overlap) > 0.0) traj.accumulated_phase += std::arg(overlap);
    psi = std::move(next);
    const double n = field_norm(model, psi);
    if (!std::isfinite(n) || (n0 > 0.0 && n > options.growth_limit * n0))
      throw InstabilityError("norm grew from " + std::to_string(n0) + " to " + std::to_string(n) + " at step " +
                             std::to_string(step) + " (dt = " + std::to_string(options.dt) + ")");
    if (step % std::max(1, options.record_every) == 0 || step == options.steps) record(step);
  }
  traj.final_state = psi;
  return traj;
}

nlohmann::ordered_json to_json(const Trajectory& t) {
  nlohmann::ordered_json series = nlohmann::ordered_json::array();
  for (const auto& d : t.diagnostics)
    series.push_back({{"step", d.step},
                      {"time", d.time},
                      {"energy", d.energy},
                      {"energy_imag", d.energy_imag},
                      {"norm", d.norm},
                      {"constraint_residual", d.constraint_residual}});
  return {{"accumulated_phase", t.accumulated_phase},
          {"max_energy_drift", t.max_energy_drift},
          {"max_norm_drift", t.max_norm_drift},
          {"series", series}};
}

std::string diagnostics_table(const Trajectory& t) {
  std::ostringstream os;
  os.precision(15);
  os << "# step time energy norm constraint_residual\n";
  for (const auto& d : t.diagnostics)
    os << d.step << ' ' << d.time << ' ' << d.energy << ' ' << d.norm << ' ' << d.constraint_residual << '\n';
  return os.str();
}

}  // namespace diracham
