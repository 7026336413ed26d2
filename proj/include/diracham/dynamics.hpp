#pragma once

#include "diracham/phase_space.hpp"

#include <json.hpp>

#include <stdexcept>
#include <vector>

namespace diracham {

// Spinor field on the lattice: column i holds ψ(site i).
using SpinorField = Eigen::Matrix<Complex, 4, Eigen::Dynamic>;
using DynamicsModel = DiracModel<Complex>;

class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StabilityBoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OffShellError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double to_real(const Complex& z);

DynamicsModel make_dynamics_model(const LatticeSpec& lattice, Representation rep, double hbar, double c, double mass);

// Full phase-space point; adjoint kinds are stored as columns of their
// row-spinor components.
struct PhaseSpacePoint {
  SpinorField psi;
  SpinorField psibar;
  SpinorField pi;
  SpinorField pibar;
};

// ψ̄ = ψ†γ⁰, π = (iħc/2)ψ̄, π̄ = −(iħc/2)ψ.
PhaseSpacePoint on_shell_point(const DynamicsModel& model, const SpinorField& psi);
// max over components of |φ̄|, |φ|.
double constraint_residual(const DynamicsModel& model, const PhaseSpacePoint& p);

// Central difference along one axis, periodic.
SpinorField lattice_derivative(const DynamicsModel& model, const SpinorField& f, int axis);
// Σ_μ γ^μ ∂_μ ψ (spinor) and Σ_μ ∂_μψ̄ γ^μ (adjoint, stored as columns).
SpinorField slash_spinor(const DynamicsModel& model, const SpinorField& psi);
SpinorField slash_adjoint(const DynamicsModel& model, const SpinorField& psibar);

// ∂_t ψ = −i(mc²/ħ)γ⁰ψ − c Σ_μ γ⁰γ^μ ∂_μ ψ  (= c γ⁰ ∂̸₀ψ on shell).
SpinorField time_derivative(const DynamicsModel& model, const SpinorField& psi);
SpinorField rk4_step(const DynamicsModel& model, const SpinorField& psi, double dt);

// v Σ ψ†ψ
double field_norm(const DynamicsModel& model, const SpinorField& psi);
// Hermitian Hamiltonian H_IZ on the phase-space point.
Complex hamiltonian_iz(const DynamicsModel& model, const PhaseSpacePoint& p);
inline Complex hamiltonian_iz(const DynamicsModel& model, const SpinorField& psi) {
  return hamiltonian_iz(model, on_shell_point(model, psi));
}

struct HamiltonianComparison {
  Complex h_r;
  Complex h_bd;
  Complex divergence;  // v Σ ½[(∂̸π₁)ψ₁ + π₁∂̸ψ₁]
  Complex h_iz_chart;  // H_IZ at (ψ₁, π₁, ψ₂ = 0, π₂ = 0)
};

// Reduced-chart energies on an on-shell point: ψ₁ = ψ, π₁ = iħcψ̄.
HamiltonianComparison hamiltonian_comparison(const DynamicsModel& model, const PhaseSpacePoint& p);

// ω(k) = sqrt((mc²/ħ)² + c² Σ_μ sin²(k_μΔx)/Δx²)
double lattice_frequency(const DynamicsModel& model, const std::vector<double>& k);
// Positive-frequency plane wave u e^{ik·x} with unit norm v Σ ψ†ψ = 1.
SpinorField plane_wave(const DynamicsModel& model, const std::vector<double>& k, int band = +1);

struct EvolveOptions {
  double dt = 0.0;
  int steps = 0;
  int record_every = 1;
  bool enforce_bound = true;
  double growth_limit = 10.0;
};

struct StepDiagnostics {
  int step;
  double time;
  double energy;
  double energy_imag;
  double norm;
  double constraint_residual;
};

struct Trajectory {
  SpinorField final_state;
  std::vector<StepDiagnostics> diagnostics;
  double accumulated_phase = 0.0;  // Σ arg⟨ψ_n, ψ_{n+1}⟩, unwrapped
  double max_energy_drift = 0.0;   // relative
  double max_norm_drift = 0.0;     // relative
};

double stability_bound(const DynamicsModel& model);

Trajectory evolve(const DynamicsModel& model, const SpinorField& initial, const EvolveOptions& options);

nlohmann::ordered_json to_json(const Trajectory& t);
std::string diagnostics_table(const Trajectory& t);

}  // namespace diracham
