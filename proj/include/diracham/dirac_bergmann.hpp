#pragma once

#include "diracham/brackets.hpp"
#include "diracham/random.hpp"
#include "diracham/report.hpp"

#include <array>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace diracham {

enum class Track { spinorial, grassmann_left, grassmann_right };
inline constexpr std::array<Track, 3> kAllTracks{Track::spinorial, Track::grassmann_left, Track::grassmann_right};

std::string to_string(Track t);
Track track_from_string(const std::string& name);

constexpr Statistics statistics_of(Track t) {
  return t == Track::spinorial ? Statistics::commuting : Statistics::grassmann;
}
constexpr Side side_of(Track t) { return t == Track::grassmann_right ? Side::right : Side::left; }
constexpr DerivativeSide derivative_side_of(Track t) {
  switch (t) {
    case Track::spinorial: return DerivativeSide::plain;
    case Track::grassmann_left: return DerivativeSide::left;
    case Track::grassmann_right: return DerivativeSide::right;
  }
  return DerivativeSide::plain;
}

enum class LagrangianKind { bjorken_drell, hermitian };
enum class HamiltonianKind { canonical, primary, bjorken_drell, hermitian, reduced };

std::string to_string(HamiltonianKind k);

class InconsistentSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <FieldScalar S>
PhaseFunctional<S> track_poisson(Track t, const PhaseFunctional<S>& f, const PhaseFunctional<S>& g,
                                 const DiracModel<S>& model) {
  return t == Track::spinorial ? poisson_fo(f, g, model) : poisson_grassmann(f, g, side_of(t), model);
}

template <FieldScalar S>
PhaseFunctional<S> track_dirac(Track t, const PhaseFunctional<S>& f, const PhaseFunctional<S>& g,
                               const DiracModel<S>& model) {
  return t == Track::spinorial ? dirac_fo(f, g, model) : dirac_grassmann(f, g, side_of(t), model);
}

// ∂̸₀F generated by H. The right-derivative bracket has {ψ,H}^R = +∂^R H/∂π_R
// while the Hamilton equation reads ∂̸₀ψ = −∂^R H/∂π_R, so that track
// evolves with {H,F}^R (= −{F,H}^R for even H).
template <FieldScalar S>
PhaseFunctional<S> evolution(Track t, const PhaseFunctional<S>& f, const PhaseFunctional<S>& h,
                             const DiracModel<S>& model, bool dirac = false) {
  auto br = [&](const PhaseFunctional<S>& a, const PhaseFunctional<S>& b) {
    return dirac ? track_dirac(t, a, b, model) : track_poisson(t, a, b, model);
  };
  return t == Track::grassmann_right ? br(h, f) : br(f, h);
}

// Gauss-Jordan with largest-magnitude pivoting; nullopt when singular.
template <class S, int N>
std::optional<Eigen::Matrix<S, N, N>> exact_inverse(const Eigen::Matrix<S, N, N>& m) {
  Eigen::Matrix<S, N, N> a = m;
  Eigen::Matrix<S, N, N> inv = Eigen::Matrix<S, N, N>::Identity();
  for (int col = 0; col < N; ++col) {
    int pivot = -1;
    double best = 0.0;
    for (int r = col; r < N; ++r)
      if (!is_zero(a(r, col)) && magnitude(a(r, col)) > best) {
        best = magnitude(a(r, col));
        pivot = r;
      }
    if (pivot < 0) return std::nullopt;
    a.row(col).swap(a.row(pivot));
    inv.row(col).swap(inv.row(pivot));
    const S p = a(col, col);
    for (int k = 0; k < N; ++k) {
      a(col, k) /= p;
      inv(col, k) /= p;
    }
    for (int r = 0; r < N; ++r) {
      if (r == col || is_zero(a(r, col))) continue;
      const S f = a(r, col);
      for (int k = 0; k < N; ++k) {
        a(r, k) -= f * a(col, k);
        inv(r, k) -= f * inv(col, k);
      }
    }
  }
  return inv;
}

template <class M>
bool matrices_match(const Eigen::MatrixBase<M>& a, const Eigen::MatrixBase<M>& b) {
  using S = typename M::Scalar;
  if constexpr (is_exact_v<S>) return all_zero(a - b);
  else return max_norm(a - b) <= kFloatTolerance;
}

template <FieldScalar S>
bool functionals_match(const PhaseFunctional<S>& a, const PhaseFunctional<S>& b) {
  return equivalent(a, b);
}

template <FieldScalar S>
std::string scalar_text(const S& z) {
  std::ostringstream os;
  if constexpr (is_exact_v<S>) os << z.real() << (z.imag() < 0 ? "-" : "+") << abs(z.imag()) << "i";
  else {
    os.precision(15);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  }
  return os.str();
}

// ---------------------------------------------------------------- Lagrangian

namespace detail {

template <FieldScalar S>
PhaseFunctional<S> slash_sum(FieldKind k, int a, int i, const DiracModel<S>& model, Statistics st) {
  return slashed_spatial_derivative(k, a, i, model, st);
}

template <FieldScalar S>
PhaseFunctional<S> at(Statistics st, FieldKind k, int a, int i) {
  return field<S>(st, k, a, i);
}

}  // namespace detail

// Discretized L = v Σ_i density with the slashed time derivatives as the
// velocity atoms dpsi0 (∂̸₀ψ) and dpsibar0 (∂̸₀ψ̄).
template <FieldScalar S>
PhaseFunctional<S> lagrangian(Track track, LagrangianKind kind, const DiracModel<S>& model) {
  using K = FieldKind;
  const Statistics st = statistics_of(track);
  if (kind == LagrangianKind::bjorken_drell && track != Track::spinorial)
    throw std::invalid_argument("the Bjorken-Drell Lagrangian is only treated in the spinorial track");
  const S i = imag_unit<S>();
  const S hc = model.hbar_c();
  const S mc2 = model.mass * model.c * model.c;
  PhaseFunctional<S> density(st);
  for (int site = 0; site < model.sites(); ++site)
    for (int a = 0; a < 4; ++a) {
      auto psibar = detail::at<S>(st, K::psibar, a, site);
      auto psi = detail::at<S>(st, K::psi, a, site);
      auto dpsi = detail::at<S>(st, K::dpsi0, a, site) + detail::slash_sum(K::psi, a, site, model, st);
      auto dpsibar = detail::at<S>(st, K::dpsibar0, a, site) + detail::slash_sum(K::psibar, a, site, model, st);
      if (kind == LagrangianKind::hermitian)
        density += (psibar * dpsi - dpsibar * psi) * (i * hc / S(2));
      else
        density += (psibar * dpsi) * (i * hc);
      density -= (psibar * psi) * mc2;
    }
  return density * model.volume;
}

// ------------------------------------------------------------------- momenta

// π = pi_coef·ψ̄ and π̄ = pibar_coef·ψ, componentwise.
template <FieldScalar S>
struct MomentumTable {
  Track track;
  LagrangianKind lagrangian;
  S pi_coef;
  S pibar_coef;
};

template <FieldScalar S>
MomentumTable<S> build_momenta(Track track, LagrangianKind kind, const DiracModel<S>& model) {
  const S ihc = imag_unit<S>() * model.hbar_c();
  const S half = from_ratio<S>(1, 2);
  if (kind == LagrangianKind::bjorken_drell) {
    if (track != Track::spinorial)
      throw std::invalid_argument("the Bjorken-Drell Lagrangian is only treated in the spinorial track");
    return {track, kind, ihc, S(0)};
  }
  switch (track) {
    case Track::spinorial: return {track, kind, ihc * half, -(ihc * half)};
    case Track::grassmann_left: return {track, kind, -(ihc * half), -(ihc * half)};
    case Track::grassmann_right: return {track, kind, ihc * half, ihc * half};
  }
  throw std::logic_error("unknown track");
}

// Each tabulated momentum must equal the (left/right) derivative of the
// discretized Lagrangian with respect to the matching velocity atom.
template <FieldScalar S>
Report verify_momenta(const MomentumTable<S>& table, const DiracModel<S>& model) {
  Report r;
  const Statistics st = statistics_of(table.track);
  const auto L = lagrangian(table.track, table.lagrangian, model);
  const auto grad = gradient(L, derivative_side_of(table.track));
  auto lookup = [&](FieldKind k, int a, int i) {
    auto it = grad.find(FieldAtom{k, a, i});
    return (it == grad.end() ? PhaseFunctional<S>(st) : it->second) * (S(1) / model.volume);
  };
  for (auto [vel, field_kind, coef, name] :
       {std::tuple{FieldKind::dpsi0, FieldKind::psibar, table.pi_coef, "momentum_pi"},
        std::tuple{FieldKind::dpsibar0, FieldKind::psi, table.pibar_coef, "momentum_pibar"}}) {
    bool ok = true;
    double worst = 0.0;
    std::string detail;
    for (int i = 0; i < model.sites(); ++i)
      for (int a = 0; a < 4; ++a) {
        auto derived = lookup(vel, a, i);
        auto tabulated = field<S>(st, field_kind, a, i, coef);
        if (!functionals_match(derived, tabulated)) {
          worst = std::max(worst, max_coefficient(derived - tabulated));
          if (ok) detail = "at " + to_string(FieldAtom{vel, a, i}) + ": derived " + to_string(derived);
          ok = false;
        }
      }
    r.add("momenta", name, ok, worst, detail);
  }
  return r;
}

// ---------------------------------------------------------------- constraints

// φ̄ = π − pi_coef·ψ̄ (index 0), φ = π̄ − pibar_coef·ψ (index 1).
template <FieldScalar S>
struct ConstraintSet {
  Track track;
  S pi_coef;
  S pibar_coef;

  Statistics statistics() const { return statistics_of(track); }
  PhaseFunctional<S> phibar(int a, int i) const {
    return field<S>(statistics(), FieldKind::pi, a, i) - field<S>(statistics(), FieldKind::psibar, a, i, pi_coef);
  }
  PhaseFunctional<S> phi(int a, int i) const {
    return field<S>(statistics(), FieldKind::pibar, a, i) - field<S>(statistics(), FieldKind::psi, a, i, pibar_coef);
  }
  PhaseFunctional<S> component(int alpha, int a, int i) const { return alpha == 0 ? phibar(a, i) : phi(a, i); }
};

template <FieldScalar S>
ConstraintSet<S> build_constraints(const MomentumTable<S>& m) {
  if (m.lagrangian != LagrangianKind::hermitian)
    throw std::invalid_argument("the constraint analysis runs on the Hermitian Lagrangian only");
  return {m.track, m.pi_coef, m.pibar_coef};
}

// Substitutes the momentum definitions: π → pi_coef ψ̄, π̄ → pibar_coef ψ.
template <FieldScalar S>
PhaseFunctional<S> on_shell(const PhaseFunctional<S>& f, const ConstraintSet<S>& cs) {
  const Statistics st = f.statistics();
  return substitute<S>(f, [&](const FieldAtom& x) -> std::optional<PhaseFunctional<S>> {
    if (x.kind == FieldKind::pi) return field<S>(st, FieldKind::psibar, x.component, x.site, cs.pi_coef);
    if (x.kind == FieldKind::pibar) return field<S>(st, FieldKind::psi, x.component, x.site, cs.pibar_coef);
    return std::nullopt;
  });
}

// The constraint forms as printed, per track, compared with the derived ones.
template <FieldScalar S>
Report verify_printed_constraints(const ConstraintSet<S>& cs, const DiracModel<S>& model) {
  Report r;
  const S half_ihc = imag_unit<S>() * model.hbar_c() / S(2);
  S psibar_coef, psi_coef;  // φ̄ = π + psibar_coef ψ̄, φ = π̄ + psi_coef ψ
  switch (cs.track) {
    case Track::spinorial: psibar_coef = -half_ihc; psi_coef = half_ihc; break;
    case Track::grassmann_left: psibar_coef = half_ihc; psi_coef = half_ihc; break;
    case Track::grassmann_right: psibar_coef = -half_ihc; psi_coef = -half_ihc; break;
  }
  const Statistics st = cs.statistics();
  bool ok_bar = true, ok = true;
  for (int i = 0; i < model.sites(); ++i)
    for (int a = 0; a < 4; ++a) {
      auto printed_bar = field<S>(st, FieldKind::pi, a, i) + field<S>(st, FieldKind::psibar, a, i, psibar_coef);
      auto printed = field<S>(st, FieldKind::pibar, a, i) + field<S>(st, FieldKind::psi, a, i, psi_coef);
      ok_bar = ok_bar && functionals_match(cs.phibar(a, i), printed_bar);
      ok = ok && functionals_match(cs.phi(a, i), printed);
    }
  r.add("constraints", "phibar_printed_form", ok_bar, 0.0, to_string(cs.phibar(0, 0)));
  r.add("constraints", "phi_printed_form", ok, 0.0, to_string(cs.phi(0, 0)));
  return r;
}

// -------------------------------------------------------------- Hamiltonians

template <FieldScalar S>
struct ReducedChart;

namespace detail {

// Σ_i v Σ_a over the lattice of the per-component density built by fn(a, i).
template <FieldScalar S, class Fn>
PhaseFunctional<S> lattice_sum(const DiracModel<S>& model, Statistics st, Fn fn) {
  PhaseFunctional<S> out(st);
  for (int i = 0; i < model.sites(); ++i)
    for (int a = 0; a < 4; ++a) out += fn(a, i);
  return out * model.volume;
}

}  // namespace detail

// Grassmann-track Hamiltonian in momentum form with the mass term exactly as
// printed in the source. Kept for comparison only: its mass term does not
// follow from the Legendre transform (see legendre_check).
template <FieldScalar S>
PhaseFunctional<S> grassmann_hamiltonian_as_printed(Track track, const DiracModel<S>& model) {
  using K = FieldKind;
  if (track == Track::spinorial) throw std::invalid_argument("printed Grassmann Hamiltonian needs a Grassmann track");
  const Statistics st = Statistics::grassmann;
  const S imc_h = imag_unit<S>() * model.mass * model.c / model.hbar;
  return detail::lattice_sum(model, st, [&](int a, int i) {
    auto psi = field<S>(st, K::psi, a, i), psibar = field<S>(st, K::psibar, a, i);
    auto pi = field<S>(st, K::pi, a, i), pibar = field<S>(st, K::pibar, a, i);
    auto dpsi = slashed_spatial_derivative(K::psi, a, i, model, st);
    auto dpsibar = slashed_spatial_derivative(K::psibar, a, i, model, st);
    if (track == Track::grassmann_left) return -(dpsi * pi) - dpsibar * pibar + (psi * pi + psibar * pibar) * imc_h;
    return -(pi * dpsi) - pibar * dpsibar + (pi * psi + pibar * psibar) * imc_h;
  });
}

template <FieldScalar S>
PhaseFunctional<S> build_hamiltonian(Track track, HamiltonianKind which, const DiracModel<S>& model,
                                     const ReducedChart<S>* chart = nullptr);

// ------------------------------------------------------------- reduced chart

// Linear canonical transformation. Old coordinates ordered (ψ, π̄, ψ̄, π),
// new ones (ψ₁, ψ₂, π₁, π₂); forward maps old → new componentwise.
template <FieldScalar S>
struct ReducedChart {
  Track track;
  Matrix4<S> forward;
  Matrix4<S> inverse;

  static constexpr std::array<FieldKind, 4> kOld{FieldKind::psi, FieldKind::pibar, FieldKind::psibar, FieldKind::pi};
  static constexpr std::array<FieldKind, 4> kNew{FieldKind::psi1, FieldKind::psi2, FieldKind::pi1, FieldKind::pi2};

  Statistics statistics() const { return statistics_of(track); }

  static int index_in(const std::array<FieldKind, 4>& list, FieldKind k) {
    for (int n = 0; n < 4; ++n)
      if (list[n] == k) return n;
    return -1;
  }

  // New coordinate written in old atoms.
  PhaseFunctional<S> coordinate(FieldKind k, int a, int i) const {
    const int row = index_in(kNew, k);
    if (row < 0) throw std::invalid_argument("not a chart coordinate: " + to_string(k));
    PhaseFunctional<S> out(statistics());
    for (int c = 0; c < 4; ++c) out.add_term({FieldAtom{kOld[c], a, i}}, forward(row, c));
    return out;
  }

  PhaseFunctional<S> to_chart(const PhaseFunctional<S>& f) const {
    return substitute<S>(f, [&](const FieldAtom& x) -> std::optional<PhaseFunctional<S>> {
      const int row = index_in(kOld, x.kind);
      if (row < 0) return std::nullopt;
      PhaseFunctional<S> out(statistics());
      for (int c = 0; c < 4; ++c) out.add_term({FieldAtom{kNew[c], x.component, x.site}}, inverse(row, c));
      return out;
    });
  }

  PhaseFunctional<S> to_original(const PhaseFunctional<S>& f) const {
    return substitute<S>(f, [&](const FieldAtom& x) -> std::optional<PhaseFunctional<S>> {
      if (index_in(kNew, x.kind) < 0) return std::nullopt;
      return coordinate(x.kind, x.component, x.site);
    });
  }

  // Restriction to the reduced phase space ψ₂ = π₂ = 0.
  PhaseFunctional<S> restrict_reduced(const PhaseFunctional<S>& f) const {
    return substitute<S>(f, [&](const FieldAtom& x) -> std::optional<PhaseFunctional<S>> {
      if (x.kind == FieldKind::psi2 || x.kind == FieldKind::pi2) return PhaseFunctional<S>(statistics());
      return std::nullopt;
    });
  }
};

template <FieldScalar S>
ReducedChart<S> reduced_chart(Track track, const DiracModel<S>& model) {
  const S i = imag_unit<S>();
  const S hc = model.hbar_c();
  const S half = from_ratio<S>(1, 2);
  // signs of the π̄ term in ψ₁ and of the ψ̄ term in π₁ (ψ₂, π₂ flip them)
  S s_psi = S(1), s_pi = S(1);
  switch (track) {
    case Track::spinorial: s_psi = S(1); s_pi = S(1); break;
    case Track::grassmann_left: s_psi = S(1); s_pi = S(-1); break;
    case Track::grassmann_right: s_psi = S(-1); s_pi = S(1); break;
  }
  Matrix4<S> fwd = Matrix4<S>::Zero();
  fwd(0, 0) = half;
  fwd(0, 1) = s_psi * i / hc;
  fwd(1, 0) = half;
  fwd(1, 1) = -(s_psi * i / hc);
  fwd(2, 2) = s_pi * i * hc * half;
  fwd(2, 3) = S(1);
  fwd(3, 2) = -(s_pi * i * hc * half);
  fwd(3, 3) = S(1);
  auto inv = exact_inverse<S, 4>(fwd);
  if (!inv) throw std::logic_error("reduced chart is not invertible");
  return {track, fwd, *inv};
}

// Chart identities: ψ₂, π₂ are the rescaled constraints and both pairs are
// canonical with the track's fundamental bracket value.
template <FieldScalar S>
Report verify_chart(const ReducedChart<S>& chart, const ConstraintSet<S>& cs, const DiracModel<S>& model) {
  using K = FieldKind;
  Report r;
  const S i = imag_unit<S>();
  const S hc = model.hbar_c();
  const S psi2_scale = chart.track == Track::grassmann_right ? S(i / hc) : S(-(i / hc));
  bool ok_psi2 = true, ok_pi2 = true;
  for (int site = 0; site < model.sites(); ++site)
    for (int a = 0; a < 4; ++a) {
      ok_psi2 = ok_psi2 && functionals_match(chart.coordinate(K::psi2, a, site), cs.phi(a, site) * psi2_scale);
      ok_pi2 = ok_pi2 && functionals_match(chart.coordinate(K::pi2, a, site), cs.phibar(a, site));
    }
  r.add("chart", "psi2_is_rescaled_phi", ok_psi2);
  r.add("chart", "pi2_is_phibar", ok_pi2);
  r.add("chart", "forward_inverse_identity",
        matrices_match(Matrix4<S>(chart.forward * chart.inverse), Matrix4<S>(Matrix4<S>::Identity())));

  const S unit = chart.track == Track::spinorial ? S(1) : S(-1);
  const std::array<K, 4> coords{K::psi1, K::pi1, K::psi2, K::pi2};
  const int n = std::min(model.sites(), 2);
  bool ok = true;
  std::string detail;
  for (K p : coords)
    for (K q : coords)
      for (int s1 = 0; s1 < n; ++s1)
        for (int s2 = 0; s2 < n; ++s2)
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
              auto val = track_poisson(chart.track, chart.coordinate(p, a, s1), chart.coordinate(q, b, s2), model);
              const bool pair = (p == K::psi1 && q == K::pi1) || (p == K::pi1 && q == K::psi1) ||
                                (p == K::psi2 && q == K::pi2) || (p == K::pi2 && q == K::psi2);
              S expected(0);
              if (pair && a == b && s1 == s2) {
                expected = unit / model.volume;
                // the factor-ordered bracket is antisymmetric, the Grassmann one symmetric here
                if (chart.track == Track::spinorial && (p == K::pi1 || p == K::pi2)) expected = -expected;
              }
              auto want = PhaseFunctional<S>::constant(chart.statistics(), expected);
              if (!functionals_match(val, want)) {
                if (ok) detail = "{" + to_string(p) + "," + to_string(q) + "} = " + to_string(val);
                ok = false;
              }
            }
  r.add("chart", "canonical_pairs", ok, 0.0, detail);
  return r;
}

// Dirac bracket on the full space versus the reduced Poisson bracket, plus
// vanishing of Dirac brackets with ψ₂ and π₂, on random functionals.
template <FieldScalar S>
Report verify_reduction(const ReducedChart<S>& chart, const DiracModel<S>& model, std::mt19937_64& rng,
                        int samples) {
  using K = FieldKind;
  Report r;
  const Statistics st = chart.statistics();
  RandomFunctionalSpec spec{{K::psi, K::psibar, K::pi, K::pibar}, std::min(model.sites(), 2), 3, 2};
  bool ok = true, ok_vanish = true;
  std::string detail;
  for (int n = 0; n < samples; ++n) {
    auto f = random_functional<S>(rng, st, spec);
    auto g = random_functional<S>(rng, st, spec);
    auto full = chart.to_chart(track_dirac(chart.track, f, g, model));
    auto reduced = poisson_reduced(chart.to_chart(f), chart.to_chart(g), model, side_of(chart.track));
    if (!functionals_match(full, reduced)) {
      if (ok) detail = "f = " + to_string(f) + "; g = " + to_string(g);
      ok = false;
    }
    std::uniform_int_distribution<int> comp(0, 3), site(0, spec.sites - 1);
    const int a = comp(rng), i = site(rng);
    for (K k : {K::psi2, K::pi2}) {
      auto c = chart.coordinate(k, a, i);
      if (!track_dirac(chart.track, c, g, model).is_zero() || !track_dirac(chart.track, f, c, model).is_zero())
        ok_vanish = false;
    }
  }
  r.add("reduction", "dirac_equals_reduced_poisson", ok, 0.0, detail);
  r.add("reduction", "constraint_coordinates_decouple", ok_vanish);
  return r;
}

template <FieldScalar S>
PhaseFunctional<S> build_hamiltonian(Track track, HamiltonianKind which, const DiracModel<S>& model,
                                     const ReducedChart<S>* chart) {
  using K = FieldKind;
  const Statistics st = statistics_of(track);
  const S i = imag_unit<S>();
  const S hc = model.hbar_c();
  const S mc2 = model.mass * model.c * model.c;
  const S imc_h = i * model.mass * model.c / model.hbar;
  auto F = [&](K k, int a, int s) { return field<S>(st, k, a, s); };
  auto D = [&](K k, int a, int s) { return slashed_spatial_derivative(k, a, s, model, st); };

  if (which == HamiltonianKind::reduced) {
    if (!chart) throw std::invalid_argument("reduced Hamiltonian requested before the reduced chart was built");
    if (chart->track != track) throw std::invalid_argument("reduced chart belongs to another track");
    if (track == Track::spinorial) {
      return detail::lattice_sum(model, st, [&](int a, int s) {
        return (D(K::pi1, a, s) * F(K::psi1, a, s) - F(K::pi1, a, s) * D(K::psi1, a, s)) * from_ratio<S>(1, 2) -
               F(K::pi1, a, s) * F(K::psi1, a, s) * imc_h;
      });
    }
    return chart->restrict_reduced(chart->to_chart(build_hamiltonian(track, HamiltonianKind::canonical, model)));
  }

  if (track == Track::spinorial) {
    switch (which) {
      case HamiltonianKind::canonical:
        return detail::lattice_sum(model, st, [&](int a, int s) {
          return (D(K::psibar, a, s) * F(K::psi, a, s) - F(K::psibar, a, s) * D(K::psi, a, s)) * (i * hc / S(2)) +
                 F(K::psibar, a, s) * F(K::psi, a, s) * mc2;
        });
      case HamiltonianKind::primary: {
        auto cs = build_constraints(build_momenta(track, LagrangianKind::hermitian, model));
        return build_hamiltonian(track, HamiltonianKind::canonical, model) +
               detail::lattice_sum(model, st, [&](int a, int s) {
                 return cs.phibar(a, s) * F(K::dpsi0, a, s) + F(K::dpsibar0, a, s) * cs.phi(a, s);
               });
      }
      case HamiltonianKind::bjorken_drell:
        return detail::lattice_sum(model, st, [&](int a, int s) {
          return -(F(K::pi, a, s) * D(K::psi, a, s)) - F(K::pi, a, s) * F(K::psi, a, s) * imc_h;
        });
      case HamiltonianKind::hermitian:
        return detail::lattice_sum(model, st, [&](int a, int s) {
          return -(F(K::pi, a, s) * D(K::psi, a, s)) - D(K::psibar, a, s) * F(K::pibar, a, s) -
                 (F(K::pi, a, s) * F(K::psi, a, s) - F(K::psibar, a, s) * F(K::pibar, a, s)) * imc_h;
        });
      default: break;
    }
    throw std::logic_error("unhandled Hamiltonian kind");
  }

  if (which == HamiltonianKind::bjorken_drell || which == HamiltonianKind::hermitian)
    throw std::invalid_argument(to_string(which) + " Hamiltonian exists only in the spinorial track");
  const bool left = track == Track::grassmann_left;
  // Legendre transform of L with the track's Liouville form; the mass term
  // here is the one that reproduces mc²ψ̄ψ on shell.
  auto canonical = detail::lattice_sum(model, st, [&](int a, int s) {
    auto psi = F(K::psi, a, s), psibar = F(K::psibar, a, s), pi = F(K::pi, a, s), pibar = F(K::pibar, a, s);
    if (left) return -(D(K::psi, a, s) * pi) - D(K::psibar, a, s) * pibar + (psibar * pibar - psi * pi) * imc_h;
    return -(pi * D(K::psi, a, s)) - pibar * D(K::psibar, a, s) + (pibar * psibar - pi * psi) * imc_h;
  });
  if (which == HamiltonianKind::canonical) return canonical;
  auto cs = build_constraints(build_momenta(track, LagrangianKind::hermitian, model));
  return canonical + detail::lattice_sum(model, st, [&](int a, int s) {
           if (left) return F(K::dpsi0, a, s) * cs.phibar(a, s) + F(K::dpsibar0, a, s) * cs.phi(a, s);
           return cs.phibar(a, s) * F(K::dpsi0, a, s) + cs.phi(a, s) * F(K::dpsibar0, a, s);
         });
}

// Liouville form of the track: π M + N π̄ (spinorial), M π + N π̄ (left),
// π M + π̄ N (right), with M, N the velocity atoms.
template <FieldScalar S>
PhaseFunctional<S> liouville_form(Track track, const DiracModel<S>& model) {
  using K = FieldKind;
  const Statistics st = statistics_of(track);
  return detail::lattice_sum(model, st, [&](int a, int s) {
    auto pi = field<S>(st, K::pi, a, s), pibar = field<S>(st, K::pibar, a, s);
    auto M = field<S>(st, K::dpsi0, a, s), N = field<S>(st, K::dpsibar0, a, s);
    switch (track) {
      case Track::spinorial: return pi * M + N * pibar;
      case Track::grassmann_left: return M * pi + N * pibar;
      case Track::grassmann_right: return pi * M + pibar * N;
    }
    return PhaseFunctional<S>(st);
  });
}

// H_P against the Legendre transform (Liouville form − L). The spinorial
// primary Hamiltonian matches identically; momentum-form Grassmann
// Hamiltonians match once the momentum definitions are inserted.
template <FieldScalar S>
Report legendre_check(Track track, const DiracModel<S>& model,
                      const std::optional<PhaseFunctional<S>>& canonical_override = std::nullopt) {
  Report r;
  auto cs = build_constraints(build_momenta(track, LagrangianKind::hermitian, model));
  auto hp = build_hamiltonian(track, HamiltonianKind::primary, model);
  if (canonical_override)
    hp = hp - build_hamiltonian(track, HamiltonianKind::canonical, model) + *canonical_override;
  auto legendre = liouville_form(track, model) - lagrangian(track, LagrangianKind::hermitian, model);
  auto diff = hp - legendre;
  if (track == Track::spinorial) r.add("legendre", "primary_equals_legendre", diff.is_zero(), max_coefficient(diff));
  auto weak = on_shell(diff, cs);
  r.add("legendre", "primary_equals_legendre_on_shell", functionals_match(weak, PhaseFunctional<S>(weak.statistics())),
        max_coefficient(weak), weak.is_zero() ? "" : to_string(weak).substr(0, 200));
  return r;
}

// ---------------------------------------------------------- constraint matrix

template <FieldScalar S>
struct ConstraintMatrix {
  Track track;
  Matrix2<S> a;        // {φ^α_a(i), φ^β_b(j)} = a(α,β) δ_ab δ_ij / v
  Matrix2<S> inverse;  // coefficient of δ/v in A⁻¹
};

template <FieldScalar S>
ConstraintMatrix<S> constraint_matrix(const ConstraintSet<S>& cs, const DiracModel<S>& model,
                                      Report* checks = nullptr) {
  Matrix2<S> a;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be) {
      auto v = track_poisson(cs.track, cs.component(al, 0, 0), cs.component(be, 0, 0), model);
      if (v.degree() > 0) throw InconsistentSystem("constraint bracket is not a c-number");
      a(al, be) = v.coefficient({}) * model.volume;
    }
  if (checks) {
    // locality and component-diagonality over the whole lattice
    bool ok = true;
    std::string detail;
    const int sites = model.sites();
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be)
        for (int i = 0; i < sites; ++i)
          for (int x = 0; x < 4; ++x) {
            auto lhs = cs.component(al, x, i);
            for (int j = 0; j < sites; ++j)
              for (int y = 0; y < 4; ++y) {
                auto v = track_poisson(cs.track, lhs, cs.component(be, y, j), model);
                S expected = (i == j && x == y) ? S(a(al, be) / model.volume) : S(0);
                if (!functionals_match(v, PhaseFunctional<S>::constant(cs.statistics(), expected))) {
                  if (ok) detail = "(" + std::to_string(al) + "," + std::to_string(be) + ") at sites " +
                                   std::to_string(i) + "," + std::to_string(j);
                  ok = false;
                }
              }
          }
    checks->add("constraint_matrix", "delta_structure", ok, 0.0, detail);
  }
  auto inv = exact_inverse<S, 2>(a);
  if (!inv) throw InconsistentSystem("constraint matrix is singular: a first-class constraint appeared");
  if (checks)
    checks->add("constraint_matrix", "a_times_inverse_identity",
                matrices_match(Matrix2<S>(a * *inv), Matrix2<S>(Matrix2<S>::Identity())));
  return {cs.track, a, *inv};
}

// Dirac bracket from its definition: {f,g} − vΣ_k {f,φ^α(k)} A⁻¹_αβ {φ^β(k),g}.
// In the spinorial track the (φ, φ̄) term is written {φ̄,g} A⁻¹ {f,φ} so the
// adjoint factor stays on the left.
template <FieldScalar S>
PhaseFunctional<S> dirac_via_constraints(const PhaseFunctional<S>& f, const PhaseFunctional<S>& g,
                                         const ConstraintSet<S>& cs, const ConstraintMatrix<S>& m,
                                         const DiracModel<S>& model) {
  auto out = track_poisson(cs.track, f, g, model);
  std::set<std::pair<int, int>> slots;  // (component, site) touched by both
  std::set<std::pair<int, int>> fs, gs;
  for (const auto& x : f.support()) fs.insert({x.component, x.site});
  for (const auto& x : g.support()) gs.insert({x.component, x.site});
  for (const auto& s : fs)
    if (gs.count(s)) slots.insert(s);
  for (auto [a, k] : slots) {
    std::array<PhaseFunctional<S>, 2> f_phi{track_poisson(cs.track, f, cs.component(0, a, k), model),
                                            track_poisson(cs.track, f, cs.component(1, a, k), model)};
    std::array<PhaseFunctional<S>, 2> phi_g{track_poisson(cs.track, cs.component(0, a, k), g, model),
                                            track_poisson(cs.track, cs.component(1, a, k), g, model)};
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be) {
        const S& w = m.inverse(al, be);
        if (is_zero(w)) continue;
        PhaseFunctional<S> term = (cs.track == Track::spinorial && al == 1 && be == 0)
                                      ? phi_g[be] * f_phi[al]
                                      : f_phi[al] * phi_g[be];
        out -= term * (w * model.volume);
      }
  }
  return out;
}

// ------------------------------------------------------------- consistency

template <FieldScalar S>
struct ConsistencyResult {
  Track track;
  std::vector<PhaseFunctional<S>> residual_phibar;  // index 4*site + component
  std::vector<PhaseFunctional<S>> residual_phi;
  std::vector<PhaseFunctional<S>> multiplier_dpsi0;
  std::vector<PhaseFunctional<S>> multiplier_dpsibar0;
  PhaseFunctional<S> primary_solved;
  Report report;
};

namespace detail {

// Splits r = coef·(single multiplier atom) + rest and returns the atom and
// −rest/coef.
template <FieldScalar S>
std::pair<FieldAtom, PhaseFunctional<S>> solve_for_multiplier(const PhaseFunctional<S>& r) {
  std::optional<FieldAtom> atom;
  S coef(0);
  PhaseFunctional<S> rest(r.statistics());
  for (const auto& [m, c] : r.terms()) {
    bool has_multiplier = false;
    for (const auto& x : m)
      has_multiplier = has_multiplier || x.kind == FieldKind::dpsi0 || x.kind == FieldKind::dpsibar0;
    if (!has_multiplier) {
      rest.add_term(m, c);
      continue;
    }
    if (m.size() != 1) throw InconsistentSystem("multiplier enters nonlinearly: " + to_string(r));
    if (atom && !(*atom == m[0])) throw InconsistentSystem("consistency condition couples several multipliers");
    atom = m[0];
    coef = c;
  }
  if (!atom) throw InconsistentSystem("consistency condition does not involve a multiplier: " + to_string(r));
  return {*atom, rest * (S(-1) / coef)};
}

}  // namespace detail

// Dirac velocity −Σ∂̸_μψ − i(mc/ħ)ψ and its adjoint −Σ∂̸_μψ̄ + i(mc/ħ)ψ̄.
template <FieldScalar S>
PhaseFunctional<S> dirac_velocity(bool adjoint, int a, int site, const DiracModel<S>& model, Statistics st) {
  const S imc_h = imag_unit<S>() * model.mass * model.c / model.hbar;
  if (adjoint)
    return -slashed_spatial_derivative(FieldKind::psibar, a, site, model, st) +
           field<S>(st, FieldKind::psibar, a, site, imc_h);
  return -slashed_spatial_derivative(FieldKind::psi, a, site, model, st) - field<S>(st, FieldKind::psi, a, site, imc_h);
}

template <FieldScalar S>
ConsistencyResult<S> run_consistency(Track track, const DiracModel<S>& model) {
  using K = FieldKind;
  const Statistics st = statistics_of(track);
  auto cs = build_constraints(build_momenta(track, LagrangianKind::hermitian, model));
  auto hp = build_hamiltonian(track, HamiltonianKind::primary, model);
  ConsistencyResult<S> res{track, {}, {}, {}, {}, PhaseFunctional<S>(st), {}};
  const int n = model.sites() * 4;
  res.multiplier_dpsi0.assign(n, PhaseFunctional<S>(st));
  res.multiplier_dpsibar0.assign(n, PhaseFunctional<S>(st));
  std::vector<char> solved_m(n, 0), solved_n(n, 0);
  for (int i = 0; i < model.sites(); ++i)
    for (int a = 0; a < 4; ++a) {
      res.residual_phibar.push_back(track_poisson(track, cs.phibar(a, i), hp, model));
      res.residual_phi.push_back(track_poisson(track, cs.phi(a, i), hp, model));
    }
  for (const auto* list : {&res.residual_phibar, &res.residual_phi})
    for (const auto& r : *list) {
      auto [atom, value] = detail::solve_for_multiplier(r);
      const int idx = 4 * atom.site + atom.component;
      auto& slot = atom.kind == K::dpsi0 ? res.multiplier_dpsi0[idx] : res.multiplier_dpsibar0[idx];
      auto& flag = atom.kind == K::dpsi0 ? solved_m[idx] : solved_n[idx];
      if (flag && !functionals_match(slot, value)) throw InconsistentSystem("multiplier determined twice, differently");
      slot = value;
      flag = 1;
    }
  for (int idx = 0; idx < n; ++idx)
    if (!solved_m[idx] || !solved_n[idx]) throw InconsistentSystem("a multiplier was left undetermined");

  res.primary_solved = substitute<S>(hp, [&](const FieldAtom& x) -> std::optional<PhaseFunctional<S>> {
    if (x.kind == K::dpsi0) return res.multiplier_dpsi0[4 * x.site + x.component];
    if (x.kind == K::dpsibar0) return res.multiplier_dpsibar0[4 * x.site + x.component];
    return std::nullopt;
  });

  const S i = imag_unit<S>();
  const S h_c = model.hbar / model.c;
  const S c2 = model.c * model.c;
  bool ok_res = true, ok_vel = true, ok_weak = true;
  std::string detail;
  for (int site = 0; site < model.sites(); ++site)
    for (int a = 0; a < 4; ++a) {
      const int idx = 4 * site + a;
      if (track == Track::spinorial) {
        // −c²(i(ħ/c)∂̸ψ̄ + mψ̄) and c²(i(ħ/c)∂̸ψ − mψ), ∂̸₀ carried by the multiplier atoms
        auto slash_bar = field<S>(st, K::dpsibar0, a, site) + slashed_spatial_derivative(K::psibar, a, site, model, st);
        auto slash = field<S>(st, K::dpsi0, a, site) + slashed_spatial_derivative(K::psi, a, site, model, st);
        auto expect_bar = (slash_bar * (i * h_c) + field<S>(st, K::psibar, a, site, model.mass)) * (-c2);
        auto expect = (slash * (i * h_c) - field<S>(st, K::psi, a, site, model.mass)) * c2;
        if (!functionals_match(res.residual_phibar[idx], expect_bar) || !functionals_match(res.residual_phi[idx], expect)) {
          if (ok_res) detail = "component " + std::to_string(a) + " site " + std::to_string(site);
          ok_res = false;
        }
      } else {
        // momentum-form Hamiltonians carry the dynamics themselves; the
        // multipliers only have to vanish on the constraint surface
        ok_weak = ok_weak && on_shell(res.multiplier_dpsi0[idx], cs).is_zero() &&
                  on_shell(res.multiplier_dpsibar0[idx], cs).is_zero();
      }
      auto v = on_shell(evolution(track, field<S>(st, K::psi, a, site), res.primary_solved, model), cs);
      auto vbar = on_shell(evolution(track, field<S>(st, K::psibar, a, site), res.primary_solved, model), cs);
      ok_vel = ok_vel && functionals_match(v, dirac_velocity(false, a, site, model, st)) &&
               functionals_match(vbar, dirac_velocity(true, a, site, model, st));
    }
  if (track == Track::spinorial) res.report.add("consistency", "residuals_are_dirac_operators", ok_res, 0.0, detail);
  else res.report.add("consistency", "multipliers_weakly_zero", ok_weak);
  res.report.add("consistency", "evolution_is_dirac_equation", ok_vel);
  return res;
}

// The four variations of S_IZ: −(2/c²)δS/δψ, i(ħ/c)δS/δπ, (2/c²)δS/δψ̄,
// i(ħ/c)δS/δπ̄. On shell (∂̸₀π = pi_coef·∂̸₀ψ̄, ∂̸₀π̄ = pibar_coef·∂̸₀ψ) they
// collapse pairwise to the Dirac equation and its adjoint.
template <FieldScalar S>
Report field_equations(const DiracModel<S>& model) {
  using K = FieldKind;
  const Track track = Track::spinorial;
  const Statistics st = Statistics::commuting;
  auto cs = build_constraints(build_momenta(track, LagrangianKind::hermitian, model));
  auto h = build_hamiltonian(track, HamiltonianKind::hermitian, model);
  auto slice = liouville_form(track, model) - h;
  auto grad = gradient(slice, DerivativeSide::plain);
  auto d = [&](K k, int a, int s) {
    auto it = grad.find(FieldAtom{k, a, s});
    return (it == grad.end() ? PhaseFunctional<S>(st) : it->second) * (S(1) / model.volume);
  };
  const S i = imag_unit<S>();
  const S h_c = model.hbar / model.c;
  const S c2 = model.c * model.c;
  bool pair_adj = true, pair_dir = true, dirac_ok = true;
  for (int s = 0; s < model.sites(); ++s)
    for (int a = 0; a < 4; ++a) {
      // the Liouville terms contribute −∂̸₀π and −∂̸₀π̄ through integration by parts in time
      auto dS_dpsi = d(K::psi, a, s) - field<S>(st, K::dpsibar0, a, s, cs.pi_coef);
      auto dS_dpsibar = d(K::psibar, a, s) - field<S>(st, K::dpsi0, a, s, cs.pibar_coef);
      auto e1 = on_shell(dS_dpsi, cs) * (S(-2) / c2);
      auto e2 = on_shell(d(K::pi, a, s), cs) * (i * h_c);
      auto e3 = on_shell(dS_dpsibar, cs) * (S(2) / c2);
      auto e4 = on_shell(d(K::pibar, a, s), cs) * (i * h_c);
      pair_adj = pair_adj && functionals_match(e1, e4);
      pair_dir = pair_dir && functionals_match(e2, e3);
      auto slash = field<S>(st, K::dpsi0, a, s) + slashed_spatial_derivative(K::psi, a, s, model, st);
      auto slash_bar = field<S>(st, K::dpsibar0, a, s) + slashed_spatial_derivative(K::psibar, a, s, model, st);
      auto dirac = slash * (i * h_c) - field<S>(st, K::psi, a, s, model.mass);
      auto adjoint = slash_bar * (i * h_c) + field<S>(st, K::psibar, a, s, model.mass);
      dirac_ok = dirac_ok && functionals_match(e2, dirac) && functionals_match(e1, adjoint);
    }
  Report r;
  r.add("field_equations", "psi_and_pibar_variations_agree", pair_adj);
  r.add("field_equations", "pi_and_psibar_variations_agree", pair_dir);
  r.add("field_equations", "variations_are_dirac_operators", dirac_ok);
  return r;
}

// ----------------------------------------------------- canonical-data tables

template <FieldScalar S>
struct CanonicalEntry {
  FieldKind lhs;
  FieldKind rhs;
  S expected;  // coefficient of δ_ab δ_ij / v
  std::string label;
};

// Nonvanishing canonical Dirac brackets as printed, plus the vanishing ones.
template <FieldScalar S>
std::vector<CanonicalEntry<S>> canonical_table(Track track, const DiracModel<S>& model) {
  using K = FieldKind;
  const S i = imag_unit<S>();
  const S hc = model.hbar_c();
  const S half = from_ratio<S>(1, 2);
  std::vector<CanonicalEntry<S>> t;
  if (track == Track::spinorial) {
    t = {{K::psi, K::psibar, -(i / hc), "{psi,psibar}_D = -(i/hc) delta"},
         {K::pi, K::pibar, i * hc / S(4), "{pi,pibar}_D = (ihc/4) delta"},
         {K::psi, K::pi, half, "{psi,pi}_D = 1/2 delta"},
         {K::psibar, K::pibar, half, "{psibar,pibar}_D = 1/2 delta"},
         {K::psi, K::psi, S(0), "{psi,psi}_D = 0"},
         {K::psibar, K::psibar, S(0), "{psibar,psibar}_D = 0"},
         {K::pi, K::pi, S(0), "{pi,pi}_D = 0"},
         {K::pibar, K::pibar, S(0), "{pibar,pibar}_D = 0"},
         {K::psi, K::pibar, S(0), "{psi,pibar}_D = 0"},
         {K::psibar, K::pi, S(0), "{psibar,pi}_D = 0"}};
    return t;
  }
  const S sgn = track == Track::grassmann_left ? S(1) : S(-1);
  const S m_half = -half;
  for (auto [l, r] : {std::pair{K::psi, K::psibar}, std::pair{K::psibar, K::psi}})
    t.push_back({l, r, -(sgn * i / hc), "{" + to_string(l) + "," + to_string(r) + "}_D = " +
                                             (track == Track::grassmann_left ? "-" : "+") + "(i/hc) delta"});
  for (auto [l, r] : {std::pair{K::pi, K::pibar}, std::pair{K::pibar, K::pi}})
    t.push_back({l, r, sgn * i * hc / S(4), "{" + to_string(l) + "," + to_string(r) + "}_D = " +
                                                (track == Track::grassmann_left ? "+" : "-") + "(ihc/4) delta"});
  for (auto [l, r] : {std::pair{K::psi, K::pi}, std::pair{K::pi, K::psi}, std::pair{K::psibar, K::pibar},
                      std::pair{K::pibar, K::psibar}})
    t.push_back({l, r, m_half, "{" + to_string(l) + "," + to_string(r) + "}_D = -1/2 delta"});
  for (auto [l, r] : {std::pair{K::psi, K::psi}, std::pair{K::psibar, K::psibar}, std::pair{K::pi, K::pi},
                      std::pair{K::pibar, K::pibar}, std::pair{K::psi, K::pibar}, std::pair{K::psibar, K::pi}})
    t.push_back({l, r, S(0), "{" + to_string(l) + "," + to_string(r) + "}_D = 0"});
  return t;
}

// Every table entry, for every pair of components and of sites (up to
// max_sites of them).
template <FieldScalar S>
Report verify_canonical_brackets(Track track, const DiracModel<S>& model, int max_sites = 3) {
  Report r;
  const Statistics st = statistics_of(track);
  const int n = std::min(model.sites(), max_sites);
  for (const auto& e : canonical_table(track, model)) {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            auto v = track_dirac(track, field<S>(st, e.lhs, a, i), field<S>(st, e.rhs, b, j), model);
            S expected = (i == j && a == b) ? S(e.expected / model.volume) : S(0);
            if (!functionals_match(v, PhaseFunctional<S>::constant(st, expected))) {
              if (ok) detail = "got " + to_string(v) + " at components " + std::to_string(a) + "," +
                               std::to_string(b) + " sites " + std::to_string(i) + "," + std::to_string(j);
              ok = false;
            }
          }
    r.add("canonical_dirac_brackets", e.label, ok, 0.0, detail);
  }
  return r;
}

}  // namespace diracham
