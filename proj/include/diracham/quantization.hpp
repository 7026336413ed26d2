#pragma once

#include "diracham/dirac_bergmann.hpp"

#include <Eigen/SparseCore>

#include <bit>
#include <string>
#include <vector>

namespace diracham {

template <FieldScalar S>
using FockMatrix = Eigen::SparseMatrix<S>;

// Fermionic Fock space of sites × 4 modes, site-major: mode = 4·site + component.
// Jordan-Wigner string over all lower modes.
class FockSpace {
 public:
  static constexpr int kMaxModes = 12;

  explicit FockSpace(int sites) : modes_(4 * sites) {
    if (sites < 1 || modes_ > kMaxModes)
      throw std::invalid_argument("Fock space needs 1.." + std::to_string(kMaxModes / 4) + " sites, got " +
                                  std::to_string(sites));
  }
  int modes() const { return modes_; }
  int sites() const { return modes_ / 4; }
  int dimension() const { return 1 << modes_; }
  int mode(int site, int component) const {
    const int m = 4 * site + component;
    if (site < 0 || component < 0 || component > 3 || m >= modes_)
      throw std::out_of_range("mode index out of range: site " + std::to_string(site) + ", component " +
                              std::to_string(component));
    return m;
  }

 private:
  int modes_;
};

template <FieldScalar S>
struct FockOperator {
  FockMatrix<S> matrix;
  std::string label;
};

template <FieldScalar S>
FockMatrix<S> annihilation(const FockSpace& fock, int mode) {
  if (mode < 0 || mode >= fock.modes()) throw std::out_of_range("mode index out of range: " + std::to_string(mode));
  const unsigned bit = 1u << mode;
  std::vector<Eigen::Triplet<S>> entries;
  entries.reserve(fock.dimension() / 2);
  for (unsigned state = 0; state < static_cast<unsigned>(fock.dimension()); ++state) {
    if (!(state & bit)) continue;
    const int string = std::popcount(state & (bit - 1));
    entries.emplace_back(static_cast<int>(state ^ bit), static_cast<int>(state), string % 2 ? S(-1) : S(1));
  }
  FockMatrix<S> a(fock.dimension(), fock.dimension());
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

template <FieldScalar S>
FockMatrix<S> sparse_adjoint(const FockMatrix<S>& m) {
  FockMatrix<S> t = m.transpose();
  for (int k = 0; k < t.outerSize(); ++k)
    for (typename FockMatrix<S>::InnerIterator it(t, k); it; ++it) it.valueRef() = conjugate(it.value());
  return t;
}

template <FieldScalar S>
FockMatrix<S> anticommutator(const FockMatrix<S>& a, const FockMatrix<S>& b) {
  FockMatrix<S> out = a * b;
  out += b * a;
  return out;
}

template <FieldScalar S>
FockMatrix<S> commutator(const FockMatrix<S>& a, const FockMatrix<S>& b) {
  FockMatrix<S> out = a * b;
  out -= b * a;
  return out;
}

// max |m − value·I| over all entries.
template <FieldScalar S>
double identity_residual(const FockMatrix<S>& m, const S& value) {
  FockMatrix<S> id(m.rows(), m.cols());
  id.setIdentity();
  FockMatrix<S> diff = m - id * value;
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (typename FockMatrix<S>::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, magnitude(it.value()));
  return worst;
}

template <FieldScalar S>
bool equals_identity_multiple(const FockMatrix<S>& m, const S& value) {
  if constexpr (is_exact_v<S>) {
    FockMatrix<S> id(m.rows(), m.cols());
    id.setIdentity();
    FockMatrix<S> diff = m - id * value;
    for (int k = 0; k < diff.outerSize(); ++k)
      for (typename FockMatrix<S>::InnerIterator it(diff, k); it; ++it)
        if (!is_zero(it.value())) return false;
    return true;
  } else {
    return identity_residual(m, value) <= kFloatTolerance;
  }
}

// Recipe {·,·}_D ↦ factor·[·̂, ·̂γ⁰]₊: −(i/ħc) for the spinorial and left
// tracks, +(i/ħc) for the right track.
template <FieldScalar S>
S recipe_factor(Track t, const DiracModel<S>& model) {
  const S f = imag_unit<S>() / model.hbar_c();
  return t == Track::grassmann_right ? f : S(-f);
}

inline std::string recipe_text(Track t) {
  return t == Track::grassmann_right ? "+(i/hc)[A,Bg0]+" : "-(i/hc)[A,Bg0]+";
}

// Field operators of one track on a Fock space matching the model's lattice.
// ψ̂ = a/√v, ψ̄̂ = ψ̂†γ⁰, momenta through the track's operator identities and
// chart coordinates through the reduced chart.
template <FieldScalar S>
class QuantizedField {
 public:
  QuantizedField(Track track, const DiracModel<S>& model)
      : track_(track),
        model_(model),
        fock_(model.sites()),
        momenta_(build_momenta(track, LagrangianKind::hermitian, model)),
        chart_(reduced_chart(track, model)) {
    const S root = exact_sqrt(model.volume);
    for (int m = 0; m < fock_.modes(); ++m) {
      psi_.push_back(annihilation<S>(fock_, m) * (S(1) / root));
      psi_dag_.push_back(sparse_adjoint(psi_.back()));
    }
  }

  Track track() const { return track_; }
  const FockSpace& fock() const { return fock_; }
  const DiracModel<S>& model() const { return model_; }
  const MomentumTable<S>& momenta() const { return momenta_; }

  FockOperator<S> psi_dagger(int component, int site) const {
    return {psi_dag_[fock_.mode(site, component)], "psi^dag_" + std::to_string(component)};
  }

  FockOperator<S> field_operator(FieldKind kind, int component, int site) const {
    using K = FieldKind;
    const std::string label = to_string(FieldAtom{kind, component, site}) + "^";
    switch (kind) {
      case K::psi: return {psi_[fock_.mode(site, component)], label};
      case K::psibar: {
        FockMatrix<S> out(fock_.dimension(), fock_.dimension());
        for (int b = 0; b < 4; ++b) {
          const S& g = model_.gammas[0](b, component);
          if (!is_zero(g)) out += psi_dag_[fock_.mode(site, b)] * g;
        }
        return {out, label};
      }
      case K::pi: return {field_operator(K::psibar, component, site).matrix * momenta_.pi_coef, label};
      case K::pibar: return {field_operator(K::psi, component, site).matrix * momenta_.pibar_coef, label};
      case K::psi1:
      case K::psi2:
      case K::pi1:
      case K::pi2: {
        const int row = ReducedChart<S>::index_in(ReducedChart<S>::kNew, kind);
        FockMatrix<S> out(fock_.dimension(), fock_.dimension());
        for (int c = 0; c < 4; ++c) {
          const S& w = chart_.forward(row, c);
          if (!is_zero(w)) out += field_operator(ReducedChart<S>::kOld[c], component, site).matrix * w;
        }
        return {out, label};
      }
      default: break;
    }
    throw std::invalid_argument("no field operator for " + to_string(kind));
  }

  // (X̂γ⁰)_component for adjoint kinds; spinor kinds are returned unchanged.
  FockOperator<S> recipe_operand(FieldKind kind, int component, int site) const {
    if (!is_row_type(kind)) return field_operator(kind, component, site);
    FockMatrix<S> out(fock_.dimension(), fock_.dimension());
    for (int b = 0; b < 4; ++b) {
      const S& g = model_.gammas[0](b, component);
      if (!is_zero(g)) out += field_operator(kind, b, site).matrix * g;
    }
    return {out, "(" + to_string(FieldAtom{kind, component, site}) + "^ g0)"};
  }

  // Operator-identity factor relating an atom to ψ̂ (spinor kinds) or to
  // ψ̂†γ⁰ (adjoint kinds).
  S identity_factor(FieldKind kind) const {
    switch (kind) {
      case FieldKind::psi:
      case FieldKind::psibar: return S(1);
      case FieldKind::pi: return momenta_.pi_coef;
      case FieldKind::pibar: return momenta_.pibar_coef;
      default: break;
    }
    throw std::invalid_argument("identity factor defined for canonical atoms only");
  }

 private:
  Track track_;
  DiracModel<S> model_;
  FockSpace fock_;
  MomentumTable<S> momenta_;
  ReducedChart<S> chart_;
  std::vector<FockMatrix<S>> psi_;
  std::vector<FockMatrix<S>> psi_dag_;
};

template <FieldScalar S>
struct QuantizationVerdict {
  Track track;
  std::string pair;
  S classical_value;  // coefficient of δ_ab δ_ij / v
  std::string recipe;
  double operator_residual_norm = 0.0;
  bool passed = false;
};

// Classical Dirac bracket of two canonical (or chart) atoms, recipe applied,
// compared entrywise with the anticommutator on every pair of modes.
// Spinor-spinor pairs carry no recipe; their classical bracket and operator
// anticommutator must both vanish.
template <FieldScalar S>
QuantizationVerdict<S> quantize_and_verify(const QuantizedField<S>& q, FieldKind lhs, FieldKind rhs) {
  if (is_row_type(lhs))
    throw std::invalid_argument("recipe pairs a spinor on the left with an adjoint spinor on the right, got " +
                                to_string(lhs) + " on the left");
  const Track t = q.track();
  const auto& model = q.model();
  const Statistics st = statistics_of(t);
  const bool zero_map = !is_row_type(rhs);
  const S factor = recipe_factor(t, model);
  QuantizationVerdict<S> v{t, to_string(lhs) + "," + to_string(rhs), S(0), zero_map ? "zero" : recipe_text(t), 0.0,
                           true};
  const ReducedChart<S> chart = reduced_chart(t, model);
  auto classical_atom = [&](FieldKind k, int a, int i) {
    return ReducedChart<S>::index_in(ReducedChart<S>::kNew, k) >= 0 ? chart.coordinate(k, a, i) : field<S>(st, k, a, i);
  };
  const int sites = q.fock().sites();
  std::vector<FockMatrix<S>> rops;
  for (int j = 0; j < sites; ++j)
    for (int b = 0; b < 4; ++b) rops.push_back(q.recipe_operand(rhs, b, j).matrix);
  for (int i = 0; i < sites; ++i)
    for (int a = 0; a < 4; ++a) {
      const auto lop = q.field_operator(lhs, a, i).matrix;
      for (int j = 0; j < sites; ++j)
        for (int b = 0; b < 4; ++b) {
          auto classical = track_dirac(t, classical_atom(lhs, a, i), classical_atom(rhs, b, j), model);
          if (classical.degree() > 0) throw std::logic_error("canonical Dirac bracket is not a c-number");
          const S value = classical.coefficient({});
          if (i == j && a == b) v.classical_value = value * model.volume;
          FockMatrix<S> ac = anticommutator<S>(lop, rops[4 * j + b]);
          const S expected = zero_map ? S(0) : S(value / factor);
          if (zero_map && !is_zero(value)) v.passed = false;
          v.operator_residual_norm = std::max(v.operator_residual_norm, identity_residual(ac, expected));
          if (!equals_identity_multiple(ac, expected)) v.passed = false;
        }
    }
  return v;
}

// Every quantization identity for one track: the fundamental anticommutator, the
// printed spinorial anticommutators, the recipe on every canonical pair, the
// reduction of each pair to the fundamental one, and the reduced-chart pair.
template <FieldScalar S>
Report quantization_report(const QuantizedField<S>& q, std::vector<QuantizationVerdict<S>>* verdicts = nullptr) {
  using K = FieldKind;
  Report r;
  const Track t = q.track();
  const std::string suite = "quantization/" + to_string(t);
  const auto& model = q.model();
  const S v = model.volume;
  const S i = imag_unit<S>();
  const S hc = model.hbar_c();
  const int sites = q.fock().sites();

  auto check_family = [&](const std::string& name, K lk, bool dag_l, K rk, bool use_recipe_operand, bool dag_r,
                          const S& diag) {
    bool ok = true;
    double worst = 0.0;
    std::vector<FockMatrix<S>> lops, rops;
    for (int s = 0; s < sites; ++s)
      for (int a = 0; a < 4; ++a) {
        lops.push_back(dag_l ? q.psi_dagger(a, s).matrix : q.field_operator(lk, a, s).matrix);
        rops.push_back(dag_r ? q.psi_dagger(a, s).matrix
                             : (use_recipe_operand ? q.recipe_operand(rk, a, s) : q.field_operator(rk, a, s)).matrix);
      }
    for (int si = 0; si < sites; ++si)
      for (int a = 0; a < 4; ++a)
        for (int sj = 0; sj < sites; ++sj)
          for (int b = 0; b < 4; ++b) {
            const S expected = (si == sj && a == b) ? diag : S(0);
            auto ac = anticommutator<S>(lops[4 * si + a], rops[4 * sj + b]);
            worst = std::max(worst, identity_residual(ac, expected));
            ok = ok && equals_identity_multiple(ac, expected);
          }
    r.add(suite, name, ok, worst);
  };

  check_family("psi_psidag_anticommutator", K::psi, false, K::psi, false, true, S(1) / v);
  check_family("psi_psi_anticommutator", K::psi, false, K::psi, false, false, S(0));
  check_family("psidag_psidag_anticommutator", K::psi, true, K::psi, false, true, S(0));
  if (t == Track::spinorial) {
    check_family("pibar_pi_g0_anticommutator", K::pibar, false, K::pi, true, false, hc * hc / S(4) / v);
    check_family("psi_pi_g0_anticommutator", K::psi, false, K::pi, true, false, i * hc / S(2) / v);
    check_family("pibar_psidag_anticommutator", K::pibar, false, K::psi, false, true, -(i * hc / S(2)) / v);
  }

  // the recipe on every canonical pair, and its reduction to [ψ̂,ψ̂†]₊ = δ/v
  const S factor = recipe_factor(t, model);
  for (K lhs : {K::psi, K::pibar})
    for (K rhs : {K::psi, K::pibar, K::psibar, K::pi}) {
      auto verdict = quantize_and_verify(q, lhs, rhs);
      r.add(suite, "recipe{" + verdict.pair + "}", verdict.passed, verdict.operator_residual_norm,
            "classical " + scalar_text(verdict.classical_value));
      if (is_row_type(rhs)) {
        const S reduced = verdict.classical_value / (factor * q.identity_factor(lhs) * q.identity_factor(rhs));
        r.add(suite, "reduces_to_fundamental{" + verdict.pair + "}", is_zero(reduced - S(1)) ||
              (!is_exact_v<S> && magnitude(reduced - S(1)) <= kFloatTolerance), magnitude(reduced - S(1)));
      }
      if (verdicts) verdicts->push_back(verdict);
    }

  // reduced chart: [ψ̂₁, π̂₁γ⁰]₊ follows the recipe; spinorial value iħc δ
  auto chart_verdict = quantize_and_verify(q, K::psi1, K::pi1);
  r.add(suite, "recipe{psi1,pi1}", chart_verdict.passed, chart_verdict.operator_residual_norm,
        "classical " + scalar_text(chart_verdict.classical_value));
  if (verdicts) verdicts->push_back(chart_verdict);
  if (t == Track::spinorial) check_family("psi1_pi1_g0_anticommutator", K::psi1, false, K::pi1, true, false, i * hc / v);
  return r;
}

namespace detail {

// Quantized image of a spinorial atom: spinors map to their operators,
// adjoints to (X̂γ⁰) so that the recipe holds componentwise.
template <FieldScalar S>
FockMatrix<S> quantize_atom(const QuantizedField<S>& q, const FieldAtom& x) {
  return q.recipe_operand(x.kind, x.component, x.site).matrix;
}

template <FieldScalar S>
void require_bilinear(const PhaseFunctional<S>& f) {
  if (f.statistics() != Statistics::commuting) throw std::invalid_argument("Leibniz check runs in the spinorial track");
  for (const auto& [m, c] : f.terms())
    if (m.size() != 2 && !m.empty()) throw std::invalid_argument("Leibniz check needs bilinear functionals");
}

}  // namespace detail

template <FieldScalar S>
FockMatrix<S> quantize_bilinear(const QuantizedField<S>& q, const PhaseFunctional<S>& f) {
  detail::require_bilinear(f);
  FockMatrix<S> out(q.fock().dimension(), q.fock().dimension());
  for (const auto& [m, c] : f.terms()) {
    if (m.empty()) {
      FockMatrix<S> id(out.rows(), out.cols());
      id.setIdentity();
      out += id * c;
      continue;
    }
    FockMatrix<S> term = detail::quantize_atom(q, m[0]) * detail::quantize_atom(q, m[1]);
    out += term * c;
  }
  return out;
}

// Leibniz form of the Dirac bracket of bilinears,
// Σ c c′ [A{D,A′}_D D′ − A′{D′,A}_D D], compared with dirac_fo, then the
// quantized statement [f̂, ĝ] = (1/recipe) (\widehat{f,g}_D) on the Fock space.
template <FieldScalar S>
Report leibniz_quantization_check(const QuantizedField<S>& q, const PhaseFunctional<S>& f, const PhaseFunctional<S>& g) {
  detail::require_bilinear(f);
  detail::require_bilinear(g);
  if (q.track() != Track::spinorial) throw std::invalid_argument("Leibniz check runs in the spinorial track");
  const auto& model = q.model();
  const Statistics st = Statistics::commuting;
  PhaseFunctional<S> leibniz(st);
  auto atom = [&](const FieldAtom& x) { return PhaseFunctional<S>::atom(st, x); };
  for (const auto& [mf, cf] : f.terms()) {
    if (mf.empty()) continue;
    for (const auto& [mg, cg] : g.terms()) {
      if (mg.empty()) continue;
      const auto &A = mf[0], &D = mf[1], &A2 = mg[0], &D2 = mg[1];
      auto inner1 = dirac_fo(atom(D), atom(A2), model);
      auto inner2 = dirac_fo(atom(D2), atom(A), model);
      leibniz += atom(A) * inner1 * atom(D2) * (cf * cg);
      leibniz -= atom(A2) * inner2 * atom(D) * (cf * cg);
    }
  }
  auto direct = dirac_fo(f, g, model);
  Report r;
  r.add("leibniz", "classical_expansion", functionals_match(leibniz, direct), max_coefficient(leibniz - direct));
  FockMatrix<S> lhs = commutator<S>(quantize_bilinear(q, f), quantize_bilinear(q, g));
  FockMatrix<S> rhs = quantize_bilinear(q, direct) * (S(1) / recipe_factor(Track::spinorial, model));
  FockMatrix<S> diff = lhs - rhs;
  double worst = 0.0;
  bool exact = true;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (typename FockMatrix<S>::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, magnitude(it.value()));
      exact = exact && is_zero(it.value());
    }
  r.add("leibniz", "quantized_commutator", is_exact_v<S> ? exact : worst <= kFloatTolerance, worst);
  return r;
}

}  // namespace diracham
