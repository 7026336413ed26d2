#pragma once

#include "diracham/phase_space.hpp"

#include <string>

namespace diracham {

enum class BracketKind { poisson_fo, dirac_fo, poisson_l, poisson_r, dirac_l, dirac_r };

std::string to_string(BracketKind k);

enum class Side { left, right };

namespace detail {

template <FieldScalar S>
using Gradient = std::map<FieldAtom, PhaseFunctional<S>>;

// (1/v) Σ_{i,a} ∂f/∂(ka)_a(i) · ∂g/∂(kb)_a(i): the discrete
// v Σ (δf/δka)(δg/δkb) with the product order as written.
template <FieldScalar S>
PhaseFunctional<S> contract(const Gradient<S>& df, FieldKind ka, const Gradient<S>& dg, FieldKind kb,
                            const S& volume, Statistics st) {
  PhaseFunctional<S> out(st);
  for (const auto& [atom, piece] : df) {
    if (atom.kind != ka) continue;
    auto it = dg.find(FieldAtom{kb, atom.component, atom.site});
    if (it == dg.end()) continue;
    out += piece * it->second;
  }
  return out * (S(1) / volume);
}

template <FieldScalar S>
void require_commuting(const PhaseFunctional<S>& f, const PhaseFunctional<S>& g) {
  if (f.statistics() != Statistics::commuting || g.statistics() != Statistics::commuting)
    throw std::invalid_argument("factor-ordered brackets take spinorial (commuting) functionals");
}

template <FieldScalar S>
int grassmann_sign(const PhaseFunctional<S>& f) {
  if (f.statistics() != Statistics::grassmann)
    throw std::invalid_argument("generalized brackets take Grassmann functionals");
  Parity p = f.parity();
  if (p == Parity::mixed) throw std::invalid_argument("generalized brackets need homogeneous parity");
  return parity_sign(p);
}

}  // namespace detail

// v Σ [f_ψ g_π − g_ψ f_π + g_π̄ f_ψ̄ − f_π̄ g_ψ̄], products in the printed order.
template <FieldScalar S>
PhaseFunctional<S> poisson_fo(const PhaseFunctional<S>& f, const PhaseFunctional<S>& g, const DiracModel<S>& model) {
  detail::require_commuting(f, g);
  using K = FieldKind;
  const auto df = gradient(f, DerivativeSide::plain), dg = gradient(g, DerivativeSide::plain);
  const auto st = Statistics::commuting;
  const S& v = model.volume;
  return detail::contract(df, K::psi, dg, K::pi, v, st) - detail::contract(dg, K::psi, df, K::pi, v, st) +
         detail::contract(dg, K::pibar, df, K::psibar, v, st) - detail::contract(df, K::pibar, dg, K::psibar, v, st);
}

template <FieldScalar S>
PhaseFunctional<S> dirac_fo(const PhaseFunctional<S>& f, const PhaseFunctional<S>& g, const DiracModel<S>& model) {
  detail::require_commuting(f, g);
  using K = FieldKind;
  const auto df = gradient(f, DerivativeSide::plain), dg = gradient(g, DerivativeSide::plain);
  const auto st = Statistics::commuting;
  const S& v = model.volume;
  const S i = imag_unit<S>();
  const S hc = model.hbar_c();
  PhaseFunctional<S> psi_terms =
      detail::contract(df, K::psi, dg, K::psibar, v, st) - detail::contract(dg, K::psi, df, K::psibar, v, st);
  PhaseFunctional<S> pi_terms =
      detail::contract(df, K::pibar, dg, K::pi, v, st) - detail::contract(dg, K::pibar, df, K::pi, v, st);
  return poisson_fo(f, g, model) * from_ratio<S>(1, 2) - psi_terms * (i / hc) - pi_terms * (i * hc / S(4));
}

// Poisson bracket of the reduced phase space: only (ψ₁, π₁) are canonical.
// Spinorial: f_q g_p − g_q f_p. Grassmann: the generalized bracket restricted
// to the pair, (−1)^ε [F_q G_p + F_p G_q] with the side's derivatives.
template <FieldScalar S>
PhaseFunctional<S> poisson_reduced(const PhaseFunctional<S>& f, const PhaseFunctional<S>& g,
                                   const DiracModel<S>& model, Side side = Side::left) {
  using K = FieldKind;
  const S& v = model.volume;
  const auto st = f.statistics();
  f.require_same(g);
  if (st == Statistics::commuting) {
    const auto df = gradient(f, DerivativeSide::plain), dg = gradient(g, DerivativeSide::plain);
    return detail::contract(df, K::psi1, dg, K::pi1, v, st) - detail::contract(dg, K::psi1, df, K::pi1, v, st);
  }
  const int sf = detail::grassmann_sign(f), sg = detail::grassmann_sign(g);
  const auto ds = side == Side::left ? DerivativeSide::left : DerivativeSide::right;
  const auto df = gradient(f, ds), dg = gradient(g, ds);
  return (detail::contract(df, K::psi1, dg, K::pi1, v, st) + detail::contract(df, K::pi1, dg, K::psi1, v, st)) *
         S(side == Side::left ? sf : sg);
}

// Generalized Poisson bracket, Grassmann track. Side L: (−1)^{ε_F} with left
// derivatives; side R: (−1)^{ε_G} with right derivatives; four plus-signed
// products F_ψ G_π + F_π G_ψ + F_ψ̄ G_π̄ + F_π̄ G_ψ̄.
template <FieldScalar S>
PhaseFunctional<S> poisson_grassmann(const PhaseFunctional<S>& f, const PhaseFunctional<S>& g, Side side,
                                     const DiracModel<S>& model) {
  using K = FieldKind;
  const int sf = detail::grassmann_sign(f), sg = detail::grassmann_sign(g);
  const int sign = side == Side::left ? sf : sg;
  const auto ds = side == Side::left ? DerivativeSide::left : DerivativeSide::right;
  const auto df = gradient(f, ds), dg = gradient(g, ds);
  const auto st = Statistics::grassmann;
  const S& v = model.volume;
  PhaseFunctional<S> sum = detail::contract(df, K::psi, dg, K::pi, v, st) + detail::contract(df, K::pi, dg, K::psi, v, st) +
                           detail::contract(df, K::psibar, dg, K::pibar, v, st) +
                           detail::contract(df, K::pibar, dg, K::psibar, v, st);
  return sum * S(sign);
}

// Dirac brackets of the Grassmann track, with the constraint-matrix terms in
// the printed closed form.
template <FieldScalar S>
PhaseFunctional<S> dirac_grassmann(const PhaseFunctional<S>& f, const PhaseFunctional<S>& g, Side side,
                                   const DiracModel<S>& model) {
  using K = FieldKind;
  const int sf = detail::grassmann_sign(f), sg = detail::grassmann_sign(g);
  const int sign = side == Side::left ? sf : sg;
  const auto ds = side == Side::left ? DerivativeSide::left : DerivativeSide::right;
  const auto df = gradient(f, ds), dg = gradient(g, ds);
  const auto st = Statistics::grassmann;
  const S& v = model.volume;
  const S i = imag_unit<S>();
  const S hc = model.hbar_c();
  PhaseFunctional<S> psi_terms =
      detail::contract(df, K::psi, dg, K::psibar, v, st) + detail::contract(df, K::psibar, dg, K::psi, v, st);
  PhaseFunctional<S> pi_terms =
      detail::contract(df, K::pi, dg, K::pibar, v, st) + detail::contract(df, K::pibar, dg, K::pi, v, st);
  const S flip = side == Side::left ? S(sign) : S(-sign);
  return poisson_grassmann(f, g, side, model) * from_ratio<S>(1, 2) + psi_terms * (flip * i / hc) -
         pi_terms * (flip * i * hc / S(4));
}

template <FieldScalar S>
PhaseFunctional<S> bracket(BracketKind kind, const PhaseFunctional<S>& f, const PhaseFunctional<S>& g,
                           const DiracModel<S>& model) {
  switch (kind) {
    case BracketKind::poisson_fo: return poisson_fo(f, g, model);
    case BracketKind::dirac_fo: return dirac_fo(f, g, model);
    case BracketKind::poisson_l: return poisson_grassmann(f, g, Side::left, model);
    case BracketKind::poisson_r: return poisson_grassmann(f, g, Side::right, model);
    case BracketKind::dirac_l: return dirac_grassmann(f, g, Side::left, model);
    case BracketKind::dirac_r: return dirac_grassmann(f, g, Side::right, model);
  }
  throw std::logic_error("unknown bracket kind");
}

}  // namespace diracham
