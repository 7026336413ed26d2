#pragma once

#include "diracham/gamma.hpp"
#include "diracham/grassmann.hpp"
#include "diracham/lattice.hpp"
#include "diracham/scalar.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracham {

// dpsi0 / dpsibar0 are the velocity slots (slashed time derivatives), which
// double as the Lagrange multipliers of the primary Hamiltonian. psi1..pi2 are
// the reduced-chart coordinates.
enum class FieldKind : std::uint8_t { psi, psibar, pi, pibar, dpsi0, dpsibar0, psi1, pi1, psi2, pi2 };
inline constexpr int kFieldKinds = 10;

std::string to_string(FieldKind k);

// Row-type atoms are Dirac adjoints, column-type atoms are spinors.
constexpr bool is_row_type(FieldKind k) {
  switch (k) {
    case FieldKind::psibar:
    case FieldKind::pi:
    case FieldKind::dpsibar0:
    case FieldKind::pi1:
    case FieldKind::pi2:
      return true;
    default:
      return false;
  }
}

struct FieldAtom {
  FieldKind kind;
  int component;
  int site;
  auto operator<=>(const FieldAtom&) const = default;
};

std::string to_string(const FieldAtom& a);

enum class Statistics { commuting, grassmann };
enum class DerivativeSide { plain, left, right };

class FactorOrderingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingAtomError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Polynomial in field atoms. Commuting functionals keep the printed
// row-then-column order and stop at degree 2; Grassmann functionals store
// monomials sorted, with the reordering sign folded into the coefficient.
template <FieldScalar S>
class PhaseFunctional {
 public:
  using Monomial = std::vector<FieldAtom>;

  explicit PhaseFunctional(Statistics st = Statistics::commuting) : stats_(st) {}

  static PhaseFunctional constant(Statistics st, const S& value) {
    PhaseFunctional f(st);
    f.add_term({}, value);
    return f;
  }
  static PhaseFunctional atom(Statistics st, const FieldAtom& a, const S& coef = S(1)) {
    PhaseFunctional f(st);
    f.add_term({a}, coef);
    return f;
  }

  Statistics statistics() const { return stats_; }
  const std::map<Monomial, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max<int>(d, static_cast<int>(m.size()));
    return d;
  }

  // Grading by monomial degree; in the Grassmann track every atom is odd.
  Parity parity() const {
    bool has_even = false, has_odd = false;
    for (const auto& [m, c] : terms_) (m.size() % 2 ? has_odd : has_even) = true;
    if (has_even && has_odd) return Parity::mixed;
    return has_odd ? Parity::odd : Parity::even;
  }

  std::set<FieldAtom> support() const {
    std::set<FieldAtom> out;
    for (const auto& [m, c] : terms_) out.insert(m.begin(), m.end());
    return out;
  }

  S coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? S(0) : it->second;
  }

  void add_term(Monomial m, S coef) {
    if (diracham::is_zero(coef)) return;
    if (stats_ == Statistics::commuting) {
      if (m.size() > 2)
        throw FactorOrderingError("spinorial functionals are at most bilinear, got degree " +
                                  std::to_string(m.size()));
      if (m.size() == 2 && !(is_row_type(m[0].kind) && !is_row_type(m[1].kind)))
        throw FactorOrderingError("factor ordering violated: " + to_string(m[0]) + " " + to_string(m[1]) +
                                  " is not adjoint-then-spinor");
    } else {
      // insertion sort, one sign flip per transposition; repeated atoms vanish
      for (std::size_t i = 1; i < m.size(); ++i)
        for (std::size_t j = i; j > 0 && m[j] < m[j - 1]; --j) {
          std::swap(m[j], m[j - 1]);
          coef = -coef;
        }
      for (std::size_t i = 1; i < m.size(); ++i)
        if (m[i] == m[i - 1]) return;
    }
    auto [it, inserted] = terms_.try_emplace(std::move(m), coef);
    if (!inserted) {
      it->second += coef;
      if (diracham::is_zero(it->second)) terms_.erase(it);
    }
  }

  PhaseFunctional& operator+=(const PhaseFunctional& o) {
    require_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  PhaseFunctional& operator-=(const PhaseFunctional& o) {
    require_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  PhaseFunctional& operator*=(const S& s) {
    if (diracham::is_zero(s)) terms_.clear();
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend PhaseFunctional operator+(PhaseFunctional a, const PhaseFunctional& b) { return a += b; }
  friend PhaseFunctional operator-(PhaseFunctional a, const PhaseFunctional& b) { return a -= b; }
  friend PhaseFunctional operator-(PhaseFunctional a) { return a *= S(-1); }
  friend PhaseFunctional operator*(PhaseFunctional a, const S& s) { return a *= s; }
  friend PhaseFunctional operator*(const S& s, PhaseFunctional a) { return a *= s; }

  // Ordered product: the left factor's atoms precede the right factor's.
  friend PhaseFunctional operator*(const PhaseFunctional& a, const PhaseFunctional& b) {
    a.require_same(b);
    PhaseFunctional out(a.stats_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        out.add_term(std::move(m), ca * cb);
      }
    return out;
  }

  friend bool operator==(const PhaseFunctional& a, const PhaseFunctional& b) {
    return a.stats_ == b.stats_ && a.terms_ == b.terms_;
  }

  void require_same(const PhaseFunctional& o) const {
    if (o.stats_ != stats_) throw std::invalid_argument("mixing commuting and Grassmann functionals");
  }

 private:
  Statistics stats_;
  std::map<Monomial, S> terms_;
};

template <FieldScalar S>
std::string to_string(const PhaseFunctional<S>& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : f.terms()) {
    if (!out.empty()) out += " + ";
    Complex z = to_complex(c);
    std::ostringstream os;
    os.precision(12);
    if constexpr (is_exact_v<S>) os << '(' << c.real() << ',' << c.imag() << ')';
    else os << '(' << z.real() << ',' << z.imag() << ')';
    out += os.str();
    for (const auto& a : m) out += " " + to_string(a);
  }
  return out;
}

// Largest coefficient magnitude; used to quantify floating-point residuals.
template <FieldScalar S>
double max_coefficient(const PhaseFunctional<S>& f) {
  double best = 0.0;
  for (const auto& [m, c] : f.terms()) best = std::max(best, magnitude(c));
  return best;
}

template <FieldScalar S>
bool equivalent(const PhaseFunctional<S>& a, const PhaseFunctional<S>& b, double tol = kFloatTolerance) {
  if constexpr (is_exact_v<S>) return a == b;
  else return max_coefficient(a - b) <= tol;
}

// Physical setup shared by every symbolic computation: lattice, gamma
// representation, constants, and the exact spacing / cell volume.
template <FieldScalar S>
struct DiracModel {
  LatticeSpec lattice;
  GammaSet<S> gammas;
  S hbar;
  S c;
  S mass;
  S dx;
  S volume;

  S hbar_c() const { return hbar * c; }
  int sites() const { return lattice.total_sites(); }
};

template <FieldScalar S>
S scalar_from_rational(const Rational& r) {
  if constexpr (is_exact_v<S>) return GaussianRational(r);
  else return Complex(static_cast<double>(r), 0.0);
}

template <FieldScalar S>
DiracModel<S> make_model(const LatticeSpec& lattice, Representation rep, const S& hbar, const S& c,
                         const S& mass) {
  auto positive = [](const S& x) {
    Complex z = to_complex(x);
    return z.imag() == 0.0 && z.real() > 0.0;
  };
  if (!positive(hbar) || !positive(c)) throw std::invalid_argument("hbar and c must be positive reals");
  Complex m = to_complex(mass);
  if (m.imag() != 0.0 || m.real() < 0.0) throw std::invalid_argument("mass must be a nonnegative real");
  return DiracModel<S>{lattice,
                       build_gamma_set<S>(rep),
                       hbar,
                       c,
                       mass,
                       scalar_from_rational<S>(lattice.exact_spacing()),
                       scalar_from_rational<S>(lattice.exact_cell_volume())};
}

inline FieldAtom atom_of(FieldKind k, int component, int site) { return FieldAtom{k, component, site}; }

template <FieldScalar S>
PhaseFunctional<S> field(Statistics st, FieldKind k, int component, int site, const S& coef = S(1)) {
  return PhaseFunctional<S>::atom(st, FieldAtom{k, component, site}, coef);
}

// Per-atom values. Each atom on the lattice must be set before evaluation.
template <class V>
class FieldConfig {
 public:
  explicit FieldConfig(int sites) : sites_(sites), values_(static_cast<std::size_t>(sites) * kFieldKinds * 4) {}

  int sites() const { return sites_; }
  bool has(const FieldAtom& a) const { return in_range(a) && values_[index(a)].has_value(); }
  void set(const FieldAtom& a, V value) {
    if (!in_range(a)) throw std::out_of_range("atom outside the lattice: " + to_string(a));
    values_[index(a)] = std::move(value);
  }
  const V& get(const FieldAtom& a) const {
    if (!has(a)) throw MissingAtomError("no value for atom " + to_string(a));
    return *values_[index(a)];
  }

 private:
  bool in_range(const FieldAtom& a) const {
    return a.site >= 0 && a.site < sites_ && a.component >= 0 && a.component < 4;
  }
  std::size_t index(const FieldAtom& a) const {
    return (static_cast<std::size_t>(a.site) * kFieldKinds + static_cast<std::size_t>(a.kind)) * 4 + a.component;
  }
  int sites_;
  std::vector<std::optional<V>> values_;
};

template <FieldScalar S>
S evaluate(const PhaseFunctional<S>& f, const FieldConfig<S>& cfg) {
  S total(0);
  for (const auto& [m, c] : f.terms()) {
    S term = c;
    for (const auto& a : m) term *= cfg.get(a);
    total += term;
  }
  return total;
}

template <FieldScalar S>
GrassmannElement<S> evaluate(const PhaseFunctional<S>& f, const FieldConfig<GrassmannElement<S>>& cfg,
                             int n_generators) {
  GrassmannElement<S> total(n_generators);
  for (const auto& [m, c] : f.terms()) {
    auto term = GrassmannElement<S>::scalar(n_generators, c);
    for (const auto& a : m) term = gproduct(term, cfg.get(a));
    total += term;
  }
  return total;
}

// Partial derivative with respect to one atom (no 1/v). Commuting functionals
// take the ordinary derivative; Grassmann ones the left/right derivative.
template <FieldScalar S>
PhaseFunctional<S> partial_derivative(const PhaseFunctional<S>& f, const FieldAtom& atom, DerivativeSide side) {
  const bool grassmann = f.statistics() == Statistics::grassmann;
  if (grassmann == (side == DerivativeSide::plain))
    throw std::invalid_argument(grassmann ? "Grassmann functionals need a left or right derivative"
                                          : "spinorial functionals take only the plain derivative");
  PhaseFunctional<S> out(f.statistics());
  for (const auto& [m, c] : f.terms()) {
    const int n = static_cast<int>(m.size());
    for (int p = 0; p < n; ++p) {
      if (!(m[p] == atom)) continue;
      typename PhaseFunctional<S>::Monomial rest;
      rest.reserve(n - 1);
      for (int q = 0; q < n; ++q)
        if (q != p) rest.push_back(m[q]);
      int flips = side == DerivativeSide::left ? p : side == DerivativeSide::right ? n - 1 - p : 0;
      out.add_term(std::move(rest), flips % 2 ? S(-c) : c);
    }
  }
  return out;
}

// δF/δχ(r_i) = (1/v) ∂F/∂χ_i.
template <FieldScalar S>
PhaseFunctional<S> functional_derivative(const PhaseFunctional<S>& f, const FieldAtom& atom, DerivativeSide side,
                                         const S& cell_volume) {
  return partial_derivative(f, atom, side) * (S(1) / cell_volume);
}

// All nonzero partial derivatives in one pass, keyed by atom.
template <FieldScalar S>
std::map<FieldAtom, PhaseFunctional<S>> gradient(const PhaseFunctional<S>& f, DerivativeSide side) {
  const bool grassmann = f.statistics() == Statistics::grassmann;
  if (grassmann == (side == DerivativeSide::plain))
    throw std::invalid_argument("derivative side does not match the functional's statistics");
  std::map<FieldAtom, PhaseFunctional<S>> out;
  for (const auto& [m, c] : f.terms()) {
    const int n = static_cast<int>(m.size());
    for (int p = 0; p < n; ++p) {
      typename PhaseFunctional<S>::Monomial rest;
      rest.reserve(n - 1);
      for (int q = 0; q < n; ++q)
        if (q != p) rest.push_back(m[q]);
      int flips = side == DerivativeSide::left ? p : side == DerivativeSide::right ? n - 1 - p : 0;
      auto it = out.try_emplace(m[p], f.statistics()).first;
      it->second.add_term(std::move(rest), flips % 2 ? S(-c) : c);
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

// Replaces atoms by functionals (nullopt keeps the atom). Products are
// re-formed in the original order, so factor ordering is re-validated.
template <FieldScalar S>
PhaseFunctional<S> substitute(const PhaseFunctional<S>& f,
                              const std::function<std::optional<PhaseFunctional<S>>(const FieldAtom&)>& rule) {
  PhaseFunctional<S> out(f.statistics());
  for (const auto& [m, c] : f.terms()) {
    PhaseFunctional<S> term = PhaseFunctional<S>::constant(f.statistics(), c);
    for (const auto& a : m) {
      auto r = rule(a);
      term = term * (r ? *r : PhaseFunctional<S>::atom(f.statistics(), a));
    }
    out += term;
  }
  return out;
}

// Linear functional for the spatial part of the slashed derivative at one
// component: (Σ_μ γ^μ ∂_μ χ)_c(i) for spinor kinds, (Σ_μ ∂_μ χ̄ γ^μ)_c(i)
// for adjoint kinds, with periodic central differences. With fewer than 3
// sites per axis the two neighbours coincide and the stencil vanishes.
template <FieldScalar S>
PhaseFunctional<S> slashed_spatial_derivative(FieldKind kind, int component, int site, const DiracModel<S>& model,
                                              Statistics st) {
  PhaseFunctional<S> out(st);
  const S half_inv_dx = S(1) / (S(2) * model.dx);
  const bool row = is_row_type(kind);
  for (int mu = 1; mu <= model.lattice.dimension(); ++mu) {
    const auto& g = model.gammas[mu];
    const int fwd = model.lattice.neighbor(site, mu - 1, +1);
    const int bwd = model.lattice.neighbor(site, mu - 1, -1);
    for (int b = 0; b < 4; ++b) {
      const S& entry = row ? g(b, component) : g(component, b);
      if (is_zero(entry)) continue;
      out.add_term({FieldAtom{kind, b, fwd}}, entry * half_inv_dx);
      out.add_term({FieldAtom{kind, b, bwd}}, -(entry * half_inv_dx));
    }
  }
  return out;
}

// Σ_{i,a} v χ_a(i) κ_a(i) over the lattice for one row kind and one column kind.
template <FieldScalar S>
PhaseFunctional<S> lattice_pairing(FieldKind row, FieldKind col, const DiracModel<S>& model, Statistics st,
                                   const S& coef = S(1)) {
  PhaseFunctional<S> out(st);
  for (int i = 0; i < model.sites(); ++i)
    for (int a = 0; a < 4; ++a)
      out.add_term({FieldAtom{row, a, i}, FieldAtom{col, a, i}}, coef * model.volume);
  return out;
}

}  // namespace diracham
