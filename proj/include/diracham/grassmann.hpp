#pragma once

#include "diracham/scalar.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace diracham {

enum class Parity { even, odd, mixed };

std::string to_string(Parity p);

inline int parity_sign(Parity p) {
  if (p == Parity::mixed) throw std::invalid_argument("parity sign of a mixed-parity element");
  return p == Parity::even ? 1 : -1;
}

class IncompatibleAlgebras : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxGenerators = 16;

using Mask = std::uint32_t;

// Sign of the permutation that sorts the concatenation of two disjoint
// ordered generator lists: one transposition per (i in a, j in b) with i > j.
inline int merge_sign(Mask a, Mask b) {
  int swaps = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

// Sparse element of the Grassmann algebra over n generators; terms with zero
// coefficient are never stored.
template <FieldScalar S>
class GrassmannElement {
 public:
  explicit GrassmannElement(int n_generators = 1) : n_(n_generators) {
    if (n_ < 1 || n_ > kMaxGenerators)
      throw std::invalid_argument("generator count must lie in [1, 16]");
  }

  static GrassmannElement scalar(int n, const S& value) {
    GrassmannElement e(n);
    e.add_term(0, value);
    return e;
  }
  static GrassmannElement generator(int n, int i, const S& coef = S(1)) {
    GrassmannElement e(n);
    e.check_index(i);
    e.add_term(Mask(1) << i, coef);
    return e;
  }
  static GrassmannElement monomial(int n, Mask mask, const S& coef = S(1)) {
    GrassmannElement e(n);
    e.add_term(mask, coef);
    return e;
  }

  int n_generators() const { return n_; }
  const std::map<Mask, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S coefficient(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? S(0) : it->second;
  }

  void add_term(Mask m, const S& coef) {
    if (n_ < 32 && (m >> n_) != 0) throw std::out_of_range("monomial uses a generator beyond the algebra");
    if (diracham::is_zero(coef)) return;
    auto [it, inserted] = terms_.try_emplace(m, coef);
    if (!inserted) {
      it->second += coef;
      if (diracham::is_zero(it->second)) terms_.erase(it);
    }
  }

  Parity parity() const {
    bool has_even = false, has_odd = false;
    for (const auto& [m, c] : terms_) (std::popcount(m) % 2 ? has_odd : has_even) = true;
    if (has_even && has_odd) return Parity::mixed;
    return has_odd ? Parity::odd : Parity::even;
  }

  GrassmannElement& operator+=(const GrassmannElement& o) {
    require_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  GrassmannElement& operator-=(const GrassmannElement& o) {
    require_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  GrassmannElement& operator*=(const S& s) {
    if (diracham::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator-(GrassmannElement a) { return a *= S(-1); }
  friend GrassmannElement operator*(GrassmannElement a, const S& s) { return a *= s; }
  friend GrassmannElement operator*(const S& s, GrassmannElement a) { return a *= s; }
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
    return gproduct(a, b);
  }

  friend bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  void require_same(const GrassmannElement& o) const {
    if (o.n_ != n_)
      throw IncompatibleAlgebras("Grassmann elements over " + std::to_string(n_) + " and " +
                                 std::to_string(o.n_) + " generators");
  }
  void check_index(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("generator index " + std::to_string(i) + " out of range");
  }

 private:
  int n_;
  std::map<Mask, S> terms_;
};

template <FieldScalar S>
GrassmannElement<S> gproduct(const GrassmannElement<S>& a, const GrassmannElement<S>& b) {
  a.require_same(b);
  GrassmannElement<S> out(a.n_generators());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      S c = ca * cb;
      if (merge_sign(ma, mb) < 0) c = -c;
      out.add_term(ma | mb, c);
    }
  return out;
}

template <FieldScalar S>
Parity parity(const GrassmannElement<S>& f) {
  return f.parity();
}

template <FieldScalar S>
GrassmannElement<S> left_derivative(const GrassmannElement<S>& f, int i) {
  f.check_index(i);
  const Mask bit = Mask(1) << i;
  GrassmannElement<S> out(f.n_generators());
  for (const auto& [m, c] : f.terms()) {
    if (!(m & bit)) continue;
    int before = std::popcount(m & (bit - 1));
    out.add_term(m & ~bit, before % 2 ? S(-c) : c);
  }
  return out;
}

template <FieldScalar S>
GrassmannElement<S> right_derivative(const GrassmannElement<S>& f, int i) {
  f.check_index(i);
  const Mask bit = Mask(1) << i;
  GrassmannElement<S> out(f.n_generators());
  for (const auto& [m, c] : f.terms()) {
    if (!(m & bit)) continue;
    int after = std::popcount(m >> (i + 1));
    out.add_term(m & ~bit, after % 2 ? S(-c) : c);
  }
  return out;
}

// One term per line: "(re,im) * ξ1^ξ3", generators numbered from 1,
// the empty monomial written as "1". "xi" is accepted in place of "ξ".
template <FieldScalar S>
std::string to_text(const GrassmannElement<S>& f) {
  std::ostringstream os;
  os << "grassmann " << f.n_generators() << '\n';
  for (const auto& [m, c] : f.terms()) {
    if constexpr (is_exact_v<S>) os << '(' << c.real() << ',' << c.imag() << ")";
    else {
      os.precision(17);
      os << '(' << c.real() << ',' << c.imag() << ")";
    }
    os << " * ";
    if (m == 0) os << '1';
    bool first = true;
    for (int i = 0; i < f.n_generators(); ++i)
      if (m & (Mask(1) << i)) {
        os << (first ? "" : "^") << "ξ" << (i + 1);
        first = false;
      }
    os << '\n';
  }
  return os.str();
}

namespace detail {
Mask parse_monomial(const std::string& text, int n);
}

template <FieldScalar S>
GrassmannElement<S> grassmann_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line, word;
  int n = 0;
  if (!std::getline(is, line)) throw std::invalid_argument("empty Grassmann text");
  {
    std::istringstream head(line);
    if (!(head >> word >> n) || word != "grassmann") throw std::invalid_argument("missing 'grassmann N' header");
  }
  GrassmannElement<S> out(n);
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto open = line.find('('), comma = line.find(',', open), close = line.find(')', comma);
    auto star = line.find('*', close);
    if (open == std::string::npos || comma == std::string::npos || close == std::string::npos ||
        star == std::string::npos)
      throw std::invalid_argument("malformed Grassmann term: " + line);
    auto re = line.substr(open + 1, comma - open - 1), im = line.substr(comma + 1, close - comma - 1);
    S coef;
    if constexpr (is_exact_v<S>) coef = GaussianRational(parse_rational(re), parse_rational(im));
    else coef = Complex(std::stod(re), std::stod(im));
    out.add_term(detail::parse_monomial(line.substr(star + 1), n), coef);
  }
  return out;
}

// Exact backend: identity. Floating backend: coefficients agree to
// kFloatTolerance relative to the larger element.
template <FieldScalar S>
bool equivalent(const GrassmannElement<S>& a, const GrassmannElement<S>& b, double tol = kFloatTolerance) {
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    if (a.n_generators() != b.n_generators()) return false;
    double scale = 1.0;
    for (const auto* e : {&a, &b})
      for (const auto& [m, c] : e->terms()) scale = std::max(scale, magnitude(c));
    const auto diff = a - b;
    for (const auto& [m, c] : diff.terms())
      if (magnitude(c) > tol * scale) return false;
    return true;
  }
}

}  // namespace diracham
