#pragma once

#include "diracham/phase_space.hpp"

#include <random>
#include <vector>

namespace diracham {

// Small Gaussian rationals (p/q with |p| ≤ 5, q ≤ 4) so exact arithmetic stays
// cheap; the floating backend receives the same values.
template <FieldScalar S>
S random_scalar(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  Rational re(num(rng), den(rng)), im(num(rng), den(rng));
  if constexpr (is_exact_v<S>) return GaussianRational(re, im);
  else return Complex(static_cast<double>(re), static_cast<double>(im));
}

template <FieldScalar S>
S random_nonzero_scalar(std::mt19937_64& rng) {
  for (;;) {
    S s = random_scalar<S>(rng);
    if (!is_zero(s)) return s;
  }
}

struct RandomFunctionalSpec {
  std::vector<FieldKind> kinds;
  int sites = 1;
  int max_terms = 4;
  int max_degree = 2;
};

// Random polynomial over the given kinds. Commuting functionals get the
// adjoint-then-spinor order; Grassmann ones are homogeneous (all terms odd
// or all even) so the generalized brackets accept them.
template <FieldScalar S>
PhaseFunctional<S> random_functional(std::mt19937_64& rng, Statistics st, const RandomFunctionalSpec& spec) {
  std::vector<FieldKind> rows, cols;
  for (auto k : spec.kinds) (is_row_type(k) ? rows : cols).push_back(k);
  auto pick_atom = [&](const std::vector<FieldKind>& pool) {
    std::uniform_int_distribution<std::size_t> kd(0, pool.size() - 1);
    std::uniform_int_distribution<int> comp(0, 3), site(0, spec.sites - 1);
    return FieldAtom{pool[kd(rng)], comp(rng), site(rng)};
  };
  std::uniform_int_distribution<int> nterms(1, spec.max_terms);
  std::uniform_int_distribution<int> deg(0, spec.max_degree);
  PhaseFunctional<S> f(st);
  const bool odd = st == Statistics::grassmann && std::bernoulli_distribution(0.5)(rng);
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    int d = deg(rng);
    if (st == Statistics::grassmann) {
      if (odd) d = 1;
      else if (d == 1) d = 2;
    }
    typename PhaseFunctional<S>::Monomial m;
    if (st == Statistics::commuting) {
      if (d == 1) m.push_back(pick_atom(std::bernoulli_distribution(0.5)(rng) && !rows.empty() ? rows : cols));
      if (d == 2) {
        m.push_back(pick_atom(rows));
        m.push_back(pick_atom(cols));
      }
    } else {
      for (int k = 0; k < d; ++k) m.push_back(pick_atom(spec.kinds));
    }
    f.add_term(std::move(m), random_nonzero_scalar<S>(rng));
  }
  return f;
}

// Random homogeneous element over n generators: up to max_terms monomials,
// all of even or all of odd degree.
template <FieldScalar S>
GrassmannElement<S> random_grassmann(std::mt19937_64& rng, int n, Parity parity, int max_terms = 6) {
  if (parity == Parity::mixed) throw std::invalid_argument("random_grassmann draws homogeneous elements");
  GrassmannElement<S> e(n);
  std::uniform_int_distribution<Mask> mask(0, (Mask(1) << n) - 1);
  std::uniform_int_distribution<int> terms(1, max_terms);
  const int want = parity == Parity::odd ? 1 : 0;
  const int count = terms(rng);
  for (int t = 0; t < count; ++t) {
    Mask m = mask(rng);
    if (std::popcount(m) % 2 != want) m ^= 1;  // flip ξ1 to fix the degree parity
    e.add_term(m, random_nonzero_scalar<S>(rng));
  }
  return e;
}

}  // namespace diracham
