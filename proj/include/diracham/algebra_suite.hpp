#pragma once

#include "diracham/gamma.hpp"
#include "diracham/grassmann.hpp"
#include "diracham/random.hpp"
#include "diracham/report.hpp"

#include <random>
#include <string>

namespace diracham {

// Test hooks for the negative controls.
enum class Fault { none, gamma, momentum };

Fault fault_from_string(const std::string& name);
std::string to_string(Fault f);

// Flips the sign of the first nonzero entry in row 0 of γ¹, which breaks
// the Clifford relations in every representation.
template <FieldScalar S>
GammaSet<S> corrupt_gamma(GammaSet<S> gs) {
  for (int col = 0; col < 4; ++col)
    if (!is_zero(gs.gamma[1](0, col))) {
      gs.gamma[1](0, col) = -gs.gamma[1](0, col);
      break;
    }
  return gs;
}

template <FieldScalar S>
Report gamma_report(Representation rep, Fault fault = Fault::none) {
  Report r;
  GammaSet<S> gs = build_gamma_set<S>(rep);
  if (fault == Fault::gamma) gs = corrupt_gamma(gs);
  for (const auto& c : check_clifford(gs)) r.add(c);
  for (const auto& c : check_adjoint_relations(gs)) r.add(c);
  return r;
}

template <FieldScalar S>
Report pauli_report() {
  Report r;
  for (const auto& c : check_pauli(pauli_set<S>())) r.add(c);
  return r;
}

// The printed examples plus the algebraic laws on random homogeneous
// elements over up to max_generators generators.
template <FieldScalar S>
Report grassmann_report(std::mt19937_64& rng, int samples, int max_generators = 12) {
  using G = GrassmannElement<S>;
  Report r;
  const std::string suite = "grassmann";
  {
    const int n = 3;
    auto x1 = G::generator(n, 0), x2 = G::generator(n, 1);
    auto x12 = gproduct(x1, x2);
    r.add(suite, "anticommuting_generators", gproduct(x2, x1) == -x12);
    r.add(suite, "nilpotent_generator", gproduct(x1, x1).is_zero());
    r.add(suite, "left_d1(xi1 xi2) = xi2", left_derivative(x12, 0) == x2);
    r.add(suite, "left_d2(xi1 xi2) = -xi1", left_derivative(x12, 1) == -x1);
    r.add(suite, "right_d1(xi1 xi2) = -xi2", right_derivative(x12, 0) == -x2);
    r.add(suite, "right_d2(xi1 xi2) = xi1", right_derivative(x12, 1) == x1);
    r.add(suite, "parity_examples",
          x1.parity() == Parity::odd && x12.parity() == Parity::even &&
              (G::scalar(n, S(1)) + x1).parity() == Parity::mixed && G(n).parity() == Parity::even);
  }
  int assoc = 0, graded = 0, left = 0, right = 0, rl = 0, even = 0;
  std::uniform_int_distribution<int> gens(1, max_generators);
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < samples; ++s) {
    const int n = gens(rng);
    auto pick = [&] { return coin(rng) ? Parity::odd : Parity::even; };
    auto f = random_grassmann<S>(rng, n, pick());
    auto g = random_grassmann<S>(rng, n, pick());
    auto h = random_grassmann<S>(rng, n, pick());
    const int ef = parity_sign(f.parity()) < 0, eg = parity_sign(g.parity()) < 0;
    assoc += !equivalent(gproduct(gproduct(f, g), h), gproduct(f, gproduct(g, h)));
    graded += !equivalent(gproduct(f, g), gproduct(g, f) * S((ef && eg) ? -1 : 1));
    if (!ef) even += !equivalent(gproduct(f, h), gproduct(h, f));
    auto fg = gproduct(f, g);
    for (int i = 0; i < n; ++i) {
      auto lhs_l = left_derivative(fg, i);
      auto rhs_l = gproduct(left_derivative(f, i), g) + gproduct(f, left_derivative(g, i)) * S(ef ? -1 : 1);
      left += !equivalent(lhs_l, rhs_l);
      auto lhs_r = right_derivative(fg, i);
      auto rhs_r = gproduct(f, right_derivative(g, i)) + gproduct(right_derivative(f, i), g) * S(eg ? -1 : 1);
      right += !equivalent(lhs_r, rhs_r);
      // ∂^L F = (−1)^{1+ε_F} ∂^R F
      rl += !equivalent(left_derivative(f, i), right_derivative(f, i) * S(ef ? 1 : -1));
    }
  }
  auto add_count = [&](const std::string& name, int failures) {
    r.add(suite, name, failures == 0, failures,
          failures ? std::to_string(failures) + " of " + std::to_string(samples) + " samples failed" : "");
  };
  add_count("associativity", assoc);
  add_count("graded_commutativity", graded);
  add_count("even_elements_commute", even);
  add_count("left_leibniz", left);
  add_count("right_leibniz", right);
  add_count("left_right_relation", rl);
  return r;
}

}  // namespace diracham
