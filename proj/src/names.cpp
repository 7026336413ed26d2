#include "diracham/brackets.hpp"
#include "diracham/dirac_bergmann.hpp"
#include "diracham/gamma.hpp"
#include "diracham/grassmann.hpp"
#include "diracham/phase_space.hpp"

#include <array>

namespace diracham {

std::string to_string(Representation rep) {
  switch (rep) {
    case Representation::dirac: return "dirac";
    case Representation::weyl: return "weyl";
    case Representation::majorana: return "majorana";
  }
  return "?";
}

Representation representation_from_string(const std::string& name) {
  for (auto rep : kAllRepresentations)
    if (to_string(rep) == name) return rep;
  throw std::invalid_argument("unknown representation '" + name + "'");
}

std::string to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::mixed: return "mixed";
  }
  return "?";
}

std::string to_string(FieldKind k) {
  static constexpr std::array<const char*, kFieldKinds> names{
      "psi", "psibar", "pi", "pibar", "dpsi0", "dpsibar0", "psi1", "pi1", "psi2", "pi2"};
  return names[static_cast<int>(k)];
}

std::string to_string(const FieldAtom& a) {
  return to_string(a.kind) + "_" + std::to_string(a.component) + "(" + std::to_string(a.site) + ")";
}

std::string to_string(BracketKind k) {
  switch (k) {
    case BracketKind::poisson_fo: return "poisson_fo";
    case BracketKind::dirac_fo: return "dirac_fo";
    case BracketKind::poisson_l: return "poisson_l";
    case BracketKind::poisson_r: return "poisson_r";
    case BracketKind::dirac_l: return "dirac_l";
    case BracketKind::dirac_r: return "dirac_r";
  }
  return "?";
}

std::string to_string(Track t) {
  switch (t) {
    case Track::spinorial: return "spinorial";
    case Track::grassmann_left: return "grassmann-l";
    case Track::grassmann_right: return "grassmann-r";
  }
  return "?";
}

Track track_from_string(const std::string& name) {
  for (auto t : kAllTracks)
    if (to_string(t) == name) return t;
  throw std::invalid_argument("unknown track '" + name + "' (spinorial, grassmann-l, grassmann-r)");
}

std::string to_string(HamiltonianKind k) {
  switch (k) {
    case HamiltonianKind::canonical: return "canonical";
    case HamiltonianKind::primary: return "primary";
    case HamiltonianKind::bjorken_drell: return "bjorken_drell";
    case HamiltonianKind::hermitian: return "hermitian";
    case HamiltonianKind::reduced: return "reduced";
  }
  return "?";
}

namespace detail {

Mask parse_monomial(const std::string& text, int n) {
  Mask m = 0;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  if (pos < text.size() && text[pos] == '1') {
    ++pos;
    skip_space();
    if (pos != text.size()) throw std::invalid_argument("trailing text after unit monomial: " + text);
    return 0;
  }
  int last = -1;
  while (pos < text.size()) {
    static const std::string xi = "ξ";
    if (text.compare(pos, xi.size(), xi) == 0) pos += xi.size();
    else if (text.compare(pos, 2, "xi") == 0) pos += 2;
    else throw std::invalid_argument("expected generator in monomial: " + text);
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw std::invalid_argument("generator without index: " + text);
    int g = std::stoi(text.substr(start, pos - start)) - 1;
    if (g < 0 || g >= n) throw std::out_of_range("generator index out of range in: " + text);
    if (g <= last) throw std::invalid_argument("monomial generators must be strictly increasing: " + text);
    last = g;
    m |= Mask(1) << g;
    skip_space();
    if (pos < text.size()) {
      if (text[pos] != '^') throw std::invalid_argument("expected '^' in monomial: " + text);
      ++pos;
      skip_space();
    }
  }
  if (last < 0) throw std::invalid_argument("empty monomial: " + text);
  return m;
}

}  // namespace detail

}  // namespace diracham
