#include "diracham/lattice.hpp"
#include "diracham/scalar.hpp"

#include <algorithm>
#include <charconv>

namespace diracham {

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string_view exponent_part;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    exponent_part = text.substr(e + 1);
    text = text.substr(0, e);
  }
  boost::multiprecision::cpp_int digits = 0, scale = 1;
  bool seen_point = false, seen_digit = false;
  for (char ch : text) {
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits = digits * 10 + (ch - '0');
      if (seen_point) scale *= 10;
      seen_digit = true;
    } else {
      throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  Rational value(digits, scale);
  if (!exponent_part.empty()) {
    int ex = 0;
    auto [ptr, ec] = std::from_chars(exponent_part.data() + (exponent_part.front() == '+'),
                                     exponent_part.data() + exponent_part.size(), ex);
    if (ec != std::errc() || ptr != exponent_part.data() + exponent_part.size())
      throw std::invalid_argument("bad exponent in number");
    Rational p = 1;
    for (int k = 0; k < std::abs(ex); ++k) p *= 10;
    value = ex >= 0 ? value * p : value / p;
  }
  return negative ? Rational(-value) : value;
}

GaussianRational exact_sqrt(const GaussianRational& z) {
  if (z.imag() != 0 || z.real() < 0)
    throw std::domain_error("exact_sqrt: argument is not a nonnegative real");
  auto root = [](const boost::multiprecision::cpp_int& n) {
    boost::multiprecision::cpp_int r = boost::multiprecision::sqrt(n);
    if (r * r != n) throw std::domain_error("exact_sqrt: not a perfect square");
    return r;
  };
  return GaussianRational(Rational(root(numerator(z.real())), root(denominator(z.real()))));
}

LatticeSpec::LatticeSpec(int dimension, int sites_per_axis, Rational spacing)
    : dimension_(dimension), sites_per_axis_(sites_per_axis), spacing_(std::move(spacing)) {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("lattice dimension must be 1, 2 or 3");
  if (sites_per_axis < 1) throw std::invalid_argument("sites_per_axis must be positive");
  if (spacing_ <= 0) throw std::invalid_argument("lattice spacing must be positive");
}

double LatticeSpec::spacing() const { return static_cast<double>(spacing_); }

Rational LatticeSpec::exact_cell_volume() const {
  Rational v = 1;
  for (int d = 0; d < dimension_; ++d) v *= spacing_;
  return v;
}

int LatticeSpec::total_sites() const {
  int n = 1;
  for (int d = 0; d < dimension_; ++d) n *= sites_per_axis_;
  return n;
}

double LatticeSpec::cell_volume() const { return static_cast<double>(exact_cell_volume()); }

int LatticeSpec::neighbor(int site, int axis, int step) const {
  if (axis < 0 || axis >= dimension_) throw std::out_of_range("lattice axis out of range");
  int stride = 1;
  for (int d = 0; d < axis; ++d) stride *= sites_per_axis_;
  int coord = (site / stride) % sites_per_axis_;
  int shifted = ((coord + step) % sites_per_axis_ + sites_per_axis_) % sites_per_axis_;
  return site + (shifted - coord) * stride;
}

int LatticeSpec::coordinate(int site, int axis) const {
  int stride = 1;
  for (int d = 0; d < axis; ++d) stride *= sites_per_axis_;
  return (site / stride) % sites_per_axis_;
}

void LatticeSpec::require_stencil() const {
  if (sites_per_axis_ < 3)
    throw std::invalid_argument("central differences need at least 3 sites per axis");
}

}  // namespace diracham
