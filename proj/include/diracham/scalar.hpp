#pragma once

// Scalar backends. Everything in the symbolic layer is templated on a scalar S
// that is either std::complex<double> or GaussianRational (exact a + ib with
// rational a, b). The free functions below are the only scalar vocabulary the
// rest of the library uses.

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <concepts>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace diracham {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using Complex = std::complex<double>;

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(int re) : re_(re) {}
  GaussianRational(long re) : re_(re) {}
  GaussianRational(Rational re) : re_(std::move(re)) {}
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    Rational den = o.re_ * o.re_ + o.im_ * o.im_;
    if (den == 0) throw std::domain_error("GaussianRational: division by zero");
    Rational re = (re_ * o.re_ + im_ * o.im_) / den;
    im_ = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(re);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
  friend GaussianRational operator+(const GaussianRational& a) { return a; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
    return os << '(' << z.re_ << ',' << z.im_ << ')';
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

template <class S>
concept FieldScalar = std::same_as<S, Complex> || std::same_as<S, GaussianRational>;

template <class S>
inline constexpr bool is_exact_v = std::same_as<S, GaussianRational>;

// Tolerance used wherever a floating backend stands in for an exact identity.
inline constexpr double kFloatTolerance = 1e-12;

inline Complex to_complex(const Complex& z) { return z; }
inline Complex to_complex(const GaussianRational& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline double magnitude(const Complex& z) { return std::abs(z); }
inline double magnitude(const GaussianRational& z) { return std::abs(to_complex(z)); }

inline bool is_zero(const Complex& z) { return z == Complex(0.0, 0.0); }
inline bool is_zero(const GaussianRational& z) { return z.real() == 0 && z.imag() == 0; }

inline Complex conjugate(const Complex& z) { return std::conj(z); }
inline GaussianRational conjugate(const GaussianRational& z) { return {z.real(), -z.imag()}; }

template <FieldScalar S>
S imag_unit() {
  if constexpr (is_exact_v<S>) return GaussianRational(Rational(0), Rational(1));
  else return Complex(0.0, 1.0);
}

template <FieldScalar S>
S from_ratio(long num, long den = 1) {
  if constexpr (is_exact_v<S>) return GaussianRational(Rational(num) / Rational(den));
  else return Complex(static_cast<double>(num) / static_cast<double>(den), 0.0);
}

// Parses a decimal or fraction literal ("2", "0.1", "-3/4") exactly.
Rational parse_rational(std::string_view text);

template <FieldScalar S>
S from_text(std::string_view text) {
  if constexpr (is_exact_v<S>) return GaussianRational(parse_rational(text));
  else return Complex(static_cast<double>(parse_rational(text)), 0.0);
}

// Exact square root of a nonnegative real rational; throws when it is not a
// perfect square (the exact backend refuses to round).
GaussianRational exact_sqrt(const GaussianRational& z);
inline Complex exact_sqrt(const Complex& z) { return std::sqrt(z); }

}  // namespace diracham

namespace Eigen {

template <>
struct NumTraits<diracham::GaussianRational> : GenericNumTraits<diracham::GaussianRational> {
  using Real = diracham::GaussianRational;
  using NonInteger = diracham::GaussianRational;
  using Literal = diracham::GaussianRational;
  using Nested = diracham::GaussianRational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 32
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static Real highest() { return Real(0); }
  static Real lowest() { return Real(0); }
  static int digits10() { return 0; }
};

}  // namespace Eigen
