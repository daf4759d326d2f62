// SPDX-License-Identifier: Apache-2.0
//
// Exact rational arithmetic, dyadic numbers with directed rounding, and
// outward-rounded interval/box enclosures.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace mandel {

using Integer = mpz_class;

/// Raised when a textual or numeric encoding does not denote a number
/// (zero denominator, malformed text).
class EncodingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Canonical rational: positive denominator, lowest terms. Immutable in
/// practice; every constructor and operator returns canonical values.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const Integer& value) : q_(value) {}
  explicit Rational(const mpq_class& value);

  /// Reduces num/den; throws EncodingError when den == 0.
  static Rational normalize(const Integer& num, const Integer& den);
  /// Parses "[+-]num[/den]".
  static Rational parse(std::string_view text);

  [[nodiscard]] Integer num() const { return q_.get_num(); }
  [[nodiscard]] Integer den() const { return q_.get_den(); }
  [[nodiscard]] const mpq_class& value() const { return q_; }
  [[nodiscard]] int sign() const { return sgn(q_); }
  [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }
  [[nodiscard]] std::string to_string() const;
  /// Bit length of the larger of |numerator| and denominator.
  [[nodiscard]] std::size_t bit_size() const;
  [[nodiscard]] double to_double() const { return q_.get_d(); }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(canonical, mpq_class(a.q_ + b.q_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(canonical, mpq_class(a.q_ - b.q_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(canonical, mpq_class(a.q_ * b.q_)); }
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(canonical, mpq_class(-a.q_)); }
  Rational& operator+=(const Rational& b) { q_ += b.q_; return *this; }
  Rational& operator-=(const Rational& b) { q_ -= b.q_; return *this; }
  Rational& operator*=(const Rational& b) { q_ *= b.q_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return cmp(a.q_, b.q_) <=> 0;
  }

 private:
  // GMP arithmetic on canonical operands already yields canonical results.
  struct Canonical {};
  static constexpr Canonical canonical{};
  Rational(Canonical, mpq_class value) : q_(std::move(value)) {}

  mpq_class q_;
};

/// Free-function spelling of Rational::normalize.
inline Rational rat_normalize(const Integer& num, const Integer& den) { return Rational::normalize(num, den); }

Rational abs(const Rational& q);
/// 2^e as an exact rational, e may be negative.
Rational pow2(long e);

struct ComplexRational {
  Rational re;
  Rational im;

  friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
};

inline ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) { return {a.re + b.re, a.im + b.im}; }
inline ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
/// |z|^2, exact.
inline Rational abs_sq(const ComplexRational& z) { return z.re * z.re + z.im * z.im; }

enum class Round { down, up };

/// mantissa * 2^exponent with an odd (or zero) mantissa.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long value) : Dyadic(Integer(value), 0) {}  // NOLINT(google-explicit-constructor)
  Dyadic(Integer mantissa, long exponent);

  /// Parses "mant*2^exp" (a bare integer is accepted too).
  static Dyadic parse(std::string_view text);

  [[nodiscard]] const Integer& mantissa() const { return mant_; }
  [[nodiscard]] long exponent() const { return exp_; }
  [[nodiscard]] int sign() const { return sgn(mant_); }
  [[nodiscard]] Rational to_rational() const;
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] double to_double() const;

  /// Largest (down) or smallest (up) multiple of 2^-precision on the given side.
  [[nodiscard]] Dyadic rounded(long precision, Round dir) const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a) { return Dyadic(-a.mant_, a.exp_); }
  /// Exact multiplication by 2^k.
  [[nodiscard]] Dyadic scaled(long k) const { return Dyadic(mant_, exp_ + k); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.exp_ == b.exp_ && a.mant_ == b.mant_; }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend std::strong_ordering operator<=>(const Dyadic& a, const Rational& b);
  friend bool operator==(const Dyadic& a, const Rational& b) { return (a <=> b) == 0; }

 private:
  Integer mant_;
  long exp_ = 0;
};

/// Rounds r to a multiple of 2^-precision in the given direction; the
/// result is within 2^-precision of r.
Dyadic dyadic_round(const Rational& r, long precision, Round dir);

struct DyadicInterval {
  Dyadic lo;
  Dyadic hi;

  DyadicInterval() = default;
  DyadicInterval(Dyadic lo_, Dyadic hi_);
  static DyadicInterval point(const Dyadic& d) { return {d, d}; }
  /// Tightest enclosure of [lo, hi] with endpoints on the 2^-precision grid.
  static DyadicInterval enclose(const Rational& lo, const Rational& hi, long precision);

  [[nodiscard]] Dyadic width() const { return hi - lo; }
  [[nodiscard]] bool contains(const Rational& x) const { return lo <= x && hi >= x; }
  [[nodiscard]] bool contains(const DyadicInterval& other) const { return lo <= other.lo && other.hi <= hi; }
  [[nodiscard]] bool is_point() const { return lo == hi; }

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

DyadicInterval iv_add(const DyadicInterval& a, const DyadicInterval& b, long precision);
DyadicInterval iv_sub(const DyadicInterval& a, const DyadicInterval& b, long precision);
DyadicInterval iv_mul(const DyadicInterval& a, const DyadicInterval& b, long precision);
DyadicInterval iv_sqr(const DyadicInterval& a, long precision);
/// Smallest interval containing both arguments.
DyadicInterval iv_hull(const DyadicInterval& a, const DyadicInterval& b);

struct ComplexBox {
  DyadicInterval re;
  DyadicInterval im;

  static ComplexBox point(const Dyadic& re, const Dyadic& im) {
    return {DyadicInterval::point(re), DyadicInterval::point(im)};
  }
  /// Enclosure of a rational point, rounded outward to 2^-precision.
  static ComplexBox enclose(const ComplexRational& c, long precision);

  [[nodiscard]] bool contains(const ComplexRational& z) const { return re.contains(z.re) && im.contains(z.im); }
  [[nodiscard]] bool contains(const ComplexBox& b) const { return re.contains(b.re) && im.contains(b.im); }
  [[nodiscard]] bool is_point() const { return re.is_point() && im.is_point(); }

  friend bool operator==(const ComplexBox&, const ComplexBox&) = default;
};

/// Encloses { z^2 + c : z in z_box, c in c_box }.
ComplexBox box_step(const ComplexBox& z, const ComplexBox& c, long precision);
/// Encloses { |z|^2 : z in z_box }.
DyadicInterval box_abs_sq_bounds(const ComplexBox& z, long precision);

/// A computable real, given by approximants q_m with |x - q_m| < 2^-m.
/// Oracles are total by contract.
class RealOracle {
 public:
  using Approximant = std::function<Rational(unsigned)>;

  RealOracle(Approximant approx, std::string label);

  static RealOracle constant(const Rational& value);
  /// sqrt(value) for value >= 0, approximated from below by integer square roots.
  static RealOracle sqrt_of(const Rational& value);

  [[nodiscard]] Rational query(unsigned m) const { return approx_(m); }
  [[nodiscard]] const std::string& label() const { return label_; }

 private:
  Approximant approx_;
  std::string label_;
};

inline Rational oracle_query(const RealOracle& o, unsigned m) { return o.query(m); }

}  // namespace mandel
