// SPDX-License-Identifier: Apache-2.0

#include "mandel/exact_arith.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <utility>

namespace mandel {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch) != 0; });
}

Integer parse_integer(std::string_view text, bool allow_sign) {
  std::string_view body = text;
  bool negative = false;
  if (allow_sign && !body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (!all_digits(body)) throw EncodingError("malformed integer: '" + std::string(text) + "'");
  Integer value(std::string(body), 10);
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational::Rational(const mpq_class& value) : q_(value) { q_.canonicalize(); }

Rational Rational::normalize(const Integer& num, const Integer& den) {
  if (den == 0) throw EncodingError("zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Rational(q);
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, true));
  return normalize(parse_integer(text.substr(0, slash), true), parse_integer(text.substr(slash + 1), false));
}

std::string Rational::to_string() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::size_t Rational::bit_size() const {
  return std::max(mpz_sizeinbase(q_.get_num_mpz_t(), 2), mpz_sizeinbase(q_.get_den_mpz_t(), 2));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw EncodingError("division by zero");
  return Rational(Rational::canonical, mpq_class(a.q_ / b.q_));
}

Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

Rational pow2(long e) {
  Integer p(1);
  if (e >= 0) {
    p <<= static_cast<mp_bitcnt_t>(e);
    return Rational(p);
  }
  p <<= static_cast<mp_bitcnt_t>(-e);
  return Rational::normalize(1, p);
}

// ---------------------------------------------------------------------------
// Dyadic

Dyadic::Dyadic(Integer mantissa, long exponent) : mant_(std::move(mantissa)), exp_(exponent) {
  if (mant_ == 0) {
    exp_ = 0;
    return;
  }
  mp_bitcnt_t tz = mpz_scan1(mant_.get_mpz_t(), 0);
  if (tz > 0) {
    mant_ >>= tz;
    exp_ += static_cast<long>(tz);
  }
}

Dyadic Dyadic::parse(std::string_view text) {
  auto star = text.find('*');
  if (star == std::string_view::npos) return Dyadic(parse_integer(text, true), 0);
  std::string_view rest = text.substr(star + 1);
  if (rest.substr(0, 2) != "2^") throw EncodingError("malformed dyadic: '" + std::string(text) + "'");
  Integer e = parse_integer(rest.substr(2), true);
  if (!e.fits_slong_p()) throw EncodingError("dyadic exponent out of range");
  return Dyadic(parse_integer(text.substr(0, star), true), e.get_si());
}

Rational Dyadic::to_rational() const {
  if (exp_ >= 0) {
    Integer v = mant_;
    v <<= static_cast<mp_bitcnt_t>(exp_);
    return Rational(v);
  }
  Integer d(1);
  d <<= static_cast<mp_bitcnt_t>(-exp_);
  return Rational::normalize(mant_, d);
}

std::string Dyadic::to_string() const { return mant_.get_str() + "*2^" + std::to_string(exp_); }

double Dyadic::to_double() const { return std::ldexp(mant_.get_d(), static_cast<int>(exp_)); }

Dyadic Dyadic::rounded(long precision, Round dir) const {
  if (exp_ >= -precision) return *this;
  auto shift = static_cast<mp_bitcnt_t>(-precision - exp_);
  Integer m;
  if (dir == Round::down) {
    mpz_fdiv_q_2exp(m.get_mpz_t(), mant_.get_mpz_t(), shift);
  } else {
    mpz_cdiv_q_2exp(m.get_mpz_t(), mant_.get_mpz_t(), shift);
  }
  return Dyadic(std::move(m), -precision);
}

namespace {

// Mantissas of a and b brought to the common exponent min(a.exp, b.exp).
std::pair<Integer, Integer> aligned(const Dyadic& a, const Dyadic& b, long& exponent) {
  exponent = std::min(a.exponent(), b.exponent());
  Integer x = a.mantissa();
  Integer y = b.mantissa();
  if (a.exponent() > exponent) x <<= static_cast<mp_bitcnt_t>(a.exponent() - exponent);
  if (b.exponent() > exponent) y <<= static_cast<mp_bitcnt_t>(b.exponent() - exponent);
  return {std::move(x), std::move(y)};
}

}  // namespace

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.sign() == 0) return b;
  if (b.sign() == 0) return a;
  long e = 0;
  auto [x, y] = aligned(a, b, e);
  return Dyadic(Integer(x + y), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  if (b.sign() == 0) return a;
  long e = 0;
  auto [x, y] = aligned(a, b, e);
  return Dyadic(Integer(x - y), e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return Dyadic(Integer(a.mant_ * b.mant_), a.exp_ + b.exp_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int sa = a.sign();
  int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  // Position of the leading bit decides unless both agree.
  long top_a = static_cast<long>(mpz_sizeinbase(a.mant_.get_mpz_t(), 2)) + a.exp_;
  long top_b = static_cast<long>(mpz_sizeinbase(b.mant_.get_mpz_t(), 2)) + b.exp_;
  if (top_a != top_b) return sa > 0 ? top_a <=> top_b : top_b <=> top_a;
  long e = 0;
  auto [x, y] = aligned(a, b, e);
  return cmp(x, y) <=> 0;
}

std::strong_ordering operator<=>(const Dyadic& a, const Rational& b) { return a.to_rational() <=> b; }

Dyadic dyadic_round(const Rational& r, long precision, Round dir) {
  // floor or ceil of r * 2^precision, then scaled back.
  Integer num = r.num();
  Integer den = r.den();
  if (precision >= 0) {
    num <<= static_cast<mp_bitcnt_t>(precision);
  } else {
    den <<= static_cast<mp_bitcnt_t>(-precision);
  }
  Integer q;
  if (dir == Round::down) {
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  } else {
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  }
  return Dyadic(std::move(q), -precision);
}

// ---------------------------------------------------------------------------
// Intervals

DyadicInterval::DyadicInterval(Dyadic lo_, Dyadic hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (hi < lo) throw std::invalid_argument("interval with lo > hi: [" + lo.to_string() + ", " + hi.to_string() + "]");
}

DyadicInterval DyadicInterval::enclose(const Rational& lo, const Rational& hi, long precision) {
  return {dyadic_round(lo, precision, Round::down), dyadic_round(hi, precision, Round::up)};
}

namespace {

DyadicInterval outward(const Dyadic& lo, const Dyadic& hi, long precision) {
  return {lo.rounded(precision, Round::down), hi.rounded(precision, Round::up)};
}

}  // namespace

DyadicInterval iv_add(const DyadicInterval& a, const DyadicInterval& b, long precision) {
  return outward(a.lo + b.lo, a.hi + b.hi, precision);
}

DyadicInterval iv_sub(const DyadicInterval& a, const DyadicInterval& b, long precision) {
  return outward(a.lo - b.hi, a.hi - b.lo, precision);
}

DyadicInterval iv_mul(const DyadicInterval& a, const DyadicInterval& b, long precision) {
  if (a.is_point() && b.is_point()) {
    Dyadic p = a.lo * b.lo;
    return outward(p, p, precision);
  }
  Dyadic p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
  return outward(*mn, *mx, precision);
}

DyadicInterval iv_sqr(const DyadicInterval& a, long precision) {
  if (a.lo.sign() >= 0) return outward(a.lo * a.lo, a.hi * a.hi, precision);
  if (a.hi.sign() <= 0) return outward(a.hi * a.hi, a.lo * a.lo, precision);
  Dyadic l2 = a.lo * a.lo;
  Dyadic h2 = a.hi * a.hi;
  return outward(Dyadic(0), l2 < h2 ? h2 : l2, precision);
}

DyadicInterval iv_hull(const DyadicInterval& a, const DyadicInterval& b) {
  return {a.lo < b.lo ? a.lo : b.lo, a.hi < b.hi ? b.hi : a.hi};
}

ComplexBox ComplexBox::enclose(const ComplexRational& c, long precision) {
  return {DyadicInterval::enclose(c.re, c.re, precision), DyadicInterval::enclose(c.im, c.im, precision)};
}

ComplexBox box_step(const ComplexBox& z, const ComplexBox& c, long precision) {
  // (x + iy)^2 + c = (x^2 - y^2 + c_re) + i(2xy + c_im)
  DyadicInterval x2 = iv_sqr(z.re, precision);
  DyadicInterval y2 = iv_sqr(z.im, precision);
  DyadicInterval re = iv_add(iv_sub(x2, y2, precision), c.re, precision);
  DyadicInterval xy = iv_mul(z.re, z.im, precision);
  DyadicInterval two_xy{xy.lo.scaled(1), xy.hi.scaled(1)};
  DyadicInterval im = iv_add(two_xy, c.im, precision);
  return {std::move(re), std::move(im)};
}

DyadicInterval box_abs_sq_bounds(const ComplexBox& z, long precision) {
  return iv_add(iv_sqr(z.re, precision), iv_sqr(z.im, precision), precision);
}

// ---------------------------------------------------------------------------
// Oracles

RealOracle::RealOracle(Approximant approx, std::string label) : approx_(std::move(approx)), label_(std::move(label)) {
  if (!approx_) throw std::invalid_argument("oracle without approximant");
}

RealOracle RealOracle::constant(const Rational& value) {
  return RealOracle([value](unsigned) { return value; }, value.to_string());
}

RealOracle RealOracle::sqrt_of(const Rational& value) {
  if (value.sign() < 0) throw EncodingError("sqrt of a negative rational");
  return RealOracle(
      [value](unsigned m) {
        // floor(sqrt(value * 4^k)) / 2^k is within 2^-k of sqrt(value), k = m + 2.
        const unsigned long k = m + 2UL;
        Integer scaled = value.num();
        scaled <<= 2 * k;
        Integer floor_q;
        mpz_fdiv_q(floor_q.get_mpz_t(), scaled.get_mpz_t(), value.den().get_mpz_t());
        Integer root;
        mpz_sqrt(root.get_mpz_t(), floor_q.get_mpz_t());
        Integer den(1);
        den <<= k;
        return Rational::normalize(root, den);
      },
      "sqrt(" + value.to_string() + ")");
}

}  // namespace mandel
