// SPDX-License-Identifier: Apache-2.0

#include "mandel/rational.hpp"

#include <algorithm>
#include <stdexcept>

namespace mandel::rational {

Natural cantor_pair(const Natural& u, const Natural& v) {
  Natural w = u + v;
  return w * (w + 1) / 2 + u;
}

std::pair<Natural, Natural> cantor_unpair(const Natural& m) {
  if (m < 0) throw std::invalid_argument("cantor_unpair of a negative number");
  Natural root;
  Natural disc = 8 * m + 1;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  Natural w = (root - 1) / 2;
  Natural t = w * (w + 1) / 2;
  Natural u = m - t;
  return {u, Natural(w - u)};
}

RationalCode phi_components(const Natural& n) {
  if (n < 0) throw std::invalid_argument("phi_decode of a negative number");
  auto [u, v] = cantor_unpair(n / 2);
  return {static_cast<int>(mpz_odd_p(n.get_mpz_t()) != 0), u, v};
}

Rational phi_decode(const Natural& n) {
  RationalCode code = phi_components(n);
  Natural num = code.shifted_num - 1;
  if (code.sign_bit == 1) num = -num;
  return Rational::normalize(num, code.den_minus_one + 1);
}

Natural phi_encode(const Rational& q) {
  auto index = [](int s, const Natural& u, const Natural& v) { return Natural(2 * cantor_pair(u, v) + s); };
  const Natural num = q.num();
  const Natural den = q.den();
  if (q.is_zero()) return index(0, 1, 0);
  Natural abs_num = num < 0 ? Natural(-num) : num;
  // Scaled representatives k*num/k*den only grow both pair arguments, so
  // the k = 1 forms (plus the u = 0 forms for numerator magnitude 1) are
  // the only candidates for the least preimage.
  int s = q.sign() > 0 ? 0 : 1;
  Natural best = index(s, abs_num + 1, den - 1);
  if (abs_num == 1) best = std::min(best, index(1 - s, 0, den - 1));
  return best;
}

bool circle_decide(const Rational& x, const Rational& y) { return x * x + y * y == Rational(1); }

int even_denominator(const Rational& q) { return mpz_even_p(q.den().get_mpz_t()) != 0 ? 1 : 0; }

namespace {

// sum_{k=0}^{m} t^k / k!  and  3 t^{m+1} / (m+1)!
std::pair<Rational, Rational> taylor_with_tail(const Rational& t, unsigned m) {
  Rational term(1);
  Rational sum(1);
  for (unsigned k = 1; k <= m; ++k) {
    term = term * t / Rational(static_cast<long>(k));
    sum += term;
  }
  Rational tail = Rational(3) * term * t / Rational(static_cast<long>(m) + 1);
  return {sum, tail};
}

Rational square_times(Rational r, unsigned j) {
  for (unsigned i = 0; i < j; ++i) r = r * r;
  return r;
}

ExpBound exp_bounds_positive(const Rational& q, unsigned m) {
  unsigned j = 0;
  Rational t = q;
  while (t > Rational(1)) {
    t = t / Rational(2);
    ++j;
  }
  auto [sum, tail] = taylor_with_tail(t, m);
  return {square_times(sum, j), square_times(sum + tail, j), m};
}

}  // namespace

ExpBound exp_bounds(const Rational& q, unsigned m) {
  if (m == 0) throw std::invalid_argument("exp_bounds order must be >= 1");
  if (q.is_zero()) return {Rational(1), Rational(1), m};
  if (q.sign() > 0) return exp_bounds_positive(q, m);
  ExpBound pos = exp_bounds_positive(-q, m);
  return {Rational(1) / pos.upper, Rational(1) / pos.lower, m};
}

EpigraphDecision exp_epigraph_decide_with_order(const Rational& x, const Rational& y) {
  if (x.is_zero()) return {y >= Rational(1), 0};
  // e^x is irrational here, so one of the two strict tests eventually fires.
  for (unsigned m = 1;; ++m) {
    ExpBound b = exp_bounds(x, m);
    if (y < b.lower) return {false, m};
    if (y > b.upper) return {true, m};
  }
}

Verdict mandelbrot_rational_semi(const ComplexRational& c, const DecideParams& params) { return decide(c, params); }

}  // namespace mandel::rational
