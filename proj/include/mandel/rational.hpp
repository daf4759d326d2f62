// SPDX-License-Identifier: Apache-2.0
//
// Decision procedures over the rationals: the numbering of Q by natural
// numbers, the unit circle, the even-denominator indicator, the epigraph
// of exp, and the (semi-)decision of Mandelbrot membership for rational c.

#pragma once

#include "mandel/certifier.hpp"
#include "mandel/exact_arith.hpp"

#include <cstdint>
#include <utility>

namespace mandel::rational {

using Natural = Integer;  // always >= 0

/// Cantor pairing  (u, v) -> (u + v)(u + v + 1)/2 + u.
Natural cantor_pair(const Natural& u, const Natural& v);
std::pair<Natural, Natural> cantor_unpair(const Natural& m);

struct RationalCode {
  int sign_bit = 0;  // s
  Natural shifted_num;  // a, value numerator is a - 1
  Natural den_minus_one;  // b, value denominator is b + 1
};

/// n -> (n mod 2, unpair(n div 2)).
RationalCode phi_components(const Natural& n);
/// (-1)^s (a - 1) / (b + 1).
Rational phi_decode(const Natural& n);
/// Smallest n with phi_decode(n) == q.
Natural phi_encode(const Rational& q);

bool circle_decide(const Rational& x, const Rational& y);

/// 1 when the lowest-terms denominator of q is even.
int even_denominator(const Rational& q);

struct ExpBound {
  Rational lower;
  Rational upper;
  unsigned order = 0;
};

/// Two-sided rational bounds lower < e^q < upper (equal to 1 at q = 0)
/// from the order-m Taylor polynomial with a 3 t^(m+1)/(m+1)! tail bound,
/// after halving q into (0, 1] and squaring back.
ExpBound exp_bounds(const Rational& q, unsigned m);

struct EpigraphDecision {
  bool above = false;  // y >= e^x
  unsigned order = 0;  // bound order that settled it; 0 for x = 0
};

EpigraphDecision exp_epigraph_decide_with_order(const Rational& x, const Rational& y);
inline bool exp_epigraph_decide(const Rational& x, const Rational& y) {
  return exp_epigraph_decide_with_order(x, y).above;
}

/// Best available semi-decision of c in M for rational c; three-valued.
Verdict mandelbrot_rational_semi(const ComplexRational& c, const DecideParams& params = {});

}  // namespace mandel::rational
