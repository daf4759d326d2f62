// SPDX-License-Identifier: Apache-2.0

#include "mandel/certifier.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <vector>

namespace mandel {

namespace {

// Large enough that Dyadic::rounded never drops bits: exact interval evaluation.
constexpr long kExact = std::numeric_limits<long>::max() / 4;

std::size_t bits(const mpz_class& z) { return mpz_sizeinbase(z.get_mpz_t(), 2); }

std::size_t hash_limbs(const mpz_class& z) {
  std::size_t h = static_cast<std::size_t>(mpz_size(z.get_mpz_t())) * 0x9e3779b97f4a7c15ULL;
  if (mpz_size(z.get_mpz_t()) > 0) h ^= static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), 0));
  return h ^ static_cast<std::size_t>(sgn(z) + 1);
}

Verdict out_verdict(std::uint64_t n, Dyadic lower, std::uint64_t budget, long precision) {
  return Verdict{OutVerdict{EscapeCert{n, std::move(lower)}}, budget, precision};
}

Verdict unknown_verdict(std::uint64_t budget, long precision) { return Verdict{UnknownVerdict{}, budget, precision}; }

// One interval run at a fixed precision.
enum class RunResult { escaped, no_escape, blown };

struct Run {
  RunResult result;
  std::uint64_t n = 0;
  Dyadic lower;
};

Run run_box_orbit(const ComplexBox& c, std::uint64_t budget, long precision) {
  const Dyadic four(4);
  const Dyadic eight(8);
  ComplexBox z = ComplexBox::point(Dyadic(0), Dyadic(0));
  for (std::uint64_t n = 1; n <= budget; ++n) {
    z = box_step(z, c, precision);
    DyadicInterval m = box_abs_sq_bounds(z, precision);
    if (m.lo > four) return {RunResult::escaped, n, m.lo};
    if (m.hi >= four && m.width() > eight) return {RunResult::blown, n, {}};
  }
  return {RunResult::no_escape, budget, {}};
}

template <class Enclose>
Verdict certify_out_with(Enclose&& enclose, std::uint64_t budget, long p0, long p_max) {
  long p = std::max(1L, p0);
  p_max = std::max(p, p_max);
  for (;;) {
    Run run = run_box_orbit(enclose(p), budget, p);
    if (run.result == RunResult::escaped) return out_verdict(run.n, std::move(run.lower), budget, p);
    if (run.result == RunResult::no_escape || p >= p_max) return unknown_verdict(budget, p);
    p = std::min(2 * p, p_max);
  }
}

// Cardioid: q (q + (x - 1/4)) < y^2 / 4 with q = (x - 1/4)^2 + y^2.
// Bulb: (x + 1)^2 + y^2 < 1/16.
bool cardioid_holds(const Rational& x, const Rational& y) {
  Rational xs = x - Rational::normalize(1, 4);
  Rational y2 = y * y;
  Rational q = xs * xs + y2;
  return q * (q + xs) < y2 * Rational::normalize(1, 4);
}

bool bulb_holds(const Rational& x, const Rational& y) {
  Rational xs = x + Rational(1);
  return xs * xs + y * y < Rational::normalize(1, 16);
}

}  // namespace

const char* verdict_name(const Verdict& v) {
  if (v.is_out()) return "out";
  if (v.is_in()) return "in";
  return "unknown";
}

const char* certificate_kind(const InCertificate& cert) {
  struct {
    const char* operator()(const CycleCert&) const { return "cycle"; }
    const char* operator()(const CardioidCert&) const { return "cardioid"; }
    const char* operator()(const BulbCert&) const { return "bulb"; }
  } kind;
  return std::visit(kind, cert);
}

OrbitOutcome iterate_exact(const ComplexRational& c, std::uint64_t budget, std::size_t bit_cap) {
  // z = (a + b i) / d with one shared, unreduced denominator; c = (p + q i) / e.
  const mpz_class e = lcm(c.re.den(), c.im.den());
  const mpz_class p = c.re.num() * (e / c.re.den());
  const mpz_class q = c.im.num() * (e / c.im.den());
  // If c is not a Gaussian integer, some Gaussian prime pi has v_pi(c) < 0 and
  // v_pi(z_k) = 2^(k-1) v_pi(c) strictly decreases, so no value can repeat.
  // Repeats are only searched for when e == 1, where every z_k is integral.
  const bool may_cycle = e == 1;

  auto point = [](const mpz_class& a, const mpz_class& b, const mpz_class& d) {
    return ComplexRational{Rational::normalize(a, d), Rational::normalize(b, d)};
  };

  std::vector<std::pair<mpz_class, mpz_class>> orbit;
  std::unordered_multimap<std::size_t, std::size_t> seen;
  auto hash_ints = [](const mpz_class& a, const mpz_class& b) { return hash_limbs(a) * 31 + hash_limbs(b); };
  if (may_cycle) {
    orbit.emplace_back(0, 0);
    seen.emplace(hash_ints(orbit[0].first, orbit[0].second), 0);
  }

  mpz_class a(0), b(0), d(1), a2, b2, ab, d2, lhs, rhs;
  for (std::uint64_t n = 1; n <= budget; ++n) {
    a2 = a * a;
    b2 = b * b;
    ab = a * b;
    d2 = d * d;
    mpz_class scale(1);  // d' / d^2
    if (!mpz_divisible_p(d2.get_mpz_t(), e.get_mpz_t())) scale = e;
    mpz_class d_next = d2 * scale;
    mpz_class c_scale = d_next / e;
    a = (a2 - b2) * scale + p * c_scale;
    b = 2 * ab * scale + q * c_scale;
    d = std::move(d_next);

    // |z|^2 > 4  <=>  a^2 + b^2 > 4 d^2
    lhs = a * a + b * b;
    rhs = d * d;
    rhs *= 4;
    if (cmp(lhs, rhs) > 0) return Escaped{n, point(a, b, d)};
    if (std::max({bits(a), bits(b), bits(d)}) > bit_cap) return BitCapHit{n};

    if (may_cycle) {
      std::size_t h = hash_ints(a, b);
      auto [first, last] = seen.equal_range(h);
      for (auto it = first; it != last; ++it) {
        const auto& [pa, pb] = orbit[it->second];
        if (pa == a && pb == b) {
          auto j = static_cast<std::uint64_t>(it->second);
          return Cycle{j, n - j, point(a, b, d)};
        }
      }
      seen.emplace(h, orbit.size());
      orbit.emplace_back(a, b);
    }
  }
  return Exhausted{budget, point(a, b, d)};
}

Verdict certify_out_interval(const ComplexBox& c, std::uint64_t budget, long p0, long p_max) {
  return certify_out_with([&c](long) -> const ComplexBox& { return c; }, budget, p0, p_max);
}

Verdict certify_out_interval(const ComplexRational& c, std::uint64_t budget, long p0, long p_max) {
  return certify_out_with([&c](long p) { return ComplexBox::enclose(c, p); }, budget, p0, p_max);
}

Verdict certify_in_cycle(const ComplexRational& c, std::uint64_t budget, std::size_t bit_cap) {
  OrbitOutcome outcome = iterate_exact(c, budget, bit_cap);
  if (const auto* cyc = std::get_if<Cycle>(&outcome)) {
    return Verdict{InVerdict{CycleCert{cyc->preperiod, cyc->period, cyc->witness}}, budget, 0};
  }
  return unknown_verdict(budget, 0);
}

Verdict certify_in_region(const ComplexRational& c) {
  if (cardioid_holds(c.re, c.im)) return Verdict{InVerdict{CardioidCert{}}, 0, 0};
  if (bulb_holds(c.re, c.im)) return Verdict{InVerdict{BulbCert{}}, 0, 0};
  return unknown_verdict(0, 0);
}

Verdict certify_in_region(const ComplexBox& c) {
  if (c.is_point()) return certify_in_region(ComplexRational{c.re.lo.to_rational(), c.im.lo.to_rational()});
  const long p = kExact;
  {
    DyadicInterval xs = iv_sub(c.re, DyadicInterval::point(Dyadic(1, -2)), p);
    DyadicInterval y2 = iv_sqr(c.im, p);
    DyadicInterval q = iv_add(iv_sqr(xs, p), y2, p);
    DyadicInterval lhs = iv_mul(q, iv_add(q, xs, p), p);
    DyadicInterval rhs{y2.lo.scaled(-2), y2.hi.scaled(-2)};
    if (lhs.hi < rhs.lo) return Verdict{InVerdict{CardioidCert{}}, 0, 0};
  }
  {
    DyadicInterval xs = iv_add(c.re, DyadicInterval::point(Dyadic(1)), p);
    DyadicInterval d = iv_add(iv_sqr(xs, p), iv_sqr(c.im, p), p);
    if (d.hi < Dyadic(1, -4)) return Verdict{InVerdict{BulbCert{}}, 0, 0};
  }
  return unknown_verdict(0, 0);
}

Verdict decide(const ComplexRational& c, const DecideParams& params) {
  if (params.use_regions) {
    Verdict region = certify_in_region(c);
    if (region.is_in()) {
      region.budget = params.budget;
      return region;
    }
  }
  OrbitOutcome outcome = iterate_exact(c, params.budget, params.bit_cap);
  if (const auto* cyc = std::get_if<Cycle>(&outcome)) {
    return Verdict{InVerdict{CycleCert{cyc->preperiod, cyc->period, cyc->witness}}, params.budget, 0};
  }
  if (const auto* esc = std::get_if<Escaped>(&outcome)) {
    // |z_n|^2 > 4 exactly; find a dyadic lower bound that still exceeds 4.
    Rational m = abs_sq(esc->z_n);
    long p = std::max(1L, params.precision);
    Dyadic lower = dyadic_round(m, p, Round::down);
    while (!(lower > Dyadic(4))) {
      p *= 2;
      lower = dyadic_round(m, p, Round::down);
    }
    return out_verdict(esc->n, std::move(lower), params.budget, 0);
  }
  if (std::holds_alternative<Exhausted>(outcome)) {
    // The exact orbit stayed in the disk for the whole budget, so no
    // enclosure can escape either.
    return unknown_verdict(params.budget, 0);
  }
  return certify_out_interval(c, params.budget, params.precision, params.precision_max);
}

Verdict decide(const ComplexBox& c, const DecideParams& params) {
  if (c.is_point()) return decide(ComplexRational{c.re.lo.to_rational(), c.im.lo.to_rational()}, params);
  if (params.use_regions) {
    Verdict region = certify_in_region(c);
    if (region.is_in()) {
      region.budget = params.budget;
      return region;
    }
  }
  return certify_out_interval(c, params.budget, params.precision, params.precision_max);
}

ComplexBox oracle_box(const RealOracle& ox, const RealOracle& oy, unsigned m, long precision) {
  Rational r = pow2(-static_cast<long>(m));
  Rational qx = ox.query(m);
  Rational qy = oy.query(m);
  return {DyadicInterval::enclose(qx - r, qx + r, precision), DyadicInterval::enclose(qy - r, qy + r, precision)};
}

OracleDecision decide_oracle(const RealOracle& ox, const RealOracle& oy, unsigned stages, const DecideParams& params) {
  Verdict last = unknown_verdict(0, params.precision);
  for (unsigned i = 1; i <= stages; ++i) {
    // Enclosure precision must resolve the 2^-i radius.
    long p = std::max(params.precision, static_cast<long>(i) + 2);
    ComplexBox box = oracle_box(ox, oy, i, p);
    if (params.use_regions) {
      Verdict region = certify_in_region(box);
      if (region.is_in()) {
        region.budget = i;
        return {region, i};
      }
    }
    Verdict out = certify_out_interval(box, i, p, std::max(p, params.precision_max));
    if (out.is_out()) return {out, i};
    last = out;
  }
  return {last, stages};
}

CertCheck recheck(const Verdict& v, const ComplexRational& c, std::size_t bit_limit) {
  if (v.is_unknown()) return CertCheck::not_applicable;
  if (v.is_out()) {
    const EscapeCert& cert = v.escape();
    if (!(cert.abs_sq_lower > Dyadic(4))) return CertCheck::refuted;
    // Plain recomputation with the generic Rational operators.
    ComplexRational z{Rational(0), Rational(0)};
    for (std::uint64_t k = 1; k <= cert.n; ++k) {
      z = z * z + c;
      if (z.re.bit_size() > bit_limit || z.im.bit_size() > bit_limit) return CertCheck::too_large;
      if (k < cert.n && abs_sq(z) > Rational(4)) return CertCheck::refuted;  // escaped earlier than claimed
    }
    Rational m = abs_sq(z);
    return (m > Rational(4) && cert.abs_sq_lower.to_rational() <= m) ? CertCheck::confirmed : CertCheck::refuted;
  }
  const InCertificate& cert = v.membership();
  if (std::holds_alternative<CardioidCert>(cert)) {
    return cardioid_holds(c.re, c.im) ? CertCheck::confirmed : CertCheck::refuted;
  }
  if (std::holds_alternative<BulbCert>(cert)) {
    return bulb_holds(c.re, c.im) ? CertCheck::confirmed : CertCheck::refuted;
  }
  const auto& cyc = std::get<CycleCert>(cert);
  if (cyc.period == 0) return CertCheck::refuted;
  ComplexRational z{Rational(0), Rational(0)};
  ComplexRational at_pre;
  const std::uint64_t end = cyc.preperiod + cyc.period;
  for (std::uint64_t k = 0; k <= end; ++k) {
    if (abs_sq(z) > Rational(4)) return CertCheck::refuted;
    if (z.re.bit_size() > bit_limit || z.im.bit_size() > bit_limit) return CertCheck::too_large;
    if (k == cyc.preperiod) {
      if (!(z == cyc.witness)) return CertCheck::refuted;
      at_pre = z;
    }
    if (k == end) return z == at_pre ? CertCheck::confirmed : CertCheck::refuted;
    z = z * z + c;
  }
  return CertCheck::refuted;
}

}  // namespace mandel
