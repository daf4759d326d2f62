// SPDX-License-Identifier: Apache-2.0

#include "mandel/certifier.hpp"

#include "doctest.h"

#include <random>
#include <set>

using namespace mandel;

namespace {

Rational q(const char* s) { return Rational::parse(s); }
ComplexRational cr(const char* re, const char* im = "0") { return {q(re), q(im)}; }

// Reference orbit with plain canonical rationals: first n with |z_n|^2 > 4.
std::optional<std::uint64_t> brute_escape(const ComplexRational& c, std::uint64_t budget) {
  ComplexRational z{0, 0};
  for (std::uint64_t n = 1; n <= budget; ++n) {
    z = z * z + c;
    if (abs_sq(z) > Rational(4)) return n;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("iterate_exact hand-computed orbits") {
  auto cyc = [](const char* re, const char* im = "0") {
    OrbitOutcome o = iterate_exact(cr(re, im), 50, 4096);
    REQUIRE(std::holds_alternative<Cycle>(o));
    return std::get<Cycle>(o);
  };
  Cycle c0 = cyc("0");
  CHECK(c0.preperiod == 0);
  CHECK(c0.period == 1);
  Cycle cm1 = cyc("-1");
  CHECK(cm1.preperiod == 0);
  CHECK(cm1.period == 2);
  Cycle cm2 = cyc("-2");
  CHECK(cm2.preperiod == 2);
  CHECK(cm2.period == 1);
  CHECK(cm2.witness == cr("2"));
  Cycle ci = cyc("0", "1");
  CHECK(ci.preperiod == 2);
  CHECK(ci.period == 2);

  OrbitOutcome one = iterate_exact(cr("1"), 50, 4096);
  REQUIRE(std::holds_alternative<Escaped>(one));
  CHECK(std::get<Escaped>(one).n == 3);
  CHECK(std::get<Escaped>(one).z_n == cr("5"));
}

TEST_CASE("iterate_exact respects budget and bit cap") {
  OrbitOutcome ex = iterate_exact(cr("1/8"), 5, 1 << 20);
  REQUIRE(std::holds_alternative<Exhausted>(ex));
  CHECK(std::get<Exhausted>(ex).n == 5);
  OrbitOutcome cap = iterate_exact(cr("1/8"), 1000, 256);
  REQUIRE(std::holds_alternative<BitCapHit>(cap));
  CHECK(std::get<BitCapHit>(cap).n < 1000);
}

TEST_CASE("iterate_exact agrees with brute-force escape") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> num(-40, 40);
  std::uniform_int_distribution<long> den(1, 12);
  for (int i = 0; i < 300; ++i) {
    ComplexRational c{rat_normalize(num(rng), den(rng)), rat_normalize(num(rng), den(rng))};
    OrbitOutcome o = iterate_exact(c, 12, 1 << 20);
    auto ref = brute_escape(c, 12);
    if (ref) {
      REQUIRE(std::holds_alternative<Escaped>(o));
      CHECK(std::get<Escaped>(o).n == *ref);
    } else {
      CHECK_FALSE(std::holds_alternative<Escaped>(o));
    }
  }
}

TEST_CASE("certify_out_interval examples") {
  Verdict one = certify_out_interval(ComplexBox::point(1, 0), 50, 64, 512);
  REQUIRE(one.is_out());
  CHECK(one.escape().n == 3);
  CHECK(one.escape().abs_sq_lower > Dyadic(4));
  CHECK(certify_out_interval(ComplexBox::point(0, 0), 200, 64, 512).is_unknown());
  CHECK(certify_out_interval(ComplexBox::enclose(cr("1/4"), 64), 10000, 64, 512).is_unknown());
  Verdict three = certify_out_interval(cr("3"), 50, 64, 512);
  REQUIRE(three.is_out());
  CHECK(three.escape().n == 1);
}

TEST_CASE("certify_in_cycle examples") {
  Verdict i = certify_in_cycle(cr("0", "1"), 50, 4096);
  REQUIRE(i.is_in());
  const auto& cert = std::get<CycleCert>(i.membership());
  CHECK(cert.preperiod == 2);
  CHECK(cert.period == 2);
  CHECK(certify_in_cycle(cr("-2"), 50, 4096).is_in());
  CHECK(certify_in_cycle(cr("1/8"), kPointBudget, 4096).is_unknown());
  CHECK(certify_in_cycle(cr("1"), 50, 4096).is_unknown());
}

TEST_CASE("orbit of 1/8 is strictly increasing, so never repeats") {
  // Exact sizes double each step; a short prefix is enough to see the trend.
  ComplexRational z{0, 0};
  Rational prev(-1);
  for (int k = 0; k < 14; ++k) {
    z = z * z + cr("1/8");
    CHECK(z.re > prev);
    prev = z.re;
  }
}

TEST_CASE("certify_in_region examples") {
  Verdict zero = certify_in_region(cr("0"));
  REQUIRE(zero.is_in());
  CHECK(std::holds_alternative<CardioidCert>(zero.membership()));
  Verdict m1 = certify_in_region(cr("-1"));
  REQUIRE(m1.is_in());
  CHECK(std::holds_alternative<BulbCert>(m1.membership()));
  CHECK(certify_in_region(cr("1")).is_unknown());
  // Boundary points fail the strict tests.
  CHECK(certify_in_region(cr("1/4")).is_unknown());
  CHECK(certify_in_region(cr("-3/4")).is_unknown());
  CHECK(certify_in_region(cr("-5/4")).is_unknown());
  // Box version.
  DyadicInterval small{Dyadic(Integer(-1), -4), Dyadic(Integer(1), -4)};
  CHECK(certify_in_region(ComplexBox{small, small}).is_in());
  CHECK(certify_in_region(ComplexBox{{Dyadic(-1), Dyadic(1)}, small}).is_unknown());
}

TEST_CASE("region tests agree with exact inequalities") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> d(-64, 64);
  for (int i = 0; i < 2000; ++i) {
    ComplexRational c{rat_normalize(d(rng), 32), rat_normalize(d(rng), 32)};
    const Rational& x = c.re;
    const Rational& y = c.im;
    Rational qq = (x - q("1/4")) * (x - q("1/4")) + y * y;
    bool cardioid = qq * (qq + x - q("1/4")) < y * y / Rational(4);
    bool bulb = (x + Rational(1)) * (x + Rational(1)) + y * y < q("1/16");
    CHECK(certify_in_region(c).is_in() == (cardioid || bulb));
  }
}

TEST_CASE("decide examples") {
  CHECK(decide(cr("0")).is_in());
  CHECK(decide(cr("-1")).is_in());
  CHECK(decide(cr("-2")).is_in());
  CHECK(decide(cr("0", "1")).is_in());
  for (auto [c, n] : {std::pair{"1", 3}, {"2", 2}, {"3", 1}}) {
    Verdict v = decide(cr(c));
    REQUIRE(v.is_out());
    CHECK(v.escape().n == std::uint64_t(n));
  }
  DecideParams p;
  p.budget = 10000;
  CHECK(decide(cr("1/4"), p).is_unknown());
  CHECK(decide(cr("-3/4")).is_unknown());
  // c = 1/4 + 1/100 escapes at a frozen step. Exact rationals are far too
  // large at that depth, so a long double orbit is the cross-check.
  Verdict v = decide(cr("13/50"));
  REQUIRE(v.is_out());
  CHECK(v.escape().n == 30);
  long double z = 0;
  unsigned n = 0;
  while (z * z <= 4 && n < 100) {
    z = z * z + 0.26L;
    ++n;
  }
  CHECK(n == 30);
}

TEST_CASE("decide on boxes") {
  ComplexBox far = ComplexBox{{Dyadic(5), Dyadic(6)}, {Dyadic(5), Dyadic(6)}};
  Verdict v = decide(far, DecideParams{1, 64, 512, 4096, true});
  REQUIRE(v.is_out());
  CHECK(v.escape().n == 1);
  CHECK(decide(ComplexBox::point(0, 0)).is_in());
  CHECK(decide(ComplexBox{{Dyadic(-1), Dyadic(1)}, {Dyadic(-1), Dyadic(1)}}).is_unknown());
}

TEST_CASE("every verdict re-checks with independent arithmetic") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> d(-90, 90);
  std::set<std::string> seen;
  for (int i = 0; i < 400; ++i) {
    ComplexRational c{rat_normalize(d(rng), 40), rat_normalize(d(rng), 40)};
    Verdict v = decide(c);
    CertCheck chk = recheck(v, c);
    seen.insert(verdict_name(v));
    if (v.is_unknown()) {
      CHECK(chk == CertCheck::not_applicable);
    } else {
      CHECK(chk != CertCheck::refuted);
    }
  }
  CHECK(seen.count("in") == 1);
  CHECK(seen.count("out") == 1);
}

TEST_CASE("recheck refutes forged certificates") {
  Verdict forged;
  forged.result = OutVerdict{EscapeCert{2, Dyadic(5)}};
  CHECK(recheck(forged, cr("1")) == CertCheck::refuted);
  Verdict fake_cycle;
  fake_cycle.result = InVerdict{CycleCert{0, 1, cr("0")}};
  CHECK(recheck(fake_cycle, cr("1")) == CertCheck::refuted);
  Verdict fake_bulb;
  fake_bulb.result = InVerdict{BulbCert{}};
  CHECK(recheck(fake_bulb, cr("0")) == CertCheck::refuted);
}

TEST_CASE("decide_oracle stages") {
  DecideParams p;
  OracleDecision zero = decide_oracle(RealOracle::constant(0), RealOracle::constant(0), 12, p);
  REQUIRE(zero.verdict.is_in());
  CHECK(std::holds_alternative<CardioidCert>(zero.verdict.membership()));
  CHECK(zero.stage == 4);  // frozen: first box that clears the interval cardioid test
  DecideParams bare = p;
  bare.use_regions = false;
  OracleDecision plain = decide_oracle(RealOracle::constant(0), RealOracle::constant(0), 24, bare);
  CHECK(plain.verdict.is_unknown());
  CHECK(plain.stage == 24);
  OracleDecision three = decide_oracle(RealOracle::constant(3), RealOracle::constant(0), 12, p);
  REQUIRE(three.verdict.is_out());
  CHECK(three.stage == 1);
  OracleDecision one = decide_oracle(RealOracle::constant(1), RealOracle::constant(0), 12, p);
  REQUIRE(one.verdict.is_out());
  CHECK(one.stage == 3);  // frozen
  OracleDecision root = decide_oracle(RealOracle::sqrt_of(2), RealOracle::constant(0), 12, p);
  CHECK(root.verdict.is_out());
}

TEST_CASE("oracle boxes contain the point and shrink") {
  RealOracle r2 = RealOracle::sqrt_of(2);
  for (unsigned m = 1; m < 30; ++m) {
    ComplexBox b = oracle_box(r2, RealOracle::constant(0), m, 64);
    Rational lo = b.re.lo.to_rational(), hi = b.re.hi.to_rational();
    CHECK(lo * lo < Rational(2));
    CHECK(hi * hi > Rational(2));
    CHECK(b.re.width().to_rational() <= pow2(2 - long(m)));
  }
}
