// SPDX-License-Identifier: Apache-2.0
//
// Certified three-valued membership for the Mandelbrot set
//   M = { c : |f_c^n(0)| <= 2 for all n >= 1 },  f_c(z) = z^2 + c.
//
// Out verdicts carry an escape step n with a proven lower bound on |z_n|^2
// exceeding 4. In verdicts carry either an exact eventually-periodic orbit
// or a closed-form region proof (main cardioid, period-2 disk). Everything
// else is Unknown; no verdict is ever produced from floating point.

#pragma once

#include "mandel/exact_arith.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>

namespace mandel {

struct DecideParams {
  std::uint64_t budget = 50;   // iterations
  long precision = 64;         // initial interval precision, bits after the binary point
  long precision_max = 512;    // cap for precision doubling
  std::size_t bit_cap = 4096;  // exact iteration: max bits per numerator/denominator
  bool use_regions = true;     // cardioid/bulb certificates
};

inline constexpr std::uint64_t kPointBudget = 50;
inline constexpr std::uint64_t kBandBudget = 60;

// Exact orbit outcomes.
struct Escaped {
  std::uint64_t n;
  ComplexRational z_n;
};
struct Cycle {
  std::uint64_t preperiod;
  std::uint64_t period;
  ComplexRational witness;  // z_preperiod == z_{preperiod + period}
};
struct Exhausted {
  std::uint64_t n;
  ComplexRational z_n;
};
struct BitCapHit {
  std::uint64_t n;
};
using OrbitOutcome = std::variant<Escaped, Cycle, Exhausted, BitCapHit>;

// Certificates.
struct EscapeCert {
  std::uint64_t n;
  Dyadic abs_sq_lower;  // proven lower bound of |z_n|^2, strictly above 4
};
struct CycleCert {
  std::uint64_t preperiod;
  std::uint64_t period;
  ComplexRational witness;
};
struct CardioidCert {};
struct BulbCert {};
using InCertificate = std::variant<CycleCert, CardioidCert, BulbCert>;

struct OutVerdict {
  EscapeCert cert;
};
struct InVerdict {
  InCertificate cert;
};
struct UnknownVerdict {};

/// Three-valued result plus the budgets that produced it. `precision` is the
/// interval precision in effect when the verdict was reached; 0 means the
/// verdict came from exact rational arithmetic alone.
struct Verdict {
  std::variant<OutVerdict, InVerdict, UnknownVerdict> result;
  std::uint64_t budget = 0;
  long precision = 0;

  [[nodiscard]] bool is_out() const { return std::holds_alternative<OutVerdict>(result); }
  [[nodiscard]] bool is_in() const { return std::holds_alternative<InVerdict>(result); }
  [[nodiscard]] bool is_unknown() const { return std::holds_alternative<UnknownVerdict>(result); }
  [[nodiscard]] const EscapeCert& escape() const { return std::get<OutVerdict>(result).cert; }
  [[nodiscard]] const InCertificate& membership() const { return std::get<InVerdict>(result).cert; }
};

const char* verdict_name(const Verdict& v);
const char* certificate_kind(const InCertificate& cert);

/// Exact iteration of z <- z^2 + c from z_0 = 0 for up to `budget` steps.
OrbitOutcome iterate_exact(const ComplexRational& c, std::uint64_t budget, std::size_t bit_cap);

/// Interval escape search over every c' in `c`. Sound for the whole box.
Verdict certify_out_interval(const ComplexBox& c, std::uint64_t budget, long p0, long p_max);
/// Same, with c re-enclosed at each precision so doubling tightens the input as well.
Verdict certify_out_interval(const ComplexRational& c, std::uint64_t budget, long p0, long p_max);

Verdict certify_in_cycle(const ComplexRational& c, std::uint64_t budget, std::size_t bit_cap);

/// Cardioid / period-2 disk test, evaluated exactly on the box endpoints.
Verdict certify_in_region(const ComplexBox& c);
Verdict certify_in_region(const ComplexRational& c);

Verdict decide(const ComplexRational& c, const DecideParams& params = {});
Verdict decide(const ComplexBox& c, const DecideParams& params = {});

struct OracleDecision {
  Verdict verdict;
  unsigned stage = 0;  // certifying stage, or the last stage tried
};

/// Stage i queries both oracles at index i, forms the box of radius 2^-i and
/// runs region and escape certification with i iterations, from scratch.
OracleDecision decide_oracle(const RealOracle& ox, const RealOracle& oy, unsigned stages,
                             const DecideParams& params = {});

/// Box of radius 2^-m around the oracles' m-th approximants, rounded outward.
ComplexBox oracle_box(const RealOracle& ox, const RealOracle& oy, unsigned m, long precision);

enum class CertCheck { confirmed, refuted, too_large, not_applicable };

/// Re-validates a certificate for the point c by exact arithmetic that does
/// not share code with the producing path. Out certificates are recomputed
/// only while the exact orbit stays within `bit_limit` bits.
CertCheck recheck(const Verdict& v, const ComplexRational& c, std::size_t bit_limit = 1 << 16);

}  // namespace mandel
