// SPDX-License-Identifier: Apache-2.0
//
// Turing machines run on an accelerated ("Zeno") clock: step k takes
// 2^-k hours, so any finite prefix of k steps has finished after
// 1 - 2^-k hours. Only finite prefixes are ever simulated; what happens
// at the one-hour mark is approximated by the limit classifiers below.

#pragma once

#include "mandel/certifier.hpp"
#include "mandel/exact_arith.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mandel::zeno {

inline constexpr char kBlank = '_';

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class Move { left, right, stay };

struct Transition {
  std::string next;
  char write = kBlank;
  Move move = Move::stay;
};

struct TMDescription {
  std::set<std::string> states;
  std::set<char> alphabet;
  std::map<std::pair<std::string, char>, Transition> rules;
  std::string initial;
  std::set<std::string> halt_states;

  [[nodiscard]] const Transition* find(const std::string& state, char symbol) const;
  [[nodiscard]] bool is_halt(const std::string& state) const { return halt_states.count(state) != 0; }
};

struct ParseOptions {
  /// Every state must be declared with a `states:` line.
  bool strict = false;
};

/// Line format, one rule per line:
///   state,symbol -> next,write,move      move is L, R or S
/// plus optional directives `states: a b c`, `start: a`, `halt: h1 h2`.
/// `#` starts a comment. Symbols are single characters, `_` is blank.
TMDescription parse_tm(std::string_view text, const ParseOptions& options = {});
TMDescription load_tm(const std::string& path, const ParseOptions& options = {});

enum class Status { running, halted, stalled };

struct Configuration {
  std::map<long, char> tape;  // blank cells are not stored
  long head = 0;
  std::string state;
  std::uint64_t step_count = 0;
  Status status = Status::running;

  [[nodiscard]] char read(long pos) const;
  /// FNV-1a over a canonical rendering of state, head and tape.
  [[nodiscard]] std::uint64_t digest() const;
};

Configuration initial_configuration(const TMDescription& m, std::string_view input);

/// Applies the unique transition. With no applicable rule the machine
/// stalls; stepping a halted or stalled configuration returns it unchanged.
Configuration step(const TMDescription& m, const Configuration& c);

/// 1 - 2^-k hours: time consumed by the first k accelerated steps.
Rational zeno_elapsed(std::uint64_t k);

struct Snapshot {
  std::uint64_t step = 0;
  std::string state;
  long head = 0;
  std::map<long, char> tape;
  std::uint64_t digest = 0;
};

struct ZenoTrace {
  std::vector<Snapshot> snapshots;
  std::optional<std::uint64_t> halted_at;
  std::optional<std::uint64_t> stalled_at;
  std::uint64_t steps = 0;
  Rational elapsed;

  [[nodiscard]] bool terminated() const { return halted_at.has_value() || stalled_at.has_value(); }
};

ZenoTrace run_stages(const TMDescription& m, std::string_view input, std::uint64_t budget,
                     std::uint64_t snapshot_every = 1);

enum class LimitKind { stabilized, alternating, inconclusive };

struct CellLimit {
  LimitKind kind = LimitKind::inconclusive;
  char value = kBlank;      // stabilized only
  std::uint64_t since = 0;  // stabilized only: first snapshot step of the final constant run
};

const char* limit_name(LimitKind kind);

/// Looks at the cell over the last `window` snapshots. Stabilized when it
/// is constant there (or the run terminated), Alternating when it changes
/// at least ceil(window/2) times, Inconclusive otherwise. Throws
/// std::invalid_argument when the trace has fewer than `window` snapshots.
CellLimit classify_cell_limit(const ZenoTrace& trace, long cell, std::size_t window);

// --- accelerated Mandelbrot loop -------------------------------------------

struct StageRecord {
  unsigned stage = 0;
  ComplexBox x;
  bool escaped_flag = false;
};

enum class ZenoClass { escape_cofinal, bounded_so_far, mixed };

const char* zeno_class_name(ZenoClass cls);

struct ZenoMandelbrotRun {
  std::vector<StageRecord> stages;
  ZenoClass classification = ZenoClass::bounded_so_far;
  std::optional<unsigned> first_flagged;
};

/// Stage i re-runs i iterations from z = 0 with c taken from the oracles'
/// i-th approximants (radius 2^-i box), scaling points beyond modulus 3
/// back and flagging the stage once |z| >= 2.1 is proven.
ZenoMandelbrotRun zeno_mandelbrot_run(const RealOracle& ox, const RealOracle& oy, unsigned stages,
                                      long precision = 64);

/// Text of the bundled lamp machine (cell 0 flips on every step).
std::string_view lamp_machine_text();

}  // namespace mandel::zeno
