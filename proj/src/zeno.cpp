// SPDX-License-Identifier: Apache-2.0

#include "mandel/zeno.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mandel::zeno {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

const Transition* TMDescription::find(const std::string& state, char symbol) const {
  auto it = rules.find({state, symbol});
  return it == rules.end() ? nullptr : &it->second;
}

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char ch) {
    return ch == ',' || ch == ' ' || ch == '\t' || ch == '#' || ch == ':';
  });
}

char parse_symbol(const std::string& s, std::size_t line) {
  if (s.size() != 1 || s == "," || s == "#") throw ParseError(line, "symbol must be a single character, got '" + s + "'");
  return s[0];
}

Move parse_move(const std::string& s, std::size_t line) {
  if (s == "L") return Move::left;
  if (s == "R") return Move::right;
  if (s == "S") return Move::stay;
  throw ParseError(line, "move must be L, R or S, got '" + s + "'");
}

struct PendingRule {
  std::size_t line;
  std::string from;
  std::string to;
};

}  // namespace

TMDescription parse_tm(std::string_view text, const ParseOptions& options) {
  TMDescription m;
  std::optional<std::set<std::string>> declared;
  std::optional<std::string> start;
  std::optional<std::set<std::string>> halts;
  std::vector<PendingRule> pending;
  std::size_t directive_line = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    auto arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      auto colon = line.find(':');
      if (colon == std::string_view::npos) throw ParseError(line_no, "expected a rule 'state,symbol -> state,symbol,move' or a directive");
      std::string key(trim(line.substr(0, colon)));
      auto names = words(line.substr(colon + 1));
      for (const auto& n : names) {
        if (!valid_name(n)) throw ParseError(line_no, "invalid state name '" + n + "'");
      }
      if (key == "states") {
        declared.emplace(names.begin(), names.end());
        directive_line = line_no;
      } else if (key == "start") {
        if (names.size() != 1) throw ParseError(line_no, "start: takes exactly one state");
        start = names[0];
      } else if (key == "halt") {
        halts.emplace(names.begin(), names.end());
      } else {
        throw ParseError(line_no, "unknown directive '" + key + "'");
      }
      continue;
    }

    auto lhs = split(line.substr(0, arrow), ',');
    auto rhs = split(line.substr(arrow + 2), ',');
    if (lhs.size() != 2) throw ParseError(line_no, "left side must be 'state,symbol'");
    if (rhs.size() != 3) throw ParseError(line_no, "right side must be 'state,symbol,move'");
    if (!valid_name(lhs[0]) || !valid_name(rhs[0])) throw ParseError(line_no, "invalid state name");
    char read = parse_symbol(lhs[1], line_no);
    char write = parse_symbol(rhs[1], line_no);
    Move move = parse_move(rhs[2], line_no);

    auto [it, inserted] = m.rules.emplace(std::make_pair(lhs[0], read), Transition{rhs[0], write, move});
    if (!inserted) {
      throw ParseError(line_no, "duplicate rule for (" + lhs[0] + "," + std::string(1, read) + ")");
    }
    m.alphabet.insert(read);
    m.alphabet.insert(write);
    pending.push_back({line_no, lhs[0], rhs[0]});
  }

  if (options.strict && !declared) {
    std::size_t at = pending.empty() ? line_no : pending.front().line;
    throw ParseError(at, "strict mode requires a 'states:' declaration");
  }

  if (declared) {
    m.states = *declared;
    for (const auto& r : pending) {
      if (!m.states.count(r.from)) throw ParseError(r.line, "undeclared state '" + r.from + "'");
      if (!m.states.count(r.to)) throw ParseError(r.line, "undeclared target state '" + r.to + "'");
    }
  } else {
    for (const auto& r : pending) {
      m.states.insert(r.from);
      m.states.insert(r.to);
    }
  }

  if (start) {
    m.initial = *start;
  } else if (!pending.empty()) {
    m.initial = pending.front().from;
  } else {
    throw ParseError(line_no, "machine has no rules and no start state");
  }

  if (halts) {
    m.halt_states = *halts;
  } else if (m.states.count("halt")) {
    m.halt_states = {"halt"};
  }

  auto check_known = [&](const std::string& s, const char* what) {
    if (m.states.count(s)) return;
    if (declared) throw ParseError(directive_line, std::string(what) + " state '" + s + "' is not declared");
    m.states.insert(s);
  };
  check_known(m.initial, "start");
  for (const auto& h : m.halt_states) check_known(h, "halt");
  m.alphabet.insert(kBlank);
  return m;
}

TMDescription load_tm(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open machine file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tm(buf.str(), options);
}

char Configuration::read(long pos) const {
  auto it = tape.find(pos);
  return it == tape.end() ? kBlank : it->second;
}

std::uint64_t Configuration::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  mix(state);
  mix("|");
  mix(std::to_string(head));
  for (const auto& [p, sym] : tape) {
    mix("|");
    mix(std::to_string(p));
    mix(":");
    mix(std::string_view(&sym, 1));
  }
  return h;
}

Configuration initial_configuration(const TMDescription& m, std::string_view input) {
  Configuration c;
  c.state = m.initial;
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] != kBlank) c.tape[static_cast<long>(i)] = input[i];
  }
  if (m.is_halt(c.state)) c.status = Status::halted;
  return c;
}

Configuration step(const TMDescription& m, const Configuration& c) {
  if (c.status != Status::running) return c;
  Configuration next = c;
  const Transition* t = m.find(c.state, c.read(c.head));
  if (t == nullptr) {
    next.status = Status::stalled;
    return next;
  }
  if (t->write == kBlank) {
    next.tape.erase(c.head);
  } else {
    next.tape[c.head] = t->write;
  }
  if (t->move == Move::left) --next.head;
  if (t->move == Move::right) ++next.head;
  next.state = t->next;
  ++next.step_count;
  if (m.is_halt(next.state)) next.status = Status::halted;
  return next;
}

Rational zeno_elapsed(std::uint64_t k) { return Rational(1) - pow2(-static_cast<long>(k)); }

namespace {

Snapshot snapshot_of(const Configuration& c) { return {c.step_count, c.state, c.head, c.tape, c.digest()}; }

}  // namespace

ZenoTrace run_stages(const TMDescription& m, std::string_view input, std::uint64_t budget, std::uint64_t snapshot_every) {
  if (snapshot_every == 0) snapshot_every = 1;
  ZenoTrace trace;
  Configuration c = initial_configuration(m, input);
  trace.snapshots.push_back(snapshot_of(c));
  if (c.status == Status::halted) trace.halted_at = 0;
  while (c.status == Status::running && c.step_count < budget) {
    c = step(m, c);
    if (c.status == Status::stalled) {
      trace.stalled_at = c.step_count;
      break;
    }
    bool last = c.status == Status::halted || c.step_count == budget;
    if (c.step_count % snapshot_every == 0 || last) trace.snapshots.push_back(snapshot_of(c));
    if (c.status == Status::halted) trace.halted_at = c.step_count;
  }
  trace.steps = c.step_count;
  trace.elapsed = zeno_elapsed(trace.steps);
  return trace;
}

const char* limit_name(LimitKind kind) {
  switch (kind) {
    case LimitKind::stabilized: return "stabilized";
    case LimitKind::alternating: return "alternating";
    case LimitKind::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

CellLimit classify_cell_limit(const ZenoTrace& trace, long cell, std::size_t window) {
  const auto& snaps = trace.snapshots;
  if (window == 0 || window > snaps.size()) {
    throw std::invalid_argument("window of " + std::to_string(window) + " snapshots exceeds trace of " +
                                std::to_string(snaps.size()));
  }
  auto value_at = [cell](const Snapshot& s) {
    auto it = s.tape.find(cell);
    return it == s.tape.end() ? kBlank : it->second;
  };
  const char final_value = value_at(snaps.back());

  // Start of the final constant run, over the whole trace.
  std::size_t run_start = snaps.size() - 1;
  while (run_start > 0 && value_at(snaps[run_start - 1]) == final_value) --run_start;

  const std::size_t first = snaps.size() - window;
  std::size_t changes = 0;
  for (std::size_t i = first + 1; i < snaps.size(); ++i) {
    if (value_at(snaps[i]) != value_at(snaps[i - 1])) ++changes;
  }

  if (changes == 0 || trace.terminated()) return {LimitKind::stabilized, final_value, snaps[run_start].step};
  if (changes >= (window + 1) / 2) return {LimitKind::alternating, kBlank, 0};
  return {LimitKind::inconclusive, kBlank, 0};
}

// --- accelerated Mandelbrot loop -------------------------------------------

const char* zeno_class_name(ZenoClass cls) {
  switch (cls) {
    case ZenoClass::escape_cofinal: return "EscapeCofinal";
    case ZenoClass::bounded_so_far: return "BoundedSoFar";
    case ZenoClass::mixed: return "Mixed";
  }
  return "Mixed";
}

namespace {

// Encloses the image of `iv` under the radial scale-back: each coordinate
// of a rescaled point lies between 0 and its old value, and within [-3, 3].
DyadicInterval scale_back_component(const DyadicInterval& iv) {
  const Dyadic three(3);
  Dyadic lo = iv.lo.sign() > 0 ? Dyadic(0) : iv.lo;
  Dyadic hi = iv.hi.sign() < 0 ? Dyadic(0) : iv.hi;
  if (lo < -three) lo = -three;
  if (hi > three) hi = three;
  return {lo, hi};
}

}  // namespace

ZenoMandelbrotRun zeno_mandelbrot_run(const RealOracle& ox, const RealOracle& oy, unsigned stages, long precision) {
  // |z| >= 2.1  <=>  |z|^2 >= 441/100
  const Rational flag_sq = Rational::normalize(441, 100);
  const Dyadic nine(9);
  ZenoMandelbrotRun run;
  for (unsigned i = 1; i <= stages; ++i) {
    long p = std::max(precision, static_cast<long>(i) + 2);
    ComplexBox c = oracle_box(ox, oy, i, p);
    ComplexBox z = ComplexBox::point(Dyadic(0), Dyadic(0));
    bool flagged = false;
    for (unsigned k = 1; k <= i && !flagged; ++k) {
      z = box_step(z, c, p);
      DyadicInterval m = box_abs_sq_bounds(z, p);
      if (m.lo >= flag_sq) flagged = true;
      if (m.hi > nine) z = {scale_back_component(z.re), scale_back_component(z.im)};
    }
    run.stages.push_back({i, z, flagged});
    if (flagged && !run.first_flagged) run.first_flagged = i;
  }

  std::size_t trailing = 0;
  for (auto it = run.stages.rbegin(); it != run.stages.rend() && it->escaped_flag; ++it) ++trailing;
  if (!run.first_flagged) {
    run.classification = ZenoClass::bounded_so_far;
  } else if (trailing >= (run.stages.size() + 1) / 2) {
    run.classification = ZenoClass::escape_cofinal;
  } else {
    run.classification = ZenoClass::mixed;
  }
  return run;
}

std::string_view lamp_machine_text() {
  return "# Thomson's lamp: cell 0 is switched on and off forever.\n"
         "start: lamp\n"
         "lamp,_ -> lamp,1,S\n"
         "lamp,0 -> lamp,1,S\n"
         "lamp,1 -> lamp,0,S\n";
}

}  // namespace mandel::zeno
