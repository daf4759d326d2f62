// SPDX-License-Identifier: Apache-2.0

#include "mandel/json_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mandel::io {

Json point_json(const ComplexRational& c) {
  Json j;
  j["re"] = c.re.to_string();
  j["im"] = c.im.to_string();
  return j;
}

ComplexRational point_from_json(const Json& j) {
  return {Rational::parse(j.at("re").get<std::string>()), Rational::parse(j.at("im").get<std::string>())};
}

Json certificate_json(const Verdict& v) {
  Json j = Json::object();
  if (v.is_out()) {
    j["kind"] = "escape";
    j["n"] = v.escape().n;
    j["abs_sq_lower"] = v.escape().abs_sq_lower.to_string();
  } else if (v.is_in()) {
    const InCertificate& cert = v.membership();
    j["kind"] = certificate_kind(cert);
    if (const auto* cyc = std::get_if<CycleCert>(&cert)) {
      j["preperiod"] = cyc->preperiod;
      j["period"] = cyc->period;
      j["witness"] = point_json(cyc->witness);
    }
  }
  return j;
}

Json verdict_json(const Json& c, const Verdict& v) {
  Json j;
  j["c"] = c;
  j["verdict"] = verdict_name(v);
  j["certificate"] = certificate_json(v);
  j["budget"] = v.budget;
  j["precision"] = v.precision;
  return j;
}

Verdict verdict_from_json(const Json& j) {
  Verdict v;
  v.budget = j.at("budget").get<std::uint64_t>();
  v.precision = j.at("precision").get<long>();
  const std::string name = j.at("verdict").get<std::string>();
  const Json& cert = j.at("certificate");
  if (name == "unknown") {
    v.result = UnknownVerdict{};
  } else if (name == "out") {
    v.result = OutVerdict{EscapeCert{cert.at("n").get<std::uint64_t>(),
                                     Dyadic::parse(cert.at("abs_sq_lower").get<std::string>())}};
  } else if (name == "in") {
    const std::string kind = cert.at("kind").get<std::string>();
    if (kind == "cycle") {
      v.result = InVerdict{CycleCert{cert.at("preperiod").get<std::uint64_t>(), cert.at("period").get<std::uint64_t>(),
                                     point_from_json(cert.at("witness"))}};
    } else if (kind == "cardioid") {
      v.result = InVerdict{CardioidCert{}};
    } else if (kind == "bulb") {
      v.result = InVerdict{BulbCert{}};
    } else {
      throw std::invalid_argument("unknown certificate kind '" + kind + "'");
    }
  } else {
    throw std::invalid_argument("unknown verdict '" + name + "'");
  }
  return v;
}

namespace {

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace

Json snapshot_json(const zeno::Snapshot& s) {
  Json j;
  j["step"] = s.step;
  j["state"] = s.state;
  j["head"] = s.head;
  j["digest"] = hex64(s.digest);
  Json tape = Json::object();
  for (const auto& [pos, sym] : s.tape) tape[std::to_string(pos)] = std::string(1, sym);
  j["tape"] = tape;
  return j;
}

std::string trace_jsonl(const zeno::ZenoTrace& trace) {
  std::string out;
  for (const auto& s : trace.snapshots) {
    out += snapshot_json(s).dump();
    out += '\n';
  }
  return out;
}

Json trace_summary_json(const zeno::ZenoTrace& trace) {
  Json j;
  j["steps"] = trace.steps;
  j["halted_at"] = trace.halted_at ? Json(*trace.halted_at) : Json(nullptr);
  j["stalled_at"] = trace.stalled_at ? Json(*trace.stalled_at) : Json(nullptr);
  j["elapsed"] = trace.elapsed.to_string();
  j["snapshots"] = trace.snapshots.size();
  return j;
}

namespace {

Json interval_json(const DyadicInterval& iv) {
  Json j;
  j["lo"] = iv.lo.to_string();
  j["hi"] = iv.hi.to_string();
  return j;
}

const char* mode_name(render::Mode m) { return m == render::Mode::point ? "point" : "box"; }

char cell_letter(const render::Cell& c) {
  if (c.is_out()) return 'o';
  if (c.is_in()) return 'i';
  return 'u';
}

}  // namespace

Json stage_json(const zeno::StageRecord& s) {
  Json j;
  j["stage"] = s.stage;
  Json x;
  x["re"] = interval_json(s.x.re);
  x["im"] = interval_json(s.x.im);
  j["x"] = x;
  j["escaped_flag"] = s.escaped_flag;
  return j;
}

Json viewport_json(const render::Viewport& v) {
  Json j;
  j["re_min"] = v.re_min.to_string();
  j["re_max"] = v.re_max.to_string();
  j["im_min"] = v.im_min.to_string();
  j["im_max"] = v.im_max.to_string();
  j["n"] = v.n;
  return j;
}

Json grid_summary_json(const render::PixelGrid& g) {
  Json j;
  j["viewport"] = viewport_json(g.view);
  j["mode"] = mode_name(g.params.mode);
  j["budget"] = g.params.decide.budget;
  j["precision"] = g.params.decide.precision;
  j["precision_max"] = g.params.decide.precision_max;
  j["bit_cap"] = g.params.decide.bit_cap;
  j["regions"] = g.params.decide.use_regions;
  render::Counts c = render::count_verdicts(g);
  j["counts"] = {{"out", c.out}, {"in", c.in}, {"unknown", c.unknown}};
  render::AreaBounds a = render::area_estimate(g);
  j["area"] = {{"upper", a.upper.to_string()}, {"lower", a.lower.to_string()}};
  return j;
}

Json grid_json(const render::PixelGrid& g) {
  Json j = grid_summary_json(g);
  const unsigned n = g.view.n;
  Json rows = Json::array();
  Json escapes = Json::array();
  for (unsigned r = 0; r < n; ++r) {
    std::string letters(n, 'u');
    Json esc = Json::array();
    for (unsigned k = 0; k < n; ++k) {
      const render::Cell& c = g.at(r, k);
      letters[k] = cell_letter(c);
      esc.push_back(c.first_escape);
    }
    rows.push_back(letters);
    escapes.push_back(std::move(esc));
  }
  j["verdicts"] = std::move(rows);
  j["first_escape"] = std::move(escapes);
  return j;
}

std::string grid_summary_csv(const render::PixelGrid& g) {
  render::Counts c = render::count_verdicts(g);
  render::AreaBounds a = render::area_estimate(g);
  std::ostringstream out;
  out << "n,mode,budget,precision,out,in,unknown,upper,lower,upper_approx,lower_approx\n";
  out << g.view.n << ',' << mode_name(g.params.mode) << ',' << g.params.decide.budget << ','
      << g.params.decide.precision << ',' << c.out << ',' << c.in << ',' << c.unknown << ',' << a.upper.to_string()
      << ',' << a.lower.to_string() << ',' << a.upper.to_double() << ',' << a.lower.to_double() << '\n';
  return out.str();
}

}  // namespace mandel::io
