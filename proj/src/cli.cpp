// SPDX-License-Identifier: Apache-2.0

#include "mandel/cli.hpp"

#include "mandel/rational.hpp"
#include "mandel/render.hpp"
#include "mandel/zeno.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mandel::cli {

int exit_code(const Verdict& v) {
  if (v.is_in()) return kExitIn;
  if (v.is_out()) return kExitOut;
  return kExitUnknown;
}

bool is_rational_text(std::string_view text) { return text.rfind("sqrt(", 0) != 0; }

RealOracle parse_oracle(std::string_view text) {
  if (!is_rational_text(text)) {
    if (text.size() < 7 || text.back() != ')') throw EncodingError("malformed oracle '" + std::string(text) + "'");
    return RealOracle::sqrt_of(Rational::parse(text.substr(5, text.size() - 6)));
  }
  return RealOracle::constant(Rational::parse(text));
}

// --- decidability table ----------------------------------------------------

namespace {

io::Json literature(const char* mark, const char* note) {
  return {{"mark", mark}, {"status", "literature"}, {"note", note}};
}

io::Json mandelbrot_sample_stats() {
  // 17 x 17 lattice of step 1/4 over [-2, 2]^2.
  std::size_t in = 0, out = 0, unknown = 0;
  for (int r = -8; r <= 8; ++r) {
    for (int k = -8; k <= 8; ++k) {
      ComplexRational c{Rational::normalize(k, 4), Rational::normalize(r, 4)};
      Verdict v = rational::mandelbrot_rational_semi(c);
      if (v.is_in()) {
        ++in;
      } else if (v.is_out()) {
        ++out;
      } else {
        ++unknown;
      }
    }
  }
  const std::size_t total = in + out + unknown;
  return {{"sample", "17x17 lattice, step 1/4, [-2,2]^2"},
          {"points", total},
          {"in", in},
          {"out", out},
          {"unknown", unknown},
          {"unknown_rate", Rational::normalize(static_cast<long>(unknown), static_cast<long>(total)).to_string()}};
}

}  // namespace

io::Json decidability_table() {
  const Rational x35 = Rational::normalize(3, 5);
  const Rational y45 = Rational::normalize(4, 5);
  const bool on = rational::circle_decide(x35, y45);
  const bool off = rational::circle_decide(Rational(1), Rational(1));
  io::Json circle = {{"mark", (on && !off) ? "✓" : "✗"},
                     {"status", "computed"},
                     {"witness", {{"x", "3/5"}, {"y", "4/5"}, {"on_circle", on}}},
                     {"counter_witness", {{"x", "1"}, {"y", "1"}, {"on_circle", off}}}};

  auto above = rational::exp_epigraph_decide_with_order(Rational(1), Rational(3));
  auto below = rational::exp_epigraph_decide_with_order(Rational(1), Rational(2));
  io::Json epigraph = {{"mark", (above.above && !below.above) ? "✓" : "✗"},
                       {"status", "computed"},
                       {"witness", {{"x", "1"}, {"y", "3"}, {"above", above.above}, {"order", above.order}}},
                       {"counter_witness", {{"x", "1"}, {"y", "2"}, {"above", below.above}, {"order", below.order}}}};

  io::Json mandel = {{"mark", "?"}, {"status", "open"}, {"stats", mandelbrot_sample_stats()}};

  io::Json rows = io::Json::array();
  rows.push_back({{"model", "Markov-computability over R_c"},
                  {"circle", literature("×", "computable functions are continuous")},
                  {"epigraph", literature("×", "computable functions are continuous")},
                  {"mandelbrot", literature("×", "-2 is a cluster point of the complement")}});
  rows.push_back({{"model", "Blum-Shub-Smale over R"},
                  {"circle", literature("✓", "polynomial equality test")},
                  {"epigraph", literature("×", "not BSS-decidable")},
                  {"mandelbrot", literature("×", "not BSS-decidable")}});
  rows.push_back({{"model", "Turing-computability over Q"}, {"circle", circle}, {"epigraph", epigraph}, {"mandelbrot", mandel}});
  rows.push_back({{"model", "Computable analysis"},
                  {"circle", literature("✓", "distance function computable")},
                  {"epigraph", literature("✓", "distance function computable")},
                  {"mandelbrot", literature("?", "open; follows from hyperbolicity")}});
  rows.push_back({{"model", "Zeno-computability over R_c"},
                  {"circle", literature("✓", "completed infinite runs; not simulated")},
                  {"epigraph", literature("✓", "completed infinite runs; not simulated")},
                  {"mandelbrot", literature("✓", "completed infinite runs; not simulated")}});
  return {{"columns", {"circle", "epigraph", "mandelbrot"}}, {"rows", rows}};
}

std::string format_table_text(const io::Json& table) {
  std::ostringstream out;
  auto pad = [](std::string s, std::size_t w) {
    // Marks are multi-byte UTF-8 but one column wide.
    std::size_t width = 0;
    for (unsigned char ch : s) width += (ch & 0xC0) != 0x80;
    if (width < w) s.append(w - width, ' ');
    return s;
  };
  out << pad("model", 32) << " | " << pad("Circle", 6) << " | " << pad("y>=e^x", 6) << " | " << pad("M'brot", 6)
      << " | source\n";
  out << std::string(32, '-') << "-+-" << std::string(6, '-') << "-+-" << std::string(6, '-') << "-+-"
      << std::string(6, '-') << "-+-------\n";
  for (const auto& row : table.at("rows")) {
    std::string source = row.at("circle").at("status").get<std::string>() == "computed" ? "computed" : "literature (untested)";
    out << pad(row.at("model").get<std::string>(), 32) << " | " << pad(row.at("circle").at("mark").get<std::string>(), 6)
        << " | " << pad(row.at("epigraph").at("mark").get<std::string>(), 6) << " | "
        << pad(row.at("mandelbrot").at("mark").get<std::string>(), 6) << " | " << source << '\n';
  }
  for (const auto& row : table.at("rows")) {
    if (row.at("circle").at("status") != "computed") continue;
    const auto& c = row.at("circle").at("witness");
    const auto& e = row.at("epigraph").at("witness");
    const auto& m = row.at("mandelbrot").at("stats");
    out << "\ncircle witness: (" << c.at("x").get<std::string>() << ", " << c.at("y").get<std::string>()
        << ") on circle = " << (c.at("on_circle").get<bool>() ? "true" : "false") << '\n';
    out << "epigraph witness: (" << e.at("x").get<std::string>() << ", " << e.at("y").get<std::string>()
        << ") above e^x = " << (e.at("above").get<bool>() ? "true" : "false") << ", settled at order "
        << e.at("order").get<unsigned>() << '\n';
    out << "mandelbrot sample: " << m.at("points").get<std::size_t>() << " points, in " << m.at("in").get<std::size_t>()
        << ", out " << m.at("out").get<std::size_t>() << ", unknown " << m.at("unknown").get<std::size_t>()
        << " (rate " << m.at("unknown_rate").get<std::string>() << ")\n";
  }
  return out.str();
}

// --- command line ------------------------------------------------------------

namespace {

struct NumericOpts {
  std::uint64_t budget = kPointBudget;
  long precision = 64;
  long precision_max = 512;
  std::size_t bit_cap = 4096;
  bool no_regions = false;

  [[nodiscard]] DecideParams params() const { return {budget, precision, precision_max, bit_cap, !no_regions}; }
};

void add_numeric(CLI::App* app, NumericOpts& o) {
  app->add_option("--budget", o.budget, "iteration budget")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  app->add_option("--precision", o.precision, "initial interval precision (bits)")->check(CLI::Range(1L, 1L << 20));
  app->add_option("--precision-max", o.precision_max, "precision cap for doubling (bits)")->check(CLI::Range(1L, 1L << 24));
  app->add_option("--bit-cap", o.bit_cap, "exact iteration size cap (bits)")->check(CLI::Range(std::size_t{64}, std::size_t{1} << 30));
  app->add_flag("--no-regions", o.no_regions, "disable cardioid/bulb certificates");
}

struct ViewOpts {
  std::string re_min = "-2", re_max = "2", im_min = "-2", im_max = "2";
  unsigned n = 1000;
  std::string mode = "point";
  unsigned workers = 1;

  [[nodiscard]] render::Viewport viewport() const {
    render::Viewport v{Rational::parse(re_min), Rational::parse(re_max), Rational::parse(im_min), Rational::parse(im_max), n};
    v.validate();
    return v;
  }
  [[nodiscard]] render::Mode render_mode() const { return mode == "box" ? render::Mode::box : render::Mode::point; }
};

void add_view(CLI::App* app, ViewOpts& o) {
  app->add_option("--re-min", o.re_min, "viewport left edge (rational)");
  app->add_option("--re-max", o.re_max, "viewport right edge (rational)");
  app->add_option("--im-min", o.im_min, "viewport bottom edge (rational)");
  app->add_option("--im-max", o.im_max, "viewport top edge (rational)");
  app->add_option("--n", o.n, "grid points per side")->check(CLI::Range(2U, 1U << 15));
  app->add_option("--mode", o.mode, "point or box")->check(CLI::IsMember({"point", "box"}));
  app->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1U, 256U));
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

int cmd_decide(const std::string& re, const std::string& im, unsigned stages, const NumericOpts& num, std::ostream& out) {
  io::Json c = {{"re", re}, {"im", im}};
  if (is_rational_text(re) && is_rational_text(im)) {
    ComplexRational point{Rational::parse(re), Rational::parse(im)};
    Verdict v = decide(point, num.params());
    out << io::verdict_json(io::point_json(point), v).dump() << '\n';
    return exit_code(v);
  }
  OracleDecision d = decide_oracle(parse_oracle(re), parse_oracle(im), stages, num.params());
  io::Json j = io::verdict_json(c, d.verdict);
  j["stage"] = d.stage;
  out << j.dump() << '\n';
  return exit_code(d.verdict);
}

int cmd_render(const ViewOpts& view, const NumericOpts& num, const std::string& format, const std::string& path,
               std::ostream& out) {
  render::GridParams gp{num.params(), view.render_mode(), view.workers};
  render::PixelGrid grid = render::classify_grid(view.viewport(), gp);
  io::Json meta = io::grid_summary_json(grid);
  if (format == "pgm" || format == "ppm") {
    render::Image img = render::escape_bands(grid);
    std::string bytes = format == "pgm" ? render::encode_pgm(img) : render::encode_ppm(img, render::default_palette());
    write_text(bytes, path);
    meta["image"] = {{"path", path}, {"format", format}, {"fnv1a", hex64(render::fnv1a(bytes))}};
    write_text(meta.dump(2) + "\n", path + ".json");
  } else if (format == "json") {
    write_text(io::grid_json(grid).dump() + "\n", path);
  } else {
    write_text(io::grid_summary_csv(grid), path);
  }
  out << meta.dump() << '\n';
  return 0;
}

int cmd_area(const ViewOpts& view, NumericOpts num, const std::vector<std::uint64_t>& budgets, const std::string& format,
             const std::string& path, std::ostream& out) {
  io::Json rows = io::Json::array();
  std::ostringstream csv;
  csv << "budget,upper,lower,upper_approx,lower_approx\n";
  for (std::uint64_t b : budgets) {
    num.budget = b;
    render::PixelGrid grid = render::classify_grid(view.viewport(), {num.params(), view.render_mode(), view.workers});
    render::AreaBounds a = render::area_estimate(grid);
    rows.push_back({{"budget", b},
                    {"upper", a.upper.to_string()},
                    {"lower", a.lower.to_string()},
                    {"upper_approx", a.upper.to_double()},
                    {"lower_approx", a.lower.to_double()}});
    csv << b << ',' << a.upper.to_string() << ',' << a.lower.to_string() << ',' << a.upper.to_double() << ','
        << a.lower.to_double() << '\n';
  }
  std::string text;
  if (format == "json") {
    io::Json j = {{"viewport", io::viewport_json(view.viewport())}, {"mode", view.mode}, {"rows", rows}};
    text = j.dump(2) + "\n";
  } else {
    text = csv.str();
  }
  if (path.empty()) {
    out << text;
  } else {
    write_text(text, path);
  }
  return 0;
}

struct ZenoOpts {
  std::string machine;
  std::string input;
  std::uint64_t budget = 64;
  std::uint64_t snapshot_every = 1;
  long cell = 0;
  std::size_t window = 8;
  bool strict = false;
  std::string out;
};

int zeno_trace_output(const zeno::TMDescription& m, const ZenoOpts& o, std::ostream& out) {
  zeno::ZenoTrace trace = zeno::run_stages(m, o.input, o.budget, o.snapshot_every);
  std::string lines = io::trace_jsonl(trace);
  io::Json summary = io::trace_summary_json(trace);
  std::size_t window = std::min(o.window, trace.snapshots.size());
  zeno::CellLimit lim = zeno::classify_cell_limit(trace, o.cell, window);
  summary["cell"] = o.cell;
  summary["window"] = window;
  summary["limit"] = zeno::limit_name(lim.kind);
  if (lim.kind == zeno::LimitKind::stabilized) {
    summary["value"] = std::string(1, lim.value);
    summary["since"] = lim.since;
  }
  io::Json wrapped = {{"summary", summary}};
  if (o.out.empty()) {
    out << lines;
  } else {
    write_text(lines, o.out);
  }
  out << wrapped.dump() << '\n';
  return 0;
}

int cmd_zeno_mandelbrot(const std::string& re, const std::string& im, unsigned stages, long precision, std::ostream& out) {
  zeno::ZenoMandelbrotRun run = zeno::zeno_mandelbrot_run(parse_oracle(re), parse_oracle(im), stages, precision);
  for (const auto& s : run.stages) out << io::stage_json(s).dump() << '\n';
  io::Json summary = {{"re", re},
                      {"im", im},
                      {"stages", stages},
                      {"classification", zeno::zeno_class_name(run.classification)},
                      {"first_flagged_stage", run.first_flagged ? io::Json(*run.first_flagged) : io::Json(nullptr)}};
  out << io::Json{{"summary", summary}}.dump() << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified Mandelbrot membership, rational deciders and Zeno-machine simulation", "mandelcert"};
  app.require_subcommand(1);

  // decide
  std::string re = "0", im = "0";
  unsigned stages = 30;
  NumericOpts decide_num;
  auto* decide_cmd = app.add_subcommand("decide", "certify membership of c = re + i im (exit 0 in, 1 out, 2 unknown)");
  decide_cmd->add_option("--re", re, "real part: p/q or sqrt(p/q)")->required();
  decide_cmd->add_option("--im", im, "imaginary part: p/q or sqrt(p/q)")->required();
  decide_cmd->add_option("--stages", stages, "oracle stages (sqrt inputs)")->check(CLI::Range(1U, 4096U));
  add_numeric(decide_cmd, decide_num);

  // render
  ViewOpts render_view;
  NumericOpts render_num;
  render_num.budget = kBandBudget;
  std::string render_format = "pgm";
  std::string render_out = "mandelbrot.pgm";
  auto* render_cmd = app.add_subcommand("render", "classify a grid and write an escape-band image plus JSON sidecar");
  add_view(render_cmd, render_view);
  add_numeric(render_cmd, render_num);
  render_cmd->add_option("--format", render_format, "pgm, ppm, json or csv")->check(CLI::IsMember({"pgm", "ppm", "json", "csv"}));
  render_cmd->add_option("--out", render_out, "output path");

  // area
  ViewOpts area_view;
  NumericOpts area_num;
  std::vector<std::uint64_t> area_budgets{kPointBudget};
  std::string area_format = "csv";
  std::string area_out;
  auto* area_cmd = app.add_subcommand("area", "upper/lower area bounds for one or more budgets");
  add_view(area_cmd, area_view);
  add_numeric(area_cmd, area_num);
  area_cmd->add_option("--budgets", area_budgets, "budgets, comma separated")->delimiter(',');
  area_cmd->add_option("--format", area_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  area_cmd->add_option("--out", area_out, "output path (default: stdout)");

  // zeno
  auto* zeno_cmd = app.add_subcommand("zeno", "accelerated Turing machine runs");
  zeno_cmd->require_subcommand(1);
  ZenoOpts zrun;
  auto* zeno_run = zeno_cmd->add_subcommand("run", "run a machine file; JSON lines per snapshot, then a summary");
  zeno_run->add_option("--machine", zrun.machine, "machine file (.tm)")->required();
  zeno_run->add_option("--input", zrun.input, "initial tape contents");
  zeno_run->add_option("--budget", zrun.budget, "step budget")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 32));
  zeno_run->add_option("--snapshot-every", zrun.snapshot_every, "snapshot cadence (steps)")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 32));
  zeno_run->add_option("--cell", zrun.cell, "tape cell to classify");
  zeno_run->add_option("--window", zrun.window, "classification window (snapshots)")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 32));
  zeno_run->add_flag("--strict", zrun.strict, "require declared states");
  zeno_run->add_option("--out", zrun.out, "write snapshots here instead of stdout");
  ZenoOpts zlamp;
  auto* zeno_lamp = zeno_cmd->add_subcommand("lamp", "run the bundled lamp machine");
  zeno_lamp->add_option("--budget", zlamp.budget, "step budget")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 32));
  zeno_lamp->add_option("--window", zlamp.window, "classification window (snapshots)")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 32));
  zeno_lamp->add_option("--out", zlamp.out, "write snapshots here instead of stdout");
  std::string zre = "0", zim = "0";
  unsigned zstages = 20;
  long zprecision = 64;
  auto* zeno_mb = zeno_cmd->add_subcommand("mandelbrot", "staged Mandelbrot loop with oracle inputs");
  zeno_mb->add_option("--re", zre, "real part: p/q or sqrt(p/q)")->required();
  zeno_mb->add_option("--im", zim, "imaginary part: p/q or sqrt(p/q)")->required();
  zeno_mb->add_option("--stages", zstages, "number of stages")->check(CLI::Range(1U, 4096U));
  zeno_mb->add_option("--precision", zprecision, "interval precision (bits)")->check(CLI::Range(1L, 1L << 20));

  // rational
  auto* rat_cmd = app.add_subcommand("rational", "deciders over the rationals");
  rat_cmd->require_subcommand(1);
  std::string rx = "0", ry = "0", rq = "0", rn = "0";
  auto* rat_circle = rat_cmd->add_subcommand("circle", "x^2 + y^2 = 1 ?");
  rat_circle->add_option("--x", rx)->required();
  rat_circle->add_option("--y", ry)->required();
  auto* rat_even = rat_cmd->add_subcommand("evenden", "1 if the reduced denominator is even");
  rat_even->add_option("--q", rq)->required();
  auto* rat_epi = rat_cmd->add_subcommand("epigraph", "y >= e^x ?");
  rat_epi->add_option("--x", rx)->required();
  rat_epi->add_option("--y", ry)->required();
  auto* rat_enc = rat_cmd->add_subcommand("encode", "least index of q in the numbering of Q");
  rat_enc->add_option("--q", rq)->required();
  auto* rat_dec = rat_cmd->add_subcommand("decode", "rational with index n");
  rat_dec->add_option("--n", rn)->required();

  // table
  std::string table_format = "text";
  auto* table_cmd = app.add_subcommand("table", "decidability summary table with computed witnesses");
  table_cmd->add_option("--format", table_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (decide_cmd->parsed()) return cmd_decide(re, im, stages, decide_num, out);
    if (render_cmd->parsed()) return cmd_render(render_view, render_num, render_format, render_out, out);
    if (area_cmd->parsed()) return cmd_area(area_view, area_num, area_budgets, area_format, area_out, out);
    if (zeno_run->parsed()) {
      return zeno_trace_output(zeno::load_tm(zrun.machine, zeno::ParseOptions{zrun.strict}), zrun, out);
    }
    if (zeno_lamp->parsed()) return zeno_trace_output(zeno::parse_tm(zeno::lamp_machine_text()), zlamp, out);
    if (zeno_mb->parsed()) return cmd_zeno_mandelbrot(zre, zim, zstages, zprecision, out);
    if (rat_circle->parsed()) {
      Rational x = Rational::parse(rx), y = Rational::parse(ry);
      out << io::Json{{"x", x.to_string()}, {"y", y.to_string()}, {"on_circle", rational::circle_decide(x, y)}}.dump() << '\n';
      return 0;
    }
    if (rat_even->parsed()) {
      Rational q = Rational::parse(rq);
      out << io::Json{{"q", q.to_string()}, {"even_denominator", rational::even_denominator(q)}}.dump() << '\n';
      return 0;
    }
    if (rat_epi->parsed()) {
      Rational x = Rational::parse(rx), y = Rational::parse(ry);
      auto d = rational::exp_epigraph_decide_with_order(x, y);
      io::Json j{{"x", x.to_string()}, {"y", y.to_string()}, {"above", d.above}, {"order", d.order}};
      if (d.order > 0) {
        auto b = rational::exp_bounds(x, d.order);
        j["lower"] = b.lower.to_string();
        j["upper"] = b.upper.to_string();
      }
      out << j.dump() << '\n';
      return 0;
    }
    if (rat_enc->parsed()) {
      Rational q = Rational::parse(rq);
      out << io::Json{{"q", q.to_string()}, {"n", rational::phi_encode(q).get_str()}}.dump() << '\n';
      return 0;
    }
    if (rat_dec->parsed()) {
      if (rn.empty() || rn.find_first_not_of("0123456789") != std::string::npos) {
        throw EncodingError("index must be a natural number, got '" + rn + "'");
      }
      rational::Natural n(rn, 10);
      auto code = rational::phi_components(n);
      out << io::Json{{"n", n.get_str()},
                      {"q", rational::phi_decode(n).to_string()},
                      {"s", code.sign_bit},
                      {"a", code.shifted_num.get_str()},
                      {"b", code.den_minus_one.get_str()}}
                 .dump()
          << '\n';
      return 0;
    }
    if (table_cmd->parsed()) {
      io::Json t = decidability_table();
      out << (table_format == "json" ? t.dump(2) + "\n" : format_table_text(t));
      return 0;
    }
  } catch (const EncodingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const zeno::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << "error: no command\n";
  return kExitUsage;
}

}  // namespace mandel::cli
