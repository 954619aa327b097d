#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kp/area.hpp"
#include "kp/config.hpp"
#include "kp/dynamics.hpp"
#include "kp/error.hpp"
#include "kp/highdim.hpp"
#include "kp/io.hpp"
#include "kp/power_diagram.hpp"
#include "kp/random.hpp"
#include "kp/scenarios.hpp"

namespace kp::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

enum class Format { kCsv, kJson };

struct Common {
  std::string config;
  std::string pair;
  std::uint64_t samples = 200000;
  std::uint64_t seed = 1;
  std::size_t grid = 0;
  std::optional<double> tol;
  std::string out_dir;
  Format format = Format::kCsv;
  bool svg = false;
};

// One command's output: the main document plus optional side artifacts.
struct Output {
  std::string body;
  std::map<std::string, std::string> artifacts;  // file name -> content
  bool passed = true;
};

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw Error(ErrorKind::kInvalidInput, "cannot write file", tmp.string());
    f << content;
  }
  fs::rename(tmp, path);
}

void add_common(CLI::App* cmd, Common& c, bool config, bool pair) {
  if (config) cmd->add_option("--config", c.config, "Configuration JSON file");
  if (pair) cmd->add_option("--pair", c.pair, "Expansion pair JSON file");
  cmd->add_option("--samples", c.samples, "Monte Carlo samples");
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--grid", c.grid, "Number of grid points");
  cmd->add_option("--tol", c.tol, "Tolerance");
  cmd->add_option("--out", c.out_dir, "Output directory (stdout when omitted)");
  cmd->add_option_function<std::string>(
         "--format", [&c](const std::string& v) { c.format = v == "json" ? Format::kJson : Format::kCsv; },
         "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--svg", c.svg, "Also write SVG figures (needs --out)");
}

Configuration need_config(const Common& c) {
  if (c.config.empty()) throw Error(ErrorKind::kInvalidInput, "--config is required", "--config");
  return load_config(c.config);
}

ExpansionPair need_pair(const Common& c) {
  if (c.pair.empty()) throw Error(ErrorKind::kInvalidInput, "--pair is required", "--pair");
  return load_pair(c.pair);
}

std::vector<AreaMode> modes_from(const std::string& name) {
  if (name == "both") return {AreaMode::kUnion, AreaMode::kIntersection};
  if (const auto m = parse_area_mode(name)) return {*m};
  throw Error(ErrorKind::kInvalidInput, "mode must be union, intersection or both", "--mode");
}

std::string svg_of(const Configuration& config, CellVariant variant) {
  if (config.dim() != 2) throw Error(ErrorKind::kInvalidInput, "SVG output needs a planar configuration", "dim");
  return diagram_svg(build_diagram(config, variant));
}

// ---------------------------------------------------------------------------
// Scenario-style results: "kind,key,value" rows, traces as a separate table.

std::string scenario_csv(const ScenarioResult& r) {
  std::ostringstream s;
  s << "kind,key,value\n";
  for (const auto& [k, v] : r.inputs) s << "input," << k << ',' << v << '\n';
  for (const auto& [k, v] : r.metrics) s << "metric," << k << ',' << num(v) << '\n';
  for (const auto& [k, v] : r.verdicts) s << "verdict," << k << ',' << (v ? "pass" : "fail") << '\n';
  s << "verdict,all," << (r.passed() ? "pass" : "fail") << '\n';
  return s.str();
}

std::string traces_csv(const ScenarioResult& r) {
  std::vector<std::string> keys;
  if (r.traces.count("t")) keys.push_back("t");
  for (const auto& [k, v] : r.traces) {
    if (k != "t") keys.push_back(k);
  }
  std::ostringstream s;
  for (std::size_t c = 0; c < keys.size(); ++c) s << (c ? "," : "") << keys[c];
  s << '\n';
  std::size_t rows = 0;
  for (const auto& k : keys) rows = std::max(rows, r.traces.at(k).size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < keys.size(); ++c) {
      const auto& col = r.traces.at(keys[c]);
      s << (c ? "," : "") << (i < col.size() ? num(col[i]) : "");
    }
    s << '\n';
  }
  return s.str();
}

Output scenario_output(const ScenarioResult& r, const Common& c, bool traces_as_body) {
  Output o;
  o.passed = r.passed();
  if (c.format == Format::kJson) {
    o.body = scenario_to_json(r) + "\n";
  } else {
    o.body = traces_as_body && !r.traces.empty() ? traces_csv(r) : scenario_csv(r);
  }
  if (!r.traces.empty()) o.artifacts[r.name + "_traces.csv"] = traces_csv(r);
  if (c.svg && r.pair && r.pair->p.dim() == 2) {
    o.artifacts[r.name + "_p.svg"] = svg_of(r.pair->p, CellVariant::kNearest);
    o.artifacts[r.name + "_q.svg"] = svg_of(r.pair->q, CellVariant::kNearest);
  } else if (c.svg && r.motion && r.motion->dim() == 2) {
    for (const auto& [label, t] : {std::pair{"t0", 0.0}, std::pair{"t05", 0.5}, std::pair{"t1", 1.0}}) {
      o.artifacts[r.name + "_" + label + ".svg"] = svg_of(r.motion->at(t), CellVariant::kNearest);
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// Commands.

Output cmd_area(const Common& c, const std::string& mode) {
  const Configuration config = need_config(c);
  if (config.dim() != 2) throw Error(ErrorKind::kInvalidInput, "area needs a planar configuration; use mc-volume", "dim");
  Output o;
  json arr = json::array();
  std::string csv = area_csv_header() + "\n";
  for (AreaMode m : modes_from(mode)) {
    const AreaReport r = area_report(config, m);
    csv += area_csv_row(r) + "\n";
    arr.push_back(json::parse(area_report_to_json(r)));
  }
  o.body = c.format == Format::kJson ? arr.dump(2) + "\n" : csv;
  if (c.svg) o.artifacts["diagram.svg"] = svg_of(config, CellVariant::kNearest);
  return o;
}

Output cmd_diagram(const Common& c, const std::string& variant_name) {
  const Configuration config = need_config(c);
  if (config.dim() != 2) throw Error(ErrorKind::kInvalidInput, "diagram needs a planar configuration", "dim");
  CellVariant variant;
  if (variant_name == "nearest") {
    variant = CellVariant::kNearest;
  } else if (variant_name == "farthest") {
    variant = CellVariant::kFarthest;
  } else {
    throw Error(ErrorKind::kInvalidInput, "variant must be nearest or farthest", "--variant");
  }
  const PowerDiagram diagram = build_diagram(config, variant);
  Output o;
  std::string csv = "index,variant,cell_area,arc_length,walls,wall_length\n";
  json cells = json::array();
  for (std::size_t i = 0; i < config.size(); ++i) {
    const double r = config.radius(i);
    const CircularPolygon cell = truncated_cell(diagram, i, r);
    const double area = cell.empty() ? 0.0 : region_area(cell);
    const double arcs = boundary_arc_length(cell, config.center2(i), r);
    std::size_t walls = 0;
    double wall_length = 0.0;
    json jw = json::array();
    for (std::size_t j = 0; j < config.size(); ++j) {
      if (j == i) continue;
      const Wall w = wall(diagram, i, j, r);
      if (!w.segment || w.length <= 0.0) continue;
      ++walls;
      wall_length += w.length;
      jw.push_back({{"j", j}, {"length", w.length}});
    }
    csv += std::to_string(i) + "," + std::string(to_string(variant)) + "," + num(area) + "," + num(arcs) + "," +
           std::to_string(walls) + "," + num(wall_length) + "\n";
    cells.push_back({{"index", i}, {"cell_area", area}, {"arc_length", arcs}, {"walls", jw}});
  }
  o.body = c.format == Format::kJson
               ? json{{"variant", std::string(to_string(variant))}, {"cells", cells}}.dump(2) + "\n"
               : csv;
  if (c.svg) o.artifacts["diagram.svg"] = diagram_svg(diagram);
  return o;
}

Output cmd_verify(const Common& c, const std::string& method) {
  VerifyOptions options;
  if (method == "exact2d") {
    options.method = VerifyMethod::kExact2d;
  } else if (method == "mc") {
    options.method = VerifyMethod::kMonteCarlo;
  } else {
    throw Error(ErrorKind::kInvalidInput, "method must be exact2d or mc", "--method");
  }
  options.samples = c.samples;
  options.seed = c.seed;
  if (c.tol) options.tol = *c.tol;
  return scenario_output(verify_pair(need_pair(c), options), c, false);
}

Output cmd_csikos(const Common& c, const std::string& motion_name, const std::string& mode,
                  const std::vector<double>& times) {
  const ExpansionPair pair = need_pair(c);
  std::optional<Motion> motion;
  if (motion_name == "linear") {
    motion = linear_motion(pair.p, pair.q);
  } else if (motion_name == "lift") {
    motion = lift_motion(pair.p, pair.q);
  } else {
    throw Error(ErrorKind::kInvalidInput, "motion must be linear or lift", "--motion");
  }
  CsikosOptions options;
  options.samples = c.samples;
  options.seed = c.seed;
  const bool exact = motion->dim() == 2;
  const double tol = c.tol.value_or(1e-6);
  Output o;
  std::string csv = "t,mode,formula,formula_std_error,fd,fd_std_error,rel_error,verdict\n";
  json rows = json::array();
  for (double t : times) {
    for (AreaMode m : modes_from(mode)) {
      const DerivativeSample d = csikos_derivative(*motion, t, m, options);
      const double scale = std::max({std::abs(d.fd_value), std::abs(d.formula_value), 1e-300});
      const double rel = std::abs(d.formula_value - d.fd_value) / scale;
      const bool ok = exact ? (rel <= tol || std::abs(d.formula_value - d.fd_value) <= tol * 1e-3)
                            : std::abs(d.formula_value - d.fd_value) <=
                                  3.0 * std::hypot(d.formula_std_error, d.fd_std_error);
      o.passed = o.passed && ok;
      csv += num(t) + "," + std::string(to_string(m)) + "," + num(d.formula_value) + "," +
             num(d.formula_std_error) + "," + num(d.fd_value) + "," + num(d.fd_std_error) + "," + num(rel) + "," +
             (ok ? "pass" : "fail") + "\n";
      json terms = json::array();
      for (const PairTerm& p : d.per_pair_terms) {
        terms.push_back({{"i", p.i}, {"j", p.j}, {"rate", p.rate}, {"wall", p.wall}, {"wall_std_error", p.wall_std_error}});
      }
      rows.push_back({{"t", t},
                      {"mode", std::string(to_string(m))},
                      {"formula", jnum(d.formula_value)},
                      {"formula_std_error", jnum(d.formula_std_error)},
                      {"fd", jnum(d.fd_value)},
                      {"fd_std_error", jnum(d.fd_std_error)},
                      {"rel_error", jnum(rel)},
                      {"verdict", ok ? "pass" : "fail"},
                      {"per_pair_terms", terms}});
    }
  }
  o.body = c.format == Format::kJson ? rows.dump(2) + "\n" : csv;
  return o;
}

Output cmd_trace(const Common& c, double s_probe) {
  ProofTraceOptions options;
  if (c.grid) options.t_grid = uniform_grid(c.grid);
  options.s_probe = s_probe;
  options.samples = c.samples;
  options.seed = c.seed;
  return scenario_output(proof_trace(need_pair(c), options), c, true);
}

Output cmd_mc_volume(const Common& c, const std::string& mode) {
  const Configuration config = need_config(c);
  Output o;
  std::string csv = mc_csv_header() + "\n";
  json rows = json::array();
  std::uint64_t stream = 0;
  for (AreaMode m : modes_from(mode)) {
    const McEstimate e = mc_volume(config, m, c.samples, stream_seed(c.seed, stream++));
    csv += mc_csv_row(std::string(to_string(m)), config.dim(), config.size(), e) + "\n";
    rows.push_back({{"quantity", std::string(to_string(m))},
                    {"dim", config.dim()},
                    {"N", config.size()},
                    {"estimate", e.value},
                    {"std_error", e.std_error},
                    {"samples", e.samples},
                    {"seed", e.seed}});
  }
  o.body = c.format == Format::kJson ? rows.dump(2) + "\n" : csv;
  return o;
}

Output cmd_kirszbraun(const Common& c) {
  const ExpansionPair pair = need_pair(c);
  const double tol = c.tol.value_or(kFeasibilityTol);
  const KirszbraunVerdict v = kirszbraun_check(pair, tol);
  const Feasibility fp = intersection_feasibility(pair.p, tol);
  const Feasibility fq = intersection_feasibility(pair.q, tol);
  Output o;
  o.passed = v.holds;
  if (c.format == Format::kJson) {
    o.body = json{{"q_nonempty", v.q_nonempty},
                  {"p_nonempty", v.p_nonempty},
                  {"q_min_max_power", fq.min_max_power},
                  {"p_min_max_power", fp.min_max_power},
                  {"p_witness", fp.witness},
                  {"holds", v.holds}}
                 .dump(2) +
             "\n";
  } else {
    o.body = "q_nonempty,p_nonempty,q_min_max_power,p_min_max_power,verdict\n" +
             std::string(v.q_nonempty ? "true" : "false") + "," + (v.p_nonempty ? "true" : "false") + "," +
             num(fq.min_max_power) + "," + num(fp.min_max_power) + "," + (v.holds ? "pass" : "fail") + "\n";
  }
  return o;
}

Output cmd_hull(const Common& c) {
  const double tol = c.tol.value_or(1e-9);
  double perim_p = NAN;
  double perim_q = NAN;
  if (!c.pair.empty()) {
    const ExpansionPair pair = need_pair(c);
    if (pair.p.dim() != 2) throw Error(ErrorKind::kInvalidInput, "hull perimeter needs planar input", "dim");
    perim_p = hull_perimeter(pair.p);
    perim_q = hull_perimeter(pair.q);
  } else {
    const Configuration config = need_config(c);
    if (config.dim() != 2) throw Error(ErrorKind::kInvalidInput, "hull perimeter needs planar input", "dim");
    perim_p = hull_perimeter(config);
  }
  Output o;
  const bool has_q = !std::isnan(perim_q);
  const double margin = has_q ? perim_q - perim_p : NAN;
  o.passed = !has_q || margin >= -tol;
  const std::string verdict = has_q ? (o.passed ? "pass" : "fail") : "";
  if (c.format == Format::kJson) {
    o.body = json{{"perimeter_p", perim_p}, {"perimeter_q", jnum(perim_q)}, {"margin", jnum(margin)},
                  {"verdict", verdict}}
                 .dump(2) +
             "\n";
  } else {
    o.body = "perimeter_p,perimeter_q,margin,verdict\n" + num(perim_p) + "," + (has_q ? num(perim_q) : "") + "," +
             (has_q ? num(margin) : "") + "," + verdict + "\n";
  }
  return o;
}

Output cmd_remark3(const Common& c, int k, double t, double s_step, const std::string& mode) {
  const ExpansionPair pair = need_pair(c);
  const auto modes = modes_from(mode);
  if (modes.size() != 1) throw Error(ErrorKind::kInvalidInput, "remark3-probe takes one mode", "--mode");
  const Remark3Report r = remark3_probe(linear_motion(pair.p, pair.q), k, t, s_step, modes.front());
  Output o;
  std::string csv = "i,j,k,value,error,sign,status\n";
  json rows = json::array();
  for (const Remark3Term& term : r.terms) {
    const std::string status = term.undefined ? "undefined" : term.inconclusive ? "inconclusive" : "ok";
    csv += std::to_string(term.i) + "," + std::to_string(term.j) + "," + std::to_string(k) + "," + num(term.value) +
           "," + num(term.error) + "," + std::to_string(term.sign) + "," + status + "\n";
    rows.push_back({{"i", term.i},
                    {"j", term.j},
                    {"k", k},
                    {"value", jnum(term.value)},
                    {"error", jnum(term.error)},
                    {"sign", term.sign},
                    {"status", status}});
  }
  o.body = c.format == Format::kJson
               ? json{{"t", t}, {"s_step", s_step}, {"mode", std::string(to_string(r.mode))}, {"terms", rows}}.dump(2) +
                     "\n"
               : csv;
  return o;
}

void emit(const Output& o, const Common& c, const std::string& command, const std::vector<std::string>& args,
          std::ostream& out) {
  if (c.out_dir.empty()) {
    if (c.svg) throw Error(ErrorKind::kInvalidInput, "--svg needs --out", "--svg");
    out << o.body;
    return;
  }
  const fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kInvalidInput, "cannot create output directory", c.out_dir);
  std::string stem = command;
  std::replace(stem.begin(), stem.end(), ' ', '_');
  const std::string main_name = stem + (c.format == Format::kJson ? ".json" : ".csv");
  json artifacts = json::array();
  write_atomic(dir / main_name, o.body);
  artifacts.push_back(main_name);
  for (const auto& [name, content] : o.artifacts) {
    if (!c.svg && name.ends_with(".svg")) continue;
    write_atomic(dir / name, content);
    artifacts.push_back(name);
  }
  const json manifest{{"command", command}, {"parameters", args}, {"seed", c.seed}, {"artifacts", artifacts}};
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  out << (dir / main_name).string() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kp-lab: planar Kneser-Poulsen constructs", "kp-lab"};
  app.require_subcommand(1);
  app.fallthrough(false);

  Common c;
  std::string mode = "both";
  std::string variant = "nearest";
  std::string method = "exact2d";
  std::string motion = "linear";
  std::vector<double> times{0.5};
  double s_probe = 0.0;
  double s_step = 1e-3;
  int k_derivative = 1;
  int hk_k = 400;
  HabichtKneserOptions hk;
  BernOptions bern;

  auto* area = app.add_subcommand("area", "Exact union and intersection areas of a planar configuration");
  add_common(area, c, true, false);
  area->add_option("--mode", mode, "union, intersection or both");

  auto* diagram = app.add_subcommand("diagram", "Power diagram cells and walls");
  add_common(diagram, c, true, false);
  diagram->add_option("--variant", variant, "nearest or farthest");

  auto* verify = app.add_subcommand("verify-expansion", "Check that q expands p and the area inequalities");
  add_common(verify, c, false, true);
  verify->add_option("--method", method, "exact2d or mc");

  auto* csikos = app.add_subcommand("csikos-check", "Compare the wall formula for dV/dt with finite differences");
  add_common(csikos, c, false, true);
  csikos->add_option("--motion", motion, "linear or lift");
  csikos->add_option("--mode", mode, "union, intersection or both");
  csikos->add_option("--t", times, "Sample times")->expected(1, -1);

  auto* trace = app.add_subcommand("trace", "Lifted-motion trace of dV/ds in four dimensions");
  add_common(trace, c, false, true);
  trace->add_option("--s-probe", s_probe, "Radius offset: radii sqrt(r^2 + s)");

  auto* scenario = app.add_subcommand("scenario", "Named constructions");
  scenario->require_subcommand(1);
  auto* hk_cmd = scenario->add_subcommand("habicht-kneser", "Boundary length can shrink under expansion");
  add_common(hk_cmd, c, false, false);
  hk_cmd->add_option("--k", hk_k, "Number of rim disks");
  hk_cmd->add_option("--inner-fill", hk.inner_fill, "Lattice spacing over sqrt(2), in (0, 1)");
  hk_cmd->add_option("--rim-overlap", hk.rim_overlap, "Overlap of adjacent rim disks");
  hk_cmd->add_option("--ring-density", hk.ring_density, "Inner-ring disks per rim gap");
  auto* bern_cmd = scenario->add_subcommand("bern", "Expanding motion with a dip in boundary length");
  add_common(bern_cmd, c, false, false);
  bern_cmd->add_option("--radius-ratio", bern.radius_ratio, "Small radius over large radius");
  bern_cmd->add_option("--gap", bern.gap, "Distance between the large centers");
  bern_cmd->add_flag("--rigid", bern.rigid, "Keep the small disk fixed");

  auto* mc = app.add_subcommand("mc-volume", "Monte Carlo volume of a union or intersection of balls");
  add_common(mc, c, true, false);
  mc->add_option("--mode", mode, "union, intersection or both");

  auto* kirsz = app.add_subcommand("kirszbraun", "Nonempty intersection survives contraction");
  add_common(kirsz, c, false, true);

  auto* hull = app.add_subcommand("hull-perimeter", "Convex hull perimeter of centers");
  add_common(hull, c, true, true);

  auto* remark3 = app.add_subcommand("remark3-probe", "Signs of higher s-derivatives of wall lengths");
  add_common(remark3, c, false, true);
  remark3->add_option("--k", k_derivative, "Derivative order (1 to 3)");
  remark3->add_option("--t", times, "Time along the linear motion")->expected(1);
  remark3->add_option("--s-step", s_step, "Step in s");
  remark3->add_option("--mode", mode, "union or intersection");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* at = &app;
    for (auto* sub : app.get_subcommands()) {
      at = sub;
      if (!sub->get_subcommands().empty()) at = sub->get_subcommands().front();
    }
    err << at->help();
    return kExitInput;
  }

  try {
    Output o;
    std::string command;
    if (*area) {
      command = "area";
      o = cmd_area(c, mode);
    } else if (*diagram) {
      command = "diagram";
      o = cmd_diagram(c, variant);
    } else if (*verify) {
      command = "verify-expansion";
      o = cmd_verify(c, method);
    } else if (*csikos) {
      command = "csikos-check";
      o = cmd_csikos(c, motion, mode, times);
    } else if (*trace) {
      command = "trace";
      o = cmd_trace(c, s_probe);
    } else if (*hk_cmd) {
      command = "scenario habicht-kneser";
      o = scenario_output(habicht_kneser(hk_k, hk), c, false);
    } else if (*bern_cmd) {
      command = "scenario bern";
      if (c.grid) bern.grid = c.grid;
      o = scenario_output(bern_example(bern), c, false);
    } else if (*mc) {
      command = "mc-volume";
      o = cmd_mc_volume(c, mode);
    } else if (*kirsz) {
      command = "kirszbraun";
      o = cmd_kirszbraun(c);
    } else if (*hull) {
      command = "hull-perimeter";
      o = cmd_hull(c);
    } else if (*remark3) {
      command = "remark3-probe";
      o = cmd_remark3(c, k_derivative, times.front(), s_step, mode == "both" ? "union" : mode);
    }
    emit(o, c, command, args, out);
    if (!o.passed) {
      err << command << ": verdict failed\n";
      return kExitVerdict;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace kp::cli
