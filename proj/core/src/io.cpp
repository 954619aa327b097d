#include "kp/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kp/error.hpp"

namespace kp {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kInvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw Error(ErrorKind::kInvalidInput, "expected a number", field);
  return j.get<double>();
}

const json& member(const json& j, const char* key, const std::string& prefix) {
  const std::string field = prefix + key;
  if (!j.is_object()) throw Error(ErrorKind::kInvalidInput, "expected an object", prefix.empty() ? "$" : prefix);
  const auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::kInvalidInput, "missing key", field);
  return *it;
}

Configuration config_from(const json& j, const std::string& prefix) {
  const json& jdim = member(j, "dim", prefix);
  if (!jdim.is_number_integer() || jdim.get<long long>() < 1) {
    throw Error(ErrorKind::kInvalidInput, "dim must be a positive integer", prefix + "dim");
  }
  const int dim = jdim.get<int>();
  const json& jc = member(j, "centers", prefix);
  const json& jr = member(j, "radii", prefix);
  if (!jc.is_array()) throw Error(ErrorKind::kInvalidInput, "centers must be an array", prefix + "centers");
  if (!jr.is_array()) throw Error(ErrorKind::kInvalidInput, "radii must be an array", prefix + "radii");
  if (jc.size() != jr.size()) {
    throw Error(ErrorKind::kInvalidInput, "centers and radii differ in length", prefix + "radii");
  }
  if (jc.empty()) throw Error(ErrorKind::kInvalidInput, "at least one center is required", prefix + "centers");
  std::vector<double> coords;
  std::vector<double> radii;
  for (std::size_t i = 0; i < jc.size(); ++i) {
    const std::string field = prefix + "centers[" + std::to_string(i) + "]";
    if (!jc[i].is_array() || jc[i].size() != static_cast<std::size_t>(dim)) {
      throw Error(ErrorKind::kInvalidInput, "center must have dim coordinates", field);
    }
    for (std::size_t k = 0; k < jc[i].size(); ++k) {
      const double x = number(jc[i][k], field);
      if (!std::isfinite(x)) throw Error(ErrorKind::kInvalidInput, "coordinate is not finite", field);
      coords.push_back(x);
    }
    const std::string rfield = prefix + "radii[" + std::to_string(i) + "]";
    const double r = number(jr[i], rfield);
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::kInvalidInput, "radius must be positive", rfield);
    radii.push_back(r);
  }
  return Configuration(dim, std::move(coords), std::move(radii));
}

json config_json(const Configuration& c) {
  json centers = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto x = c.center(i);
    centers.push_back(std::vector<double>(x.begin(), x.end()));
  }
  return {{"dim", c.dim()}, {"centers", centers}, {"radii", c.radii()}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Configuration config_from_json(const std::string& text) { return config_from(parse(text), ""); }

std::string config_to_json(const Configuration& config, int indent) { return config_json(config).dump(indent); }

ExpansionPair pair_from_json(const std::string& text) {
  const json j = parse(text);
  ExpansionPair pair{config_from(member(j, "p", ""), "p."), config_from(member(j, "q", ""), "q.")};
  if (pair.p.dim() != pair.q.dim()) throw Error(ErrorKind::kMismatch, "p and q differ in dimension", "q.dim");
  if (pair.p.size() != pair.q.size()) {
    throw Error(ErrorKind::kMismatch, "p and q differ in point count", "q.centers");
  }
  for (std::size_t i = 0; i < pair.p.size(); ++i) {
    if (pair.p.radius(i) != pair.q.radius(i)) {
      throw Error(ErrorKind::kMismatch, "p and q differ in radius", "q.radii[" + std::to_string(i) + "]");
    }
  }
  return pair;
}

std::string pair_to_json(const ExpansionPair& pair, int indent) {
  return json{{"p", config_json(pair.p)}, {"q", config_json(pair.q)}}.dump(indent);
}

std::string area_report_to_json(const AreaReport& r, int indent) {
  return json{{"mode", std::string(to_string(r.mode))},
              {"N", r.per_cell_area.size()},
              {"total_area", r.total_area},
              {"boundary_total", r.boundary_total},
              {"weighted_boundary", r.weighted_boundary},
              {"per_cell_area", r.per_cell_area},
              {"per_cell_boundary", r.per_cell_boundary}}
      .dump(indent);
}

std::string scenario_to_json(const ScenarioResult& result, int indent) {
  json j;
  j["name"] = result.name;
  j["inputs"] = result.inputs;
  json metrics = json::object();
  for (const auto& [k, v] : result.metrics) metrics[k] = finite_or_null(v);
  j["metrics"] = metrics;
  j["verdicts"] = result.verdicts;
  j["passed"] = result.passed();
  json traces = json::object();
  for (const auto& [k, values] : result.traces) {
    json arr = json::array();
    for (double v : values) arr.push_back(finite_or_null(v));
    traces[k] = arr;
  }
  j["traces"] = traces;
  if (result.pair) j["pair"] = {{"p", config_json(result.pair->p)}, {"q", config_json(result.pair->q)}};
  return j.dump(indent);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot read file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Configuration load_config(const std::string& path) { return config_from_json(read_file(path)); }

ExpansionPair load_pair(const std::string& path) { return pair_from_json(read_file(path)); }

}  // namespace kp
