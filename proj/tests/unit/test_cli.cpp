#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = kp::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(KP_TEST_DATA_DIR) + "/" + name; }

std::string golden(const std::string& command) {
  std::ifstream f(std::string(KP_GOLDEN_DIR) + "/" + command + ".csv.header");
  std::string line;
  std::getline(f, line);
  return line;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

// Value of column `name` in the first data row of a CSV document.
std::string csv_field(const std::string& csv, const std::string& name, std::size_t row = 1) {
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  std::string line;
  for (std::size_t r = 0; r < row; ++r) std::getline(in, line);
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  const auto h = split(header);
  const auto v = split(line);
  for (std::size_t k = 0; k < h.size() && k < v.size(); ++k) {
    if (h[k] == name) return v[k];
  }
  return {};
}

}  // namespace

TEST_CASE("CSV headers match the golden files") {
  const std::string one = data("one_disk.json");
  const std::string two = data("two_disks.json");
  const std::string pair = data("two_disks_pair.json");
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"area", {"area", "--config", one}},
      {"diagram", {"diagram", "--config", two}},
      {"verify-expansion", {"verify-expansion", "--pair", pair}},
      {"csikos-check", {"csikos-check", "--pair", pair}},
      {"trace", {"trace", "--pair", pair, "--grid", "3"}},
      {"scenario", {"scenario", "bern", "--grid", "101"}},
      {"mc-volume", {"mc-volume", "--config", two, "--samples", "1000"}},
      {"kirszbraun", {"kirszbraun", "--pair", pair}},
      {"hull-perimeter", {"hull-perimeter", "--pair", pair}},
      {"remark3-probe", {"remark3-probe", "--pair", pair}},
  };
  for (const auto& [name, args] : cases) {
    CAPTURE(name);
    const Run r = run(args);
    CHECK(r.code == 0);
    CHECK(first_line(r.out) == golden(name));
  }
}

TEST_CASE("area of one unit disk is pi") {
  const Run r = run({"area", "--config", data("one_disk.json"), "--mode", "union"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(std::stod(csv_field(r.out, "total_area")) - std::numbers::pi) < 1e-9);
}

TEST_CASE("verify-expansion exit codes") {
  CHECK(run({"verify-expansion", "--pair", data("pair_identity.json")}).code == kp::cli::kExitOk);
  const Run bad = run({"verify-expansion", "--pair", data("pair_shrinking.json")});
  CHECK(bad.code == kp::cli::kExitVerdict);
  CHECK(bad.out.find("verdict,all,fail") != std::string::npos);
  const Run mismatch = run({"verify-expansion", "--pair", data("pair_radius_mismatch.json")});
  CHECK(mismatch.code == kp::cli::kExitInput);
  CHECK(mismatch.err.find("q.radii[1]") != std::string::npos);
  CHECK(run({"verify-expansion", "--pair", data("pair_3d.json"), "--method", "mc", "--samples", "100000"}).code ==
        kp::cli::kExitOk);
}

TEST_CASE("csikos-check agrees to 1e-6 at t = 0.5") {
  const Run r = run({"csikos-check", "--pair", data("two_disks_pair.json"), "--t", "0.5", "--mode", "union"});
  REQUIRE(r.code == 0);
  CHECK(std::stod(csv_field(r.out, "rel_error")) <= 1e-6);
  CHECK(csv_field(r.out, "verdict") == "pass");
}

TEST_CASE("bad input exits with code 2 and usage") {
  const Run unknown = run({"area", "--bogus"});
  CHECK(unknown.code == kp::cli::kExitInput);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({"frobnicate"}).code == kp::cli::kExitInput);
  CHECK(run({}).code == kp::cli::kExitInput);
  CHECK(run({"area"}).code == kp::cli::kExitInput);
  CHECK(run({"area", "--config", "/nonexistent.json"}).code == kp::cli::kExitInput);
  CHECK(run({"area", "--config", data("one_disk.json"), "--format", "xml"}).code == kp::cli::kExitInput);
  CHECK(run({"area", "--config", data("one_disk.json"), "--svg"}).code == kp::cli::kExitInput);
}

TEST_CASE("JSON output") {
  const Run r = run({"scenario", "bern", "--format", "json", "--grid", "101"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"name\": \"bern\"") != std::string::npos);
  CHECK(r.out.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("every command is deterministic under --seed") {
  const std::vector<std::string> args{"mc-volume", "--config", data("two_disks.json"), "--samples", "5000",
                                      "--seed", "7"};
  CHECK(run(args).out == run(args).out);
  std::vector<std::string> other = args;
  other.back() = "8";
  CHECK(run(args).out != run(other).out);
}

TEST_CASE("--out writes artifacts and a manifest") {
  const fs::path dir = fs::temp_directory_path() / "kp_cli_test_out";
  fs::remove_all(dir);
  const Run r = run({"scenario", "bern", "--grid", "101", "--out", dir.string(), "--svg"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "scenario_bern.csv"));
  CHECK(fs::exists(dir / "bern_traces.csv"));
  CHECK(fs::exists(dir / "bern_t0.svg"));
  CHECK(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}
