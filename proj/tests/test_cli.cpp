// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end tests of the installed CLI binary: spawns `exstat` with real
// argument vectors, captures stdout/stderr, and checks rows, exit codes,
// reproducibility, config-file precedence and the published JSON schema.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifndef EXSTAT_CLI_PATH
#error "EXSTAT_CLI_PATH must point at the exstat binary"
#endif
#ifndef EXSTAT_SCHEMA_PATH
#error "EXSTAT_SCHEMA_PATH must point at schemas/output.schema.json"
#endif

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "exstat_cli_test";
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;

  const std::string cmd = std::string(EXSTAT_CLI_PATH) + " " + args + " >" +
                          out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

struct Csv {
  std::map<std::string, std::string> header_comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  double value(std::size_t row, const std::string& column) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == column) {
        return std::stod(rows[row][c]);
      }
    }
    throw std::runtime_error("no column " + column);
  }
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(2, eq - 3);
        std::string value = line.substr(eq + 2);
        csv.header_comments[key] = value;
      }
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      cells.push_back(cell);
    }
    if (!have_header) {
      csv.columns = cells;
      have_header = true;
    } else {
      csv.rows.push_back(cells);
    }
  }
  return csv;
}

// Minimal checker for the subset of JSON Schema used by the published
// schema file: type (incl. unions), required, properties, enum, minimum.
bool matches_type(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer() ||
                                 value.is_number_unsigned();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  return false;
}

void check_schema(const json& value, const json& schema,
                  const std::string& where) {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = matches_type(value, t.get<std::string>());
    } else {
      for (const auto& option : t) {
        ok = ok || matches_type(value, option.get<std::string>());
      }
    }
    INFO("schema type mismatch at ", where);
    CHECK(ok);
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& option : schema["enum"]) {
      ok = ok || (value == option);
    }
    INFO("enum mismatch at ", where);
    CHECK(ok);
  }
  if (schema.contains("minimum") && value.is_number()) {
    CHECK(value.get<double>() >= schema["minimum"].get<double>());
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"]) {
      INFO("missing required key ", key.get<std::string>(), " at ", where);
      CHECK(value.contains(key.get<std::string>()));
    }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items()) {
      if (value.contains(key)) {
        check_schema(value[key], sub, where + "/" + key);
      }
    }
  }
}

}  // namespace

TEST_CASE("volume: fermion Monte Carlo row matches the closed form") {
  const RunResult r = run_cli(
      "volume --statistics fermion --two-j 2 --n 2 --samples 20000 --seed 42 "
      "--workers 2");
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 1);
  CHECK(csv.value(0, "volume_closed_h_pow_n") == doctest::Approx(0.5));
  const double mean = csv.value(0, "mc_mean_h_pow_n");
  const double se = csv.value(0, "mc_std_error_h_pow_n");
  CHECK(std::abs(mean - 0.5) < 3.0 * se);
  CHECK(csv.header_comments.at("command") == "volume");
  CHECK(csv.header_comments.at("seed") == "42");
}

TEST_CASE("volume: closed-form table over a particle-number range") {
  const RunResult r =
      run_cli("volume --statistics fermion --two-j 2 --n 1 --n-max 3");
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 3);
  CHECK(csv.value(0, "volume_closed_h_pow_n") == doctest::Approx(2.0));
  CHECK(csv.value(1, "volume_closed_h_pow_n") == doctest::Approx(0.5));
  CHECK(csv.value(2, "volume_closed_h_pow_n") == 0.0);  // filled level
}

TEST_CASE("thermo: ideal-gas equation of state") {
  const RunResult r = run_cli("thermo --alpha 0 --n 5 --area 20 --beta 1");
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 1);
  const double beta_p_h = csv.value(0, "beta_pressure_h");
  const double area = csv.value(0, "area_h");
  CHECK(beta_p_h * area / 5.0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exclusion-limit: the convergence table collapses by 100x") {
  const RunResult r = run_cli("exclusion-limit --rho-alpha 0.5 --steps 10");
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 11);
  const double first = csv.value(0, "relative_gap");
  const double last = csv.value(10, "relative_gap");
  CHECK(last < first / 100.0);
}

TEST_CASE("occupation: Fermi-Dirac midpoint") {
  const RunResult r = run_cli("occupation --g 1 --beta 1 --mu 0 --e-steps 5");
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 5);
  CHECK(csv.value(2, "occupation") == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("dynamics: latitude run conserves the potential") {
  const RunResult r = run_cli(
      "dynamics --two-j 4 --z 0.5,0.2 --potential latitude --lambda 0.8 "
      "--t-end 3 --tolerance 1e-9 --stride 5");
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() >= 2);
  const double v0 = csv.value(0, "potential");
  const double budget = std::stod(csv.header_comments.at("drift_budget"));
  for (std::size_t k = 0; k < csv.rows.size(); ++k) {
    CHECK(std::abs(csv.value(k, "potential") - v0) <= budget);
  }
}

TEST_CASE("geometry: JSON payload with the worked determinant") {
  const RunResult r =
      run_cli("geometry --two-j 2 --statistics fermion --z 0,0 --z 1,0");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["results"]["kahler_potential_hbar"].get<double>() ==
        doctest::Approx(std::log(3.0)));
  CHECK(doc["results"]["metric_analytic_hbar"][0][0][0].get<double>() ==
        doctest::Approx(8.0 / 9.0));
}

TEST_CASE("JSON output validates against the published schema") {
  const json schema = json::parse(slurp(EXSTAT_SCHEMA_PATH));
  for (const char* args :
       {"volume --statistics boson --two-j 2 --n 2 --format json",
        "thermo --n 2 --area 10 --alpha 0.5 --beta 1 --format json",
        "occupation --g 0.5 --format json",
        "geometry --two-j 1 --z 0.2,0.1"}) {
    const RunResult r = run_cli(args);
    REQUIRE(r.exit_code == 0);
    check_schema(json::parse(r.out), schema, args);
  }
}

TEST_CASE("byte-identical reruns") {
  const std::string cmd =
      "volume --statistics boson --two-j 4 --n 2 --samples 10000 --seed 7 "
      "--workers 3";
  const RunResult a = run_cli(cmd);
  const RunResult b = run_cli(cmd);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("config file with command-line precedence") {
  const fs::path dir = fs::temp_directory_path() / "exstat_cli_test";
  fs::create_directories(dir);
  const fs::path cfg = dir / "volume.cfg";
  {
    std::ofstream out(cfg);
    out << "# closed-form fermion table\n"
        << "statistics = fermion\n"
        << "two-j = 2\n"
        << "n = 2\n";
  }
  const RunResult file_only = run_cli("volume --config " + cfg.string());
  REQUIRE(file_only.exit_code == 0);
  CHECK(parse_csv(file_only.out).value(0, "volume_closed_h_pow_n") ==
        doctest::Approx(0.5));

  const RunResult overridden =
      run_cli("volume --config " + cfg.string() + " --n 1");
  REQUIRE(overridden.exit_code == 0);
  CHECK(parse_csv(overridden.out).value(0, "volume_closed_h_pow_n") ==
        doctest::Approx(2.0));  // flag wins over the file

  const fs::path bad = dir / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "two-j = 2\nn = 1\nfrobnicate = 3\n";
  }
  const RunResult rejected = run_cli("volume --config " + bad.string());
  CHECK(rejected.exit_code == 2);
  CHECK(rejected.err.find("frobnicate") != std::string::npos);
}

TEST_CASE("exit codes and error objects") {
  SUBCASE("unknown flag is named") {
    const RunResult r = run_cli("volume --two-j 2 --n 1 --frobnicate 3");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("frobnicate") != std::string::npos);
  }

  SUBCASE("numerical failure carries the module error name") {
    const RunResult r = run_cli("thermo --n 5 --area 2 --alpha 1 --beta 1");
    CHECK(r.exit_code == 3);
    const json err = json::parse(r.err);
    CHECK(err["error"]["name"] == "DensityAboveMax");
  }

  SUBCASE("validation failure") {
    const RunResult r = run_cli(
        "volume --statistics anyon --nu 0.5 --two-j 2 --n 2 --samples 10000");
    CHECK(r.exit_code == 2);
    const json err = json::parse(r.err);
    CHECK(err["error"]["name"] == "InvalidArgument");
  }
}

TEST_CASE("environment default for workers") {
  const std::string cmd = std::string("EXSTAT_THREADS=3 ") + EXSTAT_CLI_PATH +
                          " volume --statistics boson --two-j 2 --n 1 "
                          "--samples 10000 --seed 1";
  const fs::path dir = fs::temp_directory_path() / "exstat_cli_test";
  fs::create_directories(dir);
  const fs::path out = dir / "env_out.txt";
  const int status =
      std::system((cmd + " >" + out.string() + " 2>/dev/null").c_str());
  REQUIRE(WIFEXITED(status));
  REQUIRE(WEXITSTATUS(status) == 0);
  const Csv csv = parse_csv(slurp(out));
  CHECK(csv.value(0, "workers") == 3.0);
}
