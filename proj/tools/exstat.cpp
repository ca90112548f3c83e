// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Every subcommand echoes its fully resolved
// configuration in the output header, writes CSV (RFC 4180, `#` comment
// header) or JSON ({config, results, provenance}), and exits with
//   0 success / 2 validation error / 3 numerical failure,
// the failure name reported verbatim as a JSON object on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "exstat/dynamics.hpp"
#include "exstat/errors.hpp"
#include "exstat/exclusion.hpp"
#include "exstat/geometry.hpp"
#include "exstat/thermo.hpp"
#include "exstat/types.hpp"
#include "exstat/version.hpp"
#include "exstat/volume.hpp"

namespace {

using ojson = nlohmann::ordered_json;
using exstat::Complex;

using ConfigEcho = std::vector<std::pair<std::string, ojson>>;

// ---------------------------------------------------------------------------
// output plumbing

std::string csv_field(const ojson& cell) {
  if (!cell.is_string()) {
    return cell.dump();
  }
  const std::string s = cell.get<std::string>();
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    return s;
  }
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') {
      quoted += "\"\"";
    } else {
      quoted += c;
    }
  }
  quoted += "\"";
  return quoted;
}

void write_csv(std::ostream& out, const ConfigEcho& config,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<ojson>>& rows) {
  for (const auto& [key, value] : config) {
    out << "# " << key << " = "
        << (value.is_string() ? value.get<std::string>() : value.dump())
        << "\n";
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << (c ? "," : "") << csv_field(ojson(columns[c]));
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << csv_field(row[c]);
    }
    out << "\n";
  }
}

ojson provenance(std::uint64_t seed, int workers) {
  ojson p;
  p["library_version"] = exstat::kVersion;
  p["seed"] = seed;
  p["workers"] = workers;
  return p;
}

void write_json_doc(std::ostream& out, const ConfigEcho& config,
                    ojson results, std::uint64_t seed, int workers) {
  ojson doc;
  ojson cfg;
  for (const auto& [key, value] : config) {
    cfg[key] = value;
  }
  doc["config"] = std::move(cfg);
  doc["results"] = std::move(results);
  doc["provenance"] = provenance(seed, workers);
  out << doc.dump(2) << "\n";
}

ojson rows_to_json(const std::vector<std::string>& columns,
                   const std::vector<std::vector<ojson>>& rows) {
  ojson arr = ojson::array();
  for (const auto& row : rows) {
    ojson obj;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      obj[columns[c]] = row[c];
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) {
        throw std::invalid_argument("cannot open output file: " + path);
      }
    }
  }

  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// ---------------------------------------------------------------------------
// shared option helpers

Complex parse_complex(const std::string& text) {
  double re = 0.0, im = 0.0;
  char tail = 0;
  const int got = std::sscanf(text.c_str(), "%lf,%lf%c", &re, &im, &tail);
  if (got != 2) {
    throw std::invalid_argument("coordinate '" + text +
                                "' is not of the form re,im");
  }
  return Complex(re, im);
}

std::vector<Complex> parse_coords(const std::vector<std::string>& texts) {
  std::vector<Complex> zs;
  zs.reserve(texts.size());
  for (const auto& t : texts) {
    zs.push_back(parse_complex(t));
  }
  return zs;
}

exstat::StatisticsKind parse_statistics(const std::string& name, double nu,
                                        double g) {
  if (name == "boson") return exstat::StatisticsKind::boson();
  if (name == "fermion") return exstat::StatisticsKind::fermion();
  if (name == "anyon") return exstat::StatisticsKind::anyon(nu);
  if (name == "exclusion") return exstat::StatisticsKind::exclusion_g(g);
  throw std::invalid_argument("unknown statistics: " + name);
}

ojson complex_pair(const Complex& z) {
  return ojson::array({z.real(), z.imag()});
}

ojson matrix_json(const Eigen::MatrixXcd& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(complex_pair(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------
// subcommands

struct GeometryOptions {
  int two_j = 0;
  std::string statistics = "boson";
  std::vector<std::string> coords;
  double fd_step = 1e-4;
  std::string output;
};

void run_geometry(const GeometryOptions& opt) {
  const exstat::FluxSector flux(opt.two_j);
  const exstat::StatisticsKind kind = parse_statistics(opt.statistics, 0, 0);
  const exstat::ParticleConfig config(parse_coords(opt.coords));

  ConfigEcho echo{
      {"command", "geometry"},
      {"two_j", opt.two_j},
      {"statistics", opt.statistics},
      {"z", ojson(opt.coords)},
      {"fd_step", opt.fd_step},
      {"output_format", "json"},
  };

  const double k = exstat::kahler_potential(config, flux, kind);
  const auto connection = exstat::berry_connection(config, flux, kind);
  const exstat::KahlerMetric analytic =
      exstat::metric(config, flux, kind, exstat::MetricMethod::Analytic);
  const exstat::KahlerMetric fd =
      exstat::metric(config, flux, kind, exstat::MetricMethod::FiniteDifference,
                     opt.fd_step);

  ojson results;
  results["n"] = config.size();
  results["kahler_potential_hbar"] = k;
  results["log_norm"] = exstat::log_norm(exstat::gram_matrix(config, flux),
                                         kind);
  results["single_particle_area_h"] =
      exstat::single_particle_area(flux) / flux.h();
  ojson conn = ojson::array();
  for (const Complex& a : connection) {
    conn.push_back(complex_pair(a));
  }
  results["berry_connection_hbar"] = std::move(conn);
  results["metric_analytic_hbar"] = matrix_json(analytic.g);
  results["metric_finite_difference_hbar"] = matrix_json(fd.g);

  OutputSink sink(opt.output);
  write_json_doc(sink.stream(), echo, std::move(results), 0, 1);
}

struct VolumeOptions {
  std::string statistics = "boson";
  double nu = 0.0;
  double g = 0.0;
  int two_j = 0;
  int n = 1;
  int n_max = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string format = "csv";
  std::string output;
};

void run_volume(const VolumeOptions& opt) {
  const exstat::FluxSector flux(opt.two_j);
  const exstat::StatisticsKind kind =
      parse_statistics(opt.statistics, opt.nu, opt.g);
  const int n_hi = opt.n_max > 0 ? opt.n_max : opt.n;
  if (n_hi < opt.n) {
    throw std::invalid_argument("--n-max must be >= --n");
  }
  const int workers = opt.workers > 0 ? opt.workers : default_workers();
  const bool with_mc = opt.samples > 0;
  if (with_mc && !kind.is_bosonic() && !kind.is_fermionic()) {
    throw std::invalid_argument(
        "Monte Carlo sampling supports boson and fermion statistics only; "
        "drop --samples for closed forms");
  }

  ConfigEcho echo{
      {"command", "volume"},
      {"statistics", opt.statistics},
      {"nu", opt.nu},
      {"g", opt.g},
      {"two_j", opt.two_j},
      {"n", opt.n},
      {"n_max", n_hi},
      {"samples", opt.samples},
      {"seed", opt.seed},
      {"workers", workers},
      {"output_format", opt.format},
  };

  std::vector<std::string> columns{
      "statistics", "n",       "two_j",
      "area_h",     "alpha_h", "volume_closed_h_pow_n",
  };
  if (with_mc) {
    for (const char* c : {"mc_mean_h_pow_n", "mc_std_error_h_pow_n",
                          "sigma_deviation", "samples", "seed", "workers"}) {
      columns.push_back(c);
    }
  }

  std::vector<std::vector<ojson>> rows;
  for (int n = opt.n; n <= n_hi; ++n) {
    const double closed = exstat::closed_form_volume(n, flux, kind);
    std::vector<ojson> row{
        kind.label(), n, opt.two_j, static_cast<double>(opt.two_j),
        kind.alpha(1.0), closed,
    };
    if (with_mc) {
      const exstat::VolumeEstimate est =
          exstat::mc_volume(n, flux, kind, opt.samples, opt.seed, workers);
      // The sigma floor guards the zero-variance N = 1 estimator.
      const double floor = 1e-12 * std::max(std::abs(closed), 1.0);
      const double sigma =
          (est.mean - closed) / std::max(est.std_error, floor);
      row.insert(row.end(), {est.mean, est.std_error, sigma,
                             est.samples, est.seed, est.n_workers});
    }
    rows.push_back(std::move(row));
  }

  OutputSink sink(opt.output);
  if (opt.format == "json") {
    write_json_doc(sink.stream(), echo, rows_to_json(columns, rows),
                   opt.seed, workers);
  } else {
    write_csv(sink.stream(), echo, columns, rows);
  }
}

struct ThermoOptions {
  std::vector<int> n{1};
  std::vector<double> area{1.0};
  std::vector<double> alpha{0.0};
  std::vector<double> beta{1.0};
  double energy_per_particle = 0.0;
  std::string format = "csv";
  std::string output;
};

void run_thermo(const ThermoOptions& opt) {
  ConfigEcho echo{
      {"command", "thermo"},
      {"n", ojson(opt.n)},
      {"area", ojson(opt.area)},
      {"alpha", ojson(opt.alpha)},
      {"beta", ojson(opt.beta)},
      {"energy_per_particle", opt.energy_per_particle},
      {"output_format", opt.format},
  };

  const std::vector<std::string> columns{
      "n",     "area_h",          "alpha_h",
      "beta",  "rho_per_h",       "alpha_rho",
      "log_z", "entropy_closed",  "entropy_exact",
      "beta_pressure_h",
  };

  std::vector<std::vector<ojson>> rows;
  for (const int n : opt.n) {
    for (const double area : opt.area) {
      for (const double alpha : opt.alpha) {
        for (const double beta : opt.beta) {
          exstat::ThermoInput in;
          in.n = n;
          in.area_h = area;
          in.alpha_h = alpha;
          in.beta = beta;
          in.energy_per_particle = opt.energy_per_particle;
          const double rho = in.rho_h();
          const double pressure = exstat::equation_of_state(rho, alpha, beta);
          rows.push_back({n, area, alpha, beta, rho, alpha * rho,
                          exstat::log_partition_function(in).log_value,
                          exstat::entropy_closed(in),
                          exstat::entropy_exact(in), beta * pressure});
        }
      }
    }
  }

  OutputSink sink(opt.output);
  if (opt.format == "json") {
    write_json_doc(sink.stream(), echo, rows_to_json(columns, rows), 0, 1);
  } else {
    write_csv(sink.stream(), echo, columns, rows);
  }
}

struct ExclusionLimitOptions {
  double rho = 1.0;
  double alpha = -1.0;
  double rho_alpha = -1.0;
  double h0 = 0.0;
  int steps = 10;
  int dim = 1;
  double factor = 0.5;
  std::string format = "csv";
  std::string output;
};

void run_exclusion_limit(const ExclusionLimitOptions& opt) {
  double rho = opt.rho;
  double alpha = opt.alpha;
  if (opt.rho_alpha >= 0.0) {
    if (opt.alpha >= 0.0) {
      throw std::invalid_argument("--rho-alpha and --alpha are exclusive");
    }
    rho = 1.0;
    alpha = opt.rho_alpha;
  } else if (alpha < 0.0) {
    throw std::invalid_argument("need --alpha or --rho-alpha");
  }
  if (opt.steps < 1) {
    throw std::invalid_argument("--steps must be >= 1");
  }
  if (!(opt.factor > 0.0 && opt.factor < 1.0)) {
    throw std::invalid_argument("--factor must be in (0, 1)");
  }
  const double h0 = opt.h0 > 0.0 ? opt.h0 : 0.1 / rho;

  std::vector<double> h_seq;
  for (int k = 0; k <= opt.steps; ++k) {
    h_seq.push_back(h0 * std::pow(opt.factor, k));
  }
  const auto points =
      exstat::limit_convergence_study(rho, alpha, h_seq, opt.dim);

  ConfigEcho echo{
      {"command", "exclusion-limit"},
      {"rho", rho},
      {"alpha", alpha},
      {"h0", h0},
      {"steps", opt.steps},
      {"dim", opt.dim},
      {"factor", opt.factor},
      {"output_format", opt.format},
  };

  const std::vector<std::string> columns{
      "step", "h", "g", "occupation",
      "exclusion_entropy", "classical_entropy", "relative_gap",
  };
  std::vector<std::vector<ojson>> rows;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double cell = std::pow(points[k].h, opt.dim);
    rows.push_back({static_cast<int>(k), points[k].h, alpha / cell,
                    rho * cell, points[k].quantum_entropy,
                    points[k].classical_entropy, points[k].relative_gap});
  }

  OutputSink sink(opt.output);
  if (opt.format == "json") {
    write_json_doc(sink.stream(), echo, rows_to_json(columns, rows), 0, 1);
  } else {
    write_csv(sink.stream(), echo, columns, rows);
  }
}

struct OccupationOptions {
  double g = 0.0;
  double beta = 1.0;
  double mu = 0.0;
  double e_min = -5.0;
  double e_max = 5.0;
  int e_steps = 41;
  std::vector<double> energies;
  std::string format = "csv";
  std::string output;
};

void run_occupation(const OccupationOptions& opt) {
  std::vector<std::pair<double, double>> levels;
  if (!opt.energies.empty()) {
    for (const double e : opt.energies) {
      levels.emplace_back(1.0, e);
    }
  } else {
    if (opt.e_steps < 2 || !(opt.e_max > opt.e_min)) {
      throw std::invalid_argument("need e_max > e_min and e_steps >= 2");
    }
    for (int k = 0; k < opt.e_steps; ++k) {
      levels.emplace_back(
          1.0, opt.e_min + (opt.e_max - opt.e_min) * k / (opt.e_steps - 1));
    }
  }

  const auto ns =
      exstat::equilibrium_occupation(opt.g, opt.beta, opt.mu, levels);

  ConfigEcho echo{
      {"command", "occupation"},
      {"g", opt.g},
      {"beta", opt.beta},
      {"mu", opt.mu},
      {"levels", static_cast<int>(levels.size())},
      {"output_format", opt.format},
  };

  const std::vector<std::string> columns{"energy", "beta_e_minus_mu",
                                         "occupation"};
  std::vector<std::vector<ojson>> rows;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    rows.push_back({levels[k].second,
                    opt.beta * (levels[k].second - opt.mu), ns[k]});
  }

  OutputSink sink(opt.output);
  if (opt.format == "json") {
    write_json_doc(sink.stream(), echo, rows_to_json(columns, rows), 0, 1);
  } else {
    write_csv(sink.stream(), echo, columns, rows);
  }
}

struct DynamicsOptions {
  int two_j = 0;
  std::string statistics = "boson";
  std::vector<std::string> coords;
  std::string potential = "latitude";
  double lambda = 1.0;
  double coupling = 1.0;
  double exponent = 1.0;
  double t_end = 1.0;
  double tolerance = 1e-8;
  int stride = 1;
  std::string format = "csv";
  std::string output;
};

void run_dynamics(const DynamicsOptions& opt) {
  const exstat::FluxSector flux(opt.two_j);
  const exstat::StatisticsKind kind = parse_statistics(opt.statistics, 0, 0);
  const exstat::ParticleConfig initial(parse_coords(opt.coords));
  if (opt.stride < 1) {
    throw std::invalid_argument("--stride must be >= 1");
  }

  exstat::Potential potential = exstat::Potential::zero();
  if (opt.potential == "latitude") {
    potential = exstat::Potential::latitude(opt.lambda);
  } else if (opt.potential == "pairwise") {
    potential = exstat::Potential::pairwise_chordal(opt.coupling, opt.exponent);
  } else if (opt.potential != "zero") {
    throw std::invalid_argument("unknown potential: " + opt.potential);
  }

  const exstat::Trajectory traj =
      exstat::integrate(initial, flux, kind, potential, opt.t_end,
                        opt.tolerance);

  ConfigEcho echo{
      {"command", "dynamics"},
      {"two_j", opt.two_j},
      {"statistics", opt.statistics},
      {"z", ojson(opt.coords)},
      {"potential", opt.potential},
      {"lambda", opt.lambda},
      {"coupling", opt.coupling},
      {"exponent", opt.exponent},
      {"t_end", opt.t_end},
      {"tolerance", opt.tolerance},
      {"stride", opt.stride},
      {"output_format", opt.format},
      {"invariant_drift", traj.invariant_drift},
      {"drift_budget", traj.drift_budget},
  };

  std::vector<std::string> columns{"t"};
  for (int i = 0; i < initial.size(); ++i) {
    columns.push_back("x_" + std::to_string(i));
    columns.push_back("y_" + std::to_string(i));
  }
  columns.push_back("potential");

  std::vector<std::vector<ojson>> rows;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const bool last = (k + 1 == traj.times.size());
    if (k % static_cast<std::size_t>(opt.stride) != 0 && !last) {
      continue;
    }
    std::vector<ojson> row{traj.times[k]};
    for (int i = 0; i < initial.size(); ++i) {
      row.push_back(traj.states[k][i].real());
      row.push_back(traj.states[k][i].imag());
    }
    row.push_back(traj.energies[k]);
    rows.push_back(std::move(row));
  }

  OutputSink sink(opt.output);
  if (opt.format == "json") {
    ojson results;
    results["samples"] = rows_to_json(columns, rows);
    results["invariant_drift"] = traj.invariant_drift;
    results["drift_budget"] = traj.drift_budget;
    write_json_doc(sink.stream(), echo, std::move(results), 0, 1);
  } else {
    write_csv(sink.stream(), echo, columns, rows);
  }
}

// ---------------------------------------------------------------------------

void add_format_options(CLI::App* cmd, std::string& format,
                        std::string& output) {
  cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("-o,--output", output, "Output file (default: stdout)");
}

void add_config_option(CLI::App* cmd, std::string& path) {
  cmd->add_option("--config", path,
                  "Read options from a plain key = value file (# comments); "
                  "command-line flags take precedence");
}

// Expands `--config FILE` into long options ahead of the command-line
// flags. Keys are the long option names without the leading `--`; a key
// already present on the command line is skipped (flags win); keys that
// match no option of the subcommand are rejected by name.
std::vector<std::string> expand_config_file(const CLI::App& sub,
                                            std::size_t sub_index,
                                            std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = sub_index + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      break;
    }
  }
  if (path.empty()) {
    return args;
  }

  std::ifstream file(path);
  if (!file) {
    throw std::invalid_argument("cannot read config file: " + path);
  }

  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };

  std::vector<std::string> expanded(args.begin(),
                                    args.begin() +
                                        static_cast<std::ptrdiff_t>(sub_index) +
                                        1);
  std::string line;
  while (std::getline(file, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config file line is not key = value: '" +
                                  line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config") {
      throw std::invalid_argument("config files cannot nest");
    }
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    if (opt == nullptr) {
      throw std::invalid_argument("unknown key in config file: " + key);
    }
    bool on_command_line = false;
    for (std::size_t i = sub_index + 1; i < args.size(); ++i) {
      if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) {
        on_command_line = true;
        break;
      }
    }
    if (on_command_line) {
      continue;
    }
    expanded.push_back(flag);
    std::istringstream tokens(value);
    std::string token;
    while (tokens >> token) {
      expanded.push_back(token);
    }
  }
  expanded.insert(expanded.end(),
                  args.begin() + static_cast<std::ptrdiff_t>(sub_index) + 1,
                  args.end());
  return expanded;
}

}  // namespace

int main(int argc, char** argv) {
  std::string config_path_sink;
  CLI::App app{"exstat: classical exclusion statistics on the flux sphere\n"
               "Units: areas and alpha in h, volumes in h^N, entropies "
               "dimensionless (hbar = 1, h = 2 pi)."};
  app.require_subcommand(1);

  GeometryOptions geo;
  auto* geometry = app.add_subcommand(
      "geometry", "Kahler potential, Berry connection and metric (JSON)");
  geometry->add_option("--two-j", geo.two_j, "Flux quanta 2j")
      ->required()
      ->check(CLI::NonNegativeNumber);
  geometry->add_option("--statistics", geo.statistics, "boson|fermion")
      ->check(CLI::IsMember({"boson", "fermion"}))
      ->capture_default_str();
  geometry
      ->add_option("--z", geo.coords,
                   "Particle coordinate re,im (repeatable)")
      ->required()
      ->expected(-1);
  geometry->add_option("--fd-step", geo.fd_step, "Finite-difference step")
      ->capture_default_str();
  geometry->add_option("-o,--output", geo.output,
                       "Output file (default: stdout)");
  add_config_option(geometry, config_path_sink);
  geometry->callback([&] { run_geometry(geo); });

  VolumeOptions vol;
  auto* volume = app.add_subcommand(
      "volume",
      "Closed-form phase-space volumes, optionally with Monte Carlo "
      "verification (volumes in h^N)");
  volume->add_option("--statistics", vol.statistics,
                     "boson|fermion|anyon|exclusion")
      ->check(CLI::IsMember({"boson", "fermion", "anyon", "exclusion"}))
      ->capture_default_str();
  volume->add_option("--nu", vol.nu, "Anyon statistics parameter")
      ->capture_default_str();
  volume->add_option("--g", vol.g, "Exclusion statistics parameter")
      ->capture_default_str();
  volume->add_option("--two-j", vol.two_j, "Flux quanta 2j")
      ->required()
      ->check(CLI::NonNegativeNumber);
  volume->add_option("--n", vol.n, "Particle number")
      ->required()
      ->check(CLI::PositiveNumber);
  volume->add_option("--n-max", vol.n_max,
                     "Emit one row per N in [--n, --n-max]");
  volume->add_option("--samples", vol.samples,
                     "Monte Carlo samples (0: closed form only)")
      ->capture_default_str();
  volume->add_option("--seed", vol.seed, "Monte Carlo seed")
      ->capture_default_str();
  volume->add_option("--workers", vol.workers,
                     "Monte Carlo worker threads (0: hardware)")
      ->envname("EXSTAT_THREADS")
      ->capture_default_str();
  add_format_options(volume, vol.format, vol.output);
  volume->footer(
      "Columns: statistics, n, two_j, area_h, alpha_h, "
      "volume_closed_h_pow_n[, mc_mean_h_pow_n, mc_std_error_h_pow_n, "
      "sigma_deviation, samples, seed, workers]");
  add_config_option(volume, config_path_sink);
  volume->callback([&] { run_volume(vol); });

  ThermoOptions thermo;
  auto* thermo_cmd = app.add_subcommand(
      "thermo",
      "Partition function, entropies and equation of state over a "
      "(N, A, alpha, beta) grid");
  thermo_cmd->add_option("--n", thermo.n, "Particle numbers")
      ->expected(-1)
      ->capture_default_str();
  thermo_cmd->add_option("--area", thermo.area, "Areas A (units h)")
      ->expected(-1)
      ->capture_default_str();
  thermo_cmd->add_option("--alpha", thermo.alpha, "Alphas (units h)")
      ->expected(-1)
      ->capture_default_str();
  thermo_cmd->add_option("--beta", thermo.beta, "Inverse temperatures")
      ->expected(-1)
      ->capture_default_str();
  thermo_cmd
      ->add_option("--energy-per-particle", thermo.energy_per_particle,
                   "Flat per-particle energy")
      ->capture_default_str();
  add_format_options(thermo_cmd, thermo.format, thermo.output);
  thermo_cmd->footer(
      "Columns: n, area_h, alpha_h, beta, rho_per_h, alpha_rho, log_z, "
      "entropy_closed, entropy_exact, beta_pressure_h");
  add_config_option(thermo_cmd, config_path_sink);
  thermo_cmd->callback([&] { run_thermo(thermo); });

  ExclusionLimitOptions excl;
  auto* exclusion = app.add_subcommand(
      "exclusion-limit",
      "Double-scaling convergence of the exclusion entropy toward its "
      "classical limit");
  exclusion->add_option("--rho", excl.rho, "Phase-space density")
      ->capture_default_str();
  exclusion->add_option("--alpha", excl.alpha,
                        "Classical statistics parameter");
  exclusion->add_option("--rho-alpha", excl.rho_alpha,
                        "Shortcut: rho = 1, alpha = value");
  exclusion->add_option("--h0", excl.h0, "Starting cell (default 0.1/rho)");
  exclusion->add_option("--steps", excl.steps, "Number of shrink steps")
      ->capture_default_str();
  exclusion->add_option("--dim", excl.dim, "Phase-space dimension parameter")
      ->capture_default_str();
  exclusion->add_option("--factor", excl.factor, "Shrink factor per step")
      ->capture_default_str();
  add_format_options(exclusion, excl.format, excl.output);
  exclusion->footer(
      "Columns: step, h, g, occupation, exclusion_entropy, "
      "classical_entropy, relative_gap");
  add_config_option(exclusion, config_path_sink);
  exclusion->callback([&] { run_exclusion_limit(excl); });

  OccupationOptions occ;
  auto* occupation = app.add_subcommand(
      "occupation",
      "Equilibrium occupations n(eps) for exclusion statistics g");
  occupation->add_option("--g", occ.g, "Exclusion parameter")->required();
  occupation->add_option("--beta", occ.beta, "Inverse temperature")
      ->capture_default_str();
  occupation->add_option("--mu", occ.mu, "Chemical potential")
      ->capture_default_str();
  occupation->add_option("--e-min", occ.e_min, "Lowest level energy")
      ->capture_default_str();
  occupation->add_option("--e-max", occ.e_max, "Highest level energy")
      ->capture_default_str();
  occupation->add_option("--e-steps", occ.e_steps, "Grid size")
      ->capture_default_str();
  occupation->add_option("--energy", occ.energies,
                         "Explicit level energies (overrides the grid)")
      ->expected(-1);
  add_format_options(occupation, occ.format, occ.output);
  occupation->footer(
      "Columns: energy, beta_e_minus_mu, occupation");
  add_config_option(occupation, config_path_sink);
  occupation->callback([&] { run_occupation(occ); });

  DynamicsOptions dyn;
  auto* dynamics = app.add_subcommand(
      "dynamics", "Trajectory integration on the constrained manifold");
  dynamics->add_option("--two-j", dyn.two_j, "Flux quanta 2j")
      ->required()
      ->check(CLI::NonNegativeNumber);
  dynamics->add_option("--statistics", dyn.statistics, "boson|fermion")
      ->check(CLI::IsMember({"boson", "fermion"}))
      ->capture_default_str();
  dynamics
      ->add_option("--z", dyn.coords, "Initial coordinate re,im (repeatable)")
      ->required()
      ->expected(-1);
  dynamics->add_option("--potential", dyn.potential,
                       "zero|latitude|pairwise")
      ->check(CLI::IsMember({"zero", "latitude", "pairwise"}))
      ->capture_default_str();
  dynamics->add_option("--lambda", dyn.lambda, "Latitude strength")
      ->capture_default_str();
  dynamics->add_option("--coupling", dyn.coupling, "Pairwise coupling")
      ->capture_default_str();
  dynamics->add_option("--exponent", dyn.exponent, "Pairwise exponent (>= 1)")
      ->capture_default_str();
  dynamics->add_option("--t-end", dyn.t_end, "Integration time")->required();
  dynamics->add_option("--tolerance", dyn.tolerance, "Integrator tolerance")
      ->capture_default_str();
  dynamics->add_option("--stride", dyn.stride, "Output every k-th step")
      ->capture_default_str();
  add_format_options(dynamics, dyn.format, dyn.output);
  dynamics->footer(
      "Columns: t, x_0, y_0, ..., x_{N-1}, y_{N-1}, potential");
  add_config_option(dynamics, config_path_sink);
  dynamics->callback([&] { run_dynamics(dyn); });

  try {
    std::vector<std::string> args(argv, argv + argc);
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (!args[i].empty() && args[i][0] != '-') {
        if (const auto subs = app.get_subcommands(
                [&](const CLI::App* s) { return s->get_name() == args[i]; });
            !subs.empty()) {
          args = expand_config_file(*subs.front(), i, std::move(args));
        }
        break;
      }
    }
    std::vector<const char*> cargs;
    cargs.reserve(args.size());
    for (const auto& a : args) {
      cargs.push_back(a.c_str());
    }
    app.parse(static_cast<int>(cargs.size()),
              const_cast<char**>(cargs.data()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const exstat::Error& e) {
    ojson err;
    err["error"]["name"] = e.name();
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    ojson err;
    err["error"]["name"] = "InvalidArgument";
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 0;
}
