#include "commands.hpp"

#include "dicke/csv.hpp"
#include "dicke/demkov.hpp"
#include "dicke/errors.hpp"
#include "dicke/parallel.hpp"
#include "dicke/spectrum.hpp"
#include "dicke/version.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace dicke::cli {

namespace {

void write_preamble(CsvWriter& csv, const std::string& command, const RunConfig& config) {
  csv.comment("dicke " + std::string(kVersion) + " " + command);
  csv.comment("config: " + to_json(config).dump());
}

const std::vector<double>& require_grid(const GridSpec& grid) {
  if (grid.values.empty()) throw ValidationError("empty sweep");
  return grid.values;
}

unsigned workers_for(const RunConfig& config, const CommandOptions& options) {
  return options.workers.value_or(config.workers);
}

std::string report_line(const ConditionReport& r) {
  std::string text = r.to_text();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return "conditions:\n" + text;
}

void write_atomically(const std::filesystem::path& target,
                      const std::function<void(std::ostream&)>& body) {
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    try {
      body(out);
    } catch (...) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw;
    }
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename " + tmp.string() + " to " + target.string());
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectrum", "gap",      "evolve",
                                                 "demkov",   "protocol", "sweep"};
  return names;
}

std::vector<std::string> output_files(const std::string& command) {
  if (command == "demkov") return {"demkov.csv", "demkov_final.csv"};
  return {command + ".csv"};
}

void write_spectrum(std::ostream& out, const RunConfig& config, unsigned workers) {
  const auto& grid = require_grid(config.spectrum.omega_x);
  const int k = config.spectrum.levels;
  const auto rows = spectrum_scan(config.physics, grid, k, config.fock, workers);
  CsvWriter csv(out);
  write_preamble(csv, "spectrum", config);
  std::vector<std::string> columns = {"omega_x"};
  for (int i = 0; i < k; ++i) columns.push_back("E" + std::to_string(i));
  columns.push_back("gap");
  columns.push_back("next_gap");
  for (int i = 0; i < k; ++i) columns.push_back("parity" + std::to_string(i));
  csv.header(columns);
  for (const SpectrumRow& r : rows) {
    std::vector<double> values = {r.omega_x};
    values.insert(values.end(), r.energies.begin(), r.energies.end());
    values.push_back(r.gap);
    values.push_back(r.next_gap);
    values.insert(values.end(), r.parities.begin(), r.parities.end());
    csv.row(values);
  }
}

void write_gap(std::ostream& out, const RunConfig& config, unsigned workers) {
  const std::vector<double> n_grid =
      config.gap.n_atoms ? require_grid(*config.gap.n_atoms)
                         : std::vector<double>{static_cast<double>(config.physics.n_atoms)};
  const std::vector<double> omega_grid =
      config.gap.omega ? require_grid(*config.gap.omega) : std::vector<double>{config.physics.omega};
  const std::vector<double> field_grid = config.gap.omega_x ? require_grid(*config.gap.omega_x)
                                                            : std::vector<double>{config.physics.omega_x};
  std::vector<DickeParams> points;
  for (double omega : omega_grid) {
    for (double field : field_grid) {
      for (double n : n_grid) {
        if (std::round(n) != n || n < 1.0) {
          throw ValidationError("gap: N values must be positive integers");
        }
        DickeParams p = config.physics;
        p.n_atoms = static_cast<int>(n);
        p.omega = omega;
        p.omega_x = field;
        p.delta = 0.0;
        p.validate();
        points.push_back(p);
      }
    }
  }
  std::vector<std::vector<double>> rows(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    const DickeParams& p = points[i];
    const double numeric = gap_numeric(p, config.fock).gap;
    const double pert = gap_perturbative(p);
    const double asym = gap_asymptotic(p);
    const double rel = numeric > 0.0 ? std::abs(numeric - pert) / numeric
                                     : std::numeric_limits<double>::quiet_NaN();
    rows[i] = {static_cast<double>(p.n_atoms), p.omega, p.omega_x, numeric, pert, asym, rel};
  });
  CsvWriter csv(out);
  write_preamble(csv, "gap", config);
  csv.header({"n_atoms", "omega", "omega_x", "gap_numeric", "gap_perturbative", "gap_asymptotic",
              "rel_error"});
  for (const auto& r : rows) csv.row(r);
}

void write_evolve(std::ostream& out, const RunConfig& config) {
  ProtocolConfig pc = config.protocol_config();
  pc.engine = Engine::full_simulation;
  const ProtocolResult r = run_protocol(
      pc, config.enforce_conditions ? ConditionPolicy::enforce : ConditionPolicy::warn);
  CsvWriter csv(out);
  write_preamble(csv, "evolve", config);
  csv.comment(report_line(r.resolved.report));
  const RampSchedule& s = r.resolved.schedule;
  csv.comment("schedule: tau1=" + format_double(s.tau1) + " t_i=" + format_double(s.t_i) +
              " omega_x_i=" + format_double(s.omega_x_i) + " tau2=" + format_double(s.tau2) +
              " t_f=" + format_double(s.t_f) +
              " fock_cutoff=" + std::to_string(r.resolved.fock_cutoff));
  write_evolution(csv, *r.evolution);
}

double write_demkov(std::ostream& trajectories, std::ostream& finals, const RunConfig& config,
                    unsigned workers) {
  const DemkovSection& d = config.demkov;
  const auto& xs = require_grid(d.x);
  const auto& ratios = require_grid(d.ratio);
  const std::vector<double> times =
      uniform_samples(0.0, d.t_end_gamma / d.gamma, d.samples);

  struct Case {
    DemkovParams params;
    double x;
    double ratio;
    std::vector<std::vector<double>> rows;
    std::vector<double> final_row;
    double max_diff = 0.0;
  };
  std::vector<Case> cases;
  for (double x : xs) {
    for (double ratio : ratios) {
      if (!(x > 0.0)) throw ValidationError("demkov: x values must be positive");
      Case c;
      c.params = DemkovParams{2.0 * d.gamma * x, d.gamma, d.n_atoms, ratio * d.gamma / d.n_atoms};
      c.x = x;
      c.ratio = ratio;
      cases.push_back(std::move(c));
    }
  }
  parallel_for(cases.size(), workers, [&](std::size_t i) {
    Case& c = cases[i];
    const auto analytic = amplitude_cplus(c.params, times);
    const TwoLevelTrajectory ode = two_level_ode_reference(c.params, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double diff = std::abs(analytic[k] - ode.c_plus[k]);
      c.max_diff = std::max(c.max_diff, diff);
      c.rows.push_back({c.x, c.ratio, d.gamma * times[k], analytic[k].real(), analytic[k].imag(),
                        ode.c_plus[k].real(), ode.c_plus[k].imag(), diff, std::norm(analytic[k]),
                        std::norm(ode.c_plus[k])});
    }
    const double tanh_population = 0.5 - 0.5 * std::tanh(c.params.phase());
    c.final_row = {c.x, c.ratio, final_population(c.params), std::norm(ode.c_plus.back()),
                   tanh_population};
  });

  CsvWriter traj(trajectories);
  write_preamble(traj, "demkov", config);
  traj.header({"x", "ratio", "gamma_t", "re_cplus_analytic", "im_cplus_analytic", "re_cplus_ode",
               "im_cplus_ode", "abs_diff", "population_analytic", "population_ode"});
  CsvWriter fin(finals);
  write_preamble(fin, "demkov", config);
  fin.header({"x", "ratio", "final_population", "population_ode_end", "population_tanh"});
  double max_diff = 0.0;
  std::size_t points = 0;
  for (const Case& c : cases) {
    for (const auto& row : c.rows) traj.row(row);
    fin.row(c.final_row);
    max_diff = std::max(max_diff, c.max_diff);
    points += c.rows.size();
  }
  traj.comment("summary: max_abs_diff=" + format_double(max_diff) +
               " points=" + std::to_string(points));
  return max_diff;
}

bool write_protocol(std::ostream& out, const RunConfig& config, const CommandOptions& options,
                    bool require_sweep) {
  if (require_sweep && !config.sweep) {
    throw ValidationError("sweep: the config has no 'sweep' section");
  }
  ProtocolConfig pc = config.protocol_config();
  SweepParameter parameter = SweepParameter::delta;
  std::vector<double> grid = {config.physics.delta};
  if (config.sweep) {
    parameter = config.sweep->parameter;
    grid = require_grid(config.sweep->grid);
  }
  SweepOptions so;
  so.workers = workers_for(config, options);
  if (options.engine) {
    so.run_full = *options.engine == Engine::full_simulation;
    so.run_demkov = *options.engine == Engine::demkov_analytic;
  }
  if (config.enforce_conditions) {
    const ConditionReport report = check_conditions(pc);
    if (!config.sweep && !report.all_ok()) {
      throw ValidationError("protocol validity conditions not met:\n" + report.to_text());
    }
  }
  const SignalCurve curve = sweep(pc, parameter, grid, so);

  CsvWriter csv(out);
  write_preamble(csv, require_sweep ? "sweep" : "protocol", config);
  if (!config.sweep && curve.points.front().report) {
    csv.comment(report_line(*curve.points.front().report));
  }
  write_signal_curve(csv, curve);
  bool ok = true;
  for (const SignalPoint& p : curve.points) ok = ok && p.error.empty();
  return ok;
}

int run_command(const std::string& command, const RunConfig& config,
                const CommandOptions& options) {
  const unsigned workers = workers_for(config, options);
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec || !std::filesystem::is_directory(options.out_dir)) {
    throw IoError("cannot create output directory " + options.out_dir.string());
  }
  const auto target = [&](const std::string& name) { return options.out_dir / name; };

  if (command == "spectrum") {
    write_atomically(target("spectrum.csv"),
                     [&](std::ostream& out) { write_spectrum(out, config, workers); });
  } else if (command == "gap") {
    write_atomically(target("gap.csv"), [&](std::ostream& out) { write_gap(out, config, workers); });
  } else if (command == "evolve") {
    if (options.engine && *options.engine != Engine::full_simulation) {
      throw ValidationError("evolve: only the full engine produces trajectories");
    }
    write_atomically(target("evolve.csv"), [&](std::ostream& out) { write_evolve(out, config); });
  } else if (command == "demkov") {
    // Both tables come from one computation; render them in memory first.
    std::ostringstream traj;
    std::ostringstream fin;
    write_demkov(traj, fin, config, workers);
    write_atomically(target("demkov.csv"), [&](std::ostream& out) { out << traj.str(); });
    write_atomically(target("demkov_final.csv"), [&](std::ostream& out) { out << fin.str(); });
  } else if (command == "protocol" || command == "sweep") {
    bool ok = true;
    write_atomically(target(command + ".csv"), [&](std::ostream& out) {
      ok = write_protocol(out, config, options, command == "sweep");
    });
    return ok ? kExitOk : kExitPhysics;
  } else {
    throw ValidationError("unknown command '" + command + "'");
  }
  return kExitOk;
}

int report_exception(std::ostream& err) {
  try {
    throw;
  } catch (const IoError& e) {
    err << "dicke: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "dicke: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "dicke: invalid input: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const NumericalError& e) {
    err << "dicke: numerical failure: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::exception& e) {
    err << "dicke: error: " << e.what() << "\n";
    return kExitPhysics;
  }
}

}  // namespace dicke::cli
