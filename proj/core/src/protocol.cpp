#include "dicke/protocol.hpp"

#include "dicke/demkov.hpp"
#include "dicke/errors.hpp"
#include "dicke/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dicke {

namespace {

struct SwitchGap {
  double delta_i = 0.0;
  double next_gap = 0.0;
  bool perturbative = false;
  int fock_cutoff = 0;
};

SwitchGap gap_at_switch(const ProtocolConfig& config) {
  DickeParams at_switch = config.params;
  at_switch.omega_x = config.ramp.omega_x_i_ratio * critical_field(config.params);
  at_switch.delta = 0.0;
  SwitchGap out;
  try {
    const GapResult gap = gap_numeric(at_switch, config.fock);
    out.delta_i = gap.gap;
    out.next_gap = gap.next_gap;
    out.fock_cutoff = gap.fock_cutoff;
  } catch (const NumericalError&) {
    out.delta_i = gap_perturbative(at_switch);
    out.perturbative = true;
    out.fock_cutoff = config.fock.fixed_cutoff.value_or(default_fock_cutoff(at_switch));
  }
  return out;
}

ConditionReport make_report(const ProtocolConfig& config, const SwitchGap& gap, double tau1) {
  const DickeParams& p = config.params;
  ConditionReport r;
  r.delta_i = gap.delta_i;
  r.delta_i_perturbative = gap.perturbative;
  r.next_gap_i = gap.next_gap;
  r.next_gap_estimate = critical_field(p) * (1.0 - 1.0 / p.n_atoms);
  r.tau1 = tau1;
  r.gamma = config.ramp.gamma;
  r.margin = config.margin;
  r.preparation_ratio = gap.delta_i * tau1;
  const double bias = p.n_atoms * std::abs(p.delta);
  r.bias_ratio = bias == 0.0 ? std::numeric_limits<double>::infinity() : gap.delta_i / bias;
  r.nonadiabatic_ratio = r.next_gap_estimate / r.gamma;
  r.nonadiabatic_ratio_numeric = r.next_gap_i / r.gamma;
  r.preparation_ok = r.preparation_ratio >= config.margin;
  r.bias_ok = r.bias_ratio >= config.margin;
  r.nonadiabatic_ok = r.nonadiabatic_ratio >= config.margin;
  return r;
}

double tau1_for(const ProtocolConfig& config, double delta_i) {
  if (config.ramp.tau1) return *config.ramp.tau1;
  if (!(delta_i > 0.0)) {
    throw NumericalError("protocol: gap at the switch field vanishes; set tau1 explicitly");
  }
  return config.ramp.tau1_gap_factor / delta_i;
}

// Field at which the numeric gap (fixed cutoff) drops to `target`.
double field_for_gap(const DickeParams& params, double omega_x_i, double target, int cutoff) {
  FockCutoffPolicy fixed;
  fixed.fixed_cutoff = cutoff;
  auto gap_at = [&](double omega_x) {
    DickeParams p = params;
    p.omega_x = omega_x;
    p.delta = 0.0;
    return gap_numeric(p, fixed).gap;
  };
  if (gap_at(omega_x_i) <= target) return omega_x_i;
  double hi = omega_x_i;
  double lo = omega_x_i / 2.0;
  while (gap_at(lo) > target) {
    hi = lo;
    lo /= 2.0;
    if (lo < 1e-12 * omega_x_i) {
      throw NumericalError("protocol: could not bracket the final field");
    }
  }
  for (int i = 0; i < 60 && hi / lo > 1.0 + 1e-6; ++i) {
    const double mid = std::sqrt(lo * hi);
    (gap_at(mid) > target ? hi : lo) = mid;
  }
  return std::sqrt(lo * hi);
}

// Largest field with 1 - bias_correction_factor <= tolerance.
double dressing_field(const DickeParams& p, double tolerance) {
  const double n = p.n_atoms;
  const double ratio = p.g / p.omega;
  return critical_field(p) * (1.0 - 1.0 / n) * std::sqrt(2.0 * tolerance) *
         std::exp((2.0 / n) * ratio * ratio);
}

ProtocolResult run_resolved(const ProtocolConfig& config, const ResolvedSchedule& resolved,
                            Engine engine) {
  const DickeParams& p = config.params;
  ProtocolResult out;
  out.engine = engine;
  out.resolved = resolved;
  out.jz_tanh = jz_tanh(p.n_atoms, p.delta, config.ramp.gamma);
  if (engine == Engine::demkov_analytic) {
    const DemkovParams d{resolved.report.delta_i, config.ramp.gamma, p.n_atoms, p.delta};
    out.population_plus = final_population(d);
    out.jz = p.n_atoms * (out.population_plus - 0.5);
    return out;
  }
  const SpinBosonBasis basis(p.n_atoms, resolved.fock_cutoff, config.fock.max_dim);
  const StateVector psi0 = noninteracting_ground(basis);
  const std::vector<double> times =
      uniform_samples(0.0, resolved.schedule.t_f, std::max<std::size_t>(config.samples, 1));
  EvolutionResult evolution = propagate(p, resolved.schedule, psi0, times, config.propagation);
  out.jz = evolution.jz.back();
  out.population_plus = std::norm(evolution.c_plus.back());
  out.leakage = evolution.leakage.back();
  out.evolution = std::move(evolution);
  return out;
}

}  // namespace

std::string to_string(Engine engine) {
  return engine == Engine::full_simulation ? "full" : "demkov";
}

Engine engine_from_string(const std::string& name) {
  if (name == "full") return Engine::full_simulation;
  if (name == "demkov") return Engine::demkov_analytic;
  throw ValidationError("unknown engine '" + name + "' (expected full or demkov)");
}

void ProtocolConfig::validate() const {
  params.validate();
  if (!(params.g > 0.0)) throw ValidationError("ProtocolConfig: requires g > 0");
  if (!(xi > 0.0 && xi < 1.0)) throw ValidationError("ProtocolConfig: xi must lie in (0, 1)");
  if (!(margin >= 1.0)) throw ValidationError("ProtocolConfig: margin must be >= 1");
  if (!(readout_dressing > 0.0 && readout_dressing < 1.0)) {
    throw ValidationError("ProtocolConfig: readout_dressing must lie in (0, 1)");
  }
  if (!(ramp.gamma > 0.0) || !std::isfinite(ramp.gamma)) {
    throw ValidationError("ProtocolConfig: gamma must be positive");
  }
  if (!(ramp.omega_x_i_ratio > 0.0 && ramp.omega_x_i_ratio < 1.0)) {
    throw ValidationError("ProtocolConfig: omega_x_i_ratio must lie in (0, 1)");
  }
  if (!(ramp.omega_x_0 > critical_field(params))) {
    throw ValidationError("ProtocolConfig: omega_x_0 must exceed the critical field");
  }
  if (ramp.tau1 && !(*ramp.tau1 > 0.0)) throw ValidationError("ProtocolConfig: tau1 must be > 0");
  if (!(ramp.tau1_gap_factor > 0.0)) {
    throw ValidationError("ProtocolConfig: tau1_gap_factor must be > 0");
  }
  if (ramp.t_f && !(*ramp.t_f > 0.0)) throw ValidationError("ProtocolConfig: t_f must be > 0");
}

std::string ConditionReport::to_text() const {
  auto flag = [](bool ok) { return ok ? "ok" : "WARN"; };
  std::ostringstream os;
  os.precision(6);
  os << "delta_i = " << delta_i << (delta_i_perturbative ? " (perturbative fallback)" : "")
     << "\n";
  os << "next_gap_i = " << next_gap_i << ", estimate omega_xc(1-1/N) = " << next_gap_estimate
     << "\n";
  os << "preparation delta_i*tau1 = " << preparation_ratio << " [" << flag(preparation_ok)
     << "]\n";
  os << "bias delta_i/(N|delta|) = " << bias_ratio << " [" << flag(bias_ok) << "]\n";
  os << "nonadiabatic next_gap/gamma = " << nonadiabatic_ratio << " (numeric "
     << nonadiabatic_ratio_numeric << ") [" << flag(nonadiabatic_ok) << "]\n";
  os << "margin = " << margin << "\n";
  return os.str();
}

ConditionReport check_conditions(const ProtocolConfig& config) {
  config.validate();
  const SwitchGap gap = gap_at_switch(config);
  return make_report(config, gap, tau1_for(config, gap.delta_i));
}

double measurement_time(double delta_i, double xi, int n_atoms, double delta, double gamma) {
  if (delta == 0.0) throw ValidationError("measurement_time: undefined at delta = 0");
  if (!(delta_i > 0.0) || !(xi > 0.0) || n_atoms < 1 || !(gamma > 0.0)) {
    throw ValidationError("measurement_time: requires positive delta_i, xi, gamma and N >= 1");
  }
  return std::log(delta_i / (xi * n_atoms * std::abs(delta))) / gamma;
}

double measurement_time(const ProtocolConfig& config) {
  config.validate();
  const SwitchGap gap = gap_at_switch(config);
  return measurement_time(gap.delta_i, config.xi, config.params.n_atoms, config.params.delta,
                          config.ramp.gamma);
}

ResolvedSchedule build_schedule(const ProtocolConfig& config) {
  config.validate();
  const DickeParams& p = config.params;
  const SwitchGap gap = gap_at_switch(config);
  const double tau1 = tau1_for(config, gap.delta_i);
  const double omega_xc = critical_field(p);
  const double omega_x_i = config.ramp.omega_x_i_ratio * omega_xc;

  ResolvedSchedule out;
  out.report = make_report(config, gap, tau1);

  DickeParams zero_field = p;
  zero_field.omega_x = 0.0;
  out.fock_cutoff = std::max(gap.fock_cutoff, converged_fock_cutoff(zero_field, config.fock));

  RampSchedule s = RampSchedule::from_stages(config.ramp.omega_x_0, tau1, omega_x_i,
                                             config.ramp.gamma, p.n_atoms, 0.0);
  if (config.ramp.t_f) {
    s.t_f = *config.ramp.t_f;
    if (s.t_f < s.t_i) throw ValidationError("protocol: t_f precedes the stage switch");
  } else {
    const double bias = p.n_atoms * std::abs(p.delta);
    const double scale = bias > 0.0 ? std::min(bias, config.ramp.gamma) : config.ramp.gamma;
    double omega_f = field_for_gap(p, omega_x_i, config.xi * scale, gap.fock_cutoff);
    if (p.n_atoms > 1) {
      omega_f = std::min(omega_f, dressing_field(p, config.readout_dressing));
    }
    s.t_f = s.t_i + s.tau2 * std::log(omega_x_i / omega_f);
  }
  s.validate(p.n_atoms, omega_xc);
  out.schedule = s;
  return out;
}

ProtocolResult run_protocol(const ProtocolConfig& config, ConditionPolicy policy) {
  const ResolvedSchedule resolved = build_schedule(config);
  if (policy == ConditionPolicy::enforce && !resolved.report.all_ok()) {
    throw ValidationError("protocol validity conditions not met:\n" + resolved.report.to_text());
  }
  return run_resolved(config, resolved, config.engine);
}

double estimate_delta_quasiadiabatic(double signal, int n_atoms, double gamma) {
  return invert_jz_tanh(n_atoms, signal, gamma);
}

SignPosterior single_shot_sign_posterior(double prior_half_width, double delta_c, double gamma,
                                         int n_atoms) {
  if (!(prior_half_width > 0.0) || !(delta_c > 0.0) || !std::isfinite(prior_half_width)) {
    throw ValidationError("single_shot_sign_posterior: prior bounds must be positive and finite");
  }
  if (!(gamma > 0.0) || n_atoms < 1) {
    throw ValidationError("single_shot_sign_posterior: requires gamma > 0 and N >= 1");
  }
  const double k = std::numbers::pi * n_atoms / (2.0 * gamma);
  SignPosterior out;
  out.closed_form = 1.0 - gamma / (2.0 * prior_half_width * std::numbers::pi * n_atoms) *
                              std::exp(-2.0 * std::numbers::pi * delta_c * n_atoms / gamma);

  using boost::math::quadrature::gauss_kronrod;
  auto likelihood = [k](double d) { return 0.5 + 0.5 * std::tanh(k * d); };
  auto integrate = [&](double a, double b) {
    if (b <= a) return 0.0;
    // Split at 0, where the likelihood bends on the scale 1/k.
    double total = 0.0;
    if (a < 0.0 && b > 0.0) {
      total += gauss_kronrod<double, 61>::integrate(likelihood, a, 0.0, 15, 1e-13);
      total += gauss_kronrod<double, 61>::integrate(likelihood, 0.0, b, 15, 1e-13);
    } else {
      total += gauss_kronrod<double, 61>::integrate(likelihood, a, b, 15, 1e-13);
    }
    return total;
  };
  const double lower = std::max(-delta_c, -prior_half_width);
  const double evidence = integrate(-prior_half_width, prior_half_width);
  out.numeric_bayes = std::clamp(integrate(lower, prior_half_width) / evidence, 0.0, 1.0);
  return out;
}

std::string to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::delta: return "delta";
    case SweepParameter::gamma: return "gamma";
    case SweepParameter::n_atoms: return "n_atoms";
  }
  return "unknown";
}

SweepParameter sweep_parameter_from_string(const std::string& name) {
  if (name == "delta") return SweepParameter::delta;
  if (name == "gamma") return SweepParameter::gamma;
  if (name == "n_atoms" || name == "N") return SweepParameter::n_atoms;
  throw ValidationError("unknown sweep parameter '" + name + "' (expected delta, gamma or n_atoms)");
}

SignalCurve sweep(const ProtocolConfig& config, SweepParameter parameter,
                  std::span<const double> grid, const SweepOptions& options) {
  if (grid.empty()) throw ValidationError("empty sweep");
  if (!options.run_full && !options.run_demkov) {
    throw ValidationError("sweep: no engine selected");
  }
  SignalCurve curve;
  curve.parameter = parameter;
  curve.points.resize(grid.size());
  parallel_for(grid.size(), options.workers, [&](std::size_t i) {
    SignalPoint& point = curve.points[i];
    point.value = grid[i];
    try {
      ProtocolConfig local = config;
      switch (parameter) {
        case SweepParameter::delta: local.params.delta = grid[i]; break;
        case SweepParameter::gamma: local.ramp.gamma = grid[i]; break;
        case SweepParameter::n_atoms: {
          const double rounded = std::round(grid[i]);
          if (rounded != grid[i] || rounded < 1.0) {
            throw ValidationError("sweep: N values must be positive integers");
          }
          local.params.n_atoms = static_cast<int>(rounded);
          break;
        }
      }
      const ResolvedSchedule resolved = build_schedule(local);
      point.report = resolved.report;
      point.jz_tanh = jz_tanh(local.params.n_atoms, local.params.delta, local.ramp.gamma);
      if (options.run_demkov) {
        point.jz_demkov = run_resolved(local, resolved, Engine::demkov_analytic).jz;
      }
      if (options.run_full) {
        const ProtocolResult full = run_resolved(local, resolved, Engine::full_simulation);
        point.jz_numeric = full.jz;
        point.leakage = full.leakage;
      }
    } catch (const std::exception& e) {
      point.error = e.what();
    }
  });
  return curve;
}

}  // namespace dicke
