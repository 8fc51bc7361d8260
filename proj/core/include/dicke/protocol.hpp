// protocol.hpp: two-stage metrology protocol. Stage one ramps Omega_x from
// the normal phase to Omega_{x,i} inside the superradiant phase; stage two
// lets the tunnelling gap decay as exp(-gamma t) until it is a small
// fraction xi of the bias, then <J_z> is read out.

#pragma once

#include "dicke/dynamics.hpp"
#include "dicke/model.hpp"
#include "dicke/spectrum.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dicke {

enum class Engine { full_simulation, demkov_analytic };

std::string to_string(Engine engine);
Engine engine_from_string(const std::string& name);

struct RampSettings {
  double omega_x_0 = 9.0;
  // Omega_{x,i} = ratio * Omega_{x,c}.
  double omega_x_i_ratio = 0.8;
  double gamma = 0.03;
  // Stage-one time constant; defaults to tau1_gap_factor / Delta_i.
  std::optional<double> tau1;
  double tau1_gap_factor = 20.0;
  // End of the run; defaults to the time at which the numeric gap reaches
  // xi * min(N |delta|, gamma).
  std::optional<double> t_f;
};

struct ProtocolConfig {
  DickeParams params;  // omega_x is ignored
  RampSettings ramp;
  double xi = 0.1;
  // The run also continues until the transverse-field dressing of the ground
  // pair reduces <J_z> by at most this fraction (the bias correction factor
  // is >= 1 - readout_dressing), so the readout sees bare |Psi_+->.
  double readout_dressing = 1e-3;
  double margin = 10.0;
  Engine engine = Engine::full_simulation;
  FockCutoffPolicy fock;
  PropagationOptions propagation;
  std::size_t samples = 200;

  // 0 < xi < 1, margin >= 1, ratios and rates positive, params valid.
  void validate() const;
};

struct ConditionReport {
  double delta_i = 0.0;           // gap at Omega_{x,i}
  bool delta_i_perturbative = false;  // true if the numeric gap was unavailable
  double next_gap_i = 0.0;        // Delta' at Omega_{x,i} (numeric)
  double next_gap_estimate = 0.0; // Omega_{x,c} (1 - 1/N)
  double tau1 = 0.0;
  double gamma = 0.0;
  double margin = 0.0;

  double preparation_ratio = 0.0;    // Delta_i tau1          (>> 1)
  double bias_ratio = 0.0;           // Delta_i / (N |delta|)  (>> 1; infinite at delta = 0)
  double nonadiabatic_ratio = 0.0;   // Delta'_estimate / gamma (>> 1)
  double nonadiabatic_ratio_numeric = 0.0;  // Delta'_i / gamma

  bool preparation_ok = false;
  bool bias_ok = false;
  bool nonadiabatic_ok = false;

  bool all_ok() const { return preparation_ok && bias_ok && nonadiabatic_ok; }
  std::string to_text() const;
};

ConditionReport check_conditions(const ProtocolConfig& config);

// t_m = (1/gamma) ln(Delta_i / (xi N |delta|)). Throws ValidationError at
// delta = 0. t_m scales as 1/gamma, so the single-shot sign error gamma/N is
// of order 1/(t_m N) up to the logarithm.
double measurement_time(double delta_i, double xi, int n_atoms, double delta, double gamma);
double measurement_time(const ProtocolConfig& config);

struct ResolvedSchedule {
  RampSchedule schedule;
  ConditionReport report;
  int fock_cutoff = 0;
};

// Fills in tau1, t_i and t_f. The final field is the smaller of two: the
// field where the numeric gap equals xi * min(N |delta|, gamma) (xi * gamma
// at delta = 0, found by bisection on log Omega_x), and the field where the
// dressing criterion of ProtocolConfig::readout_dressing is met.
ResolvedSchedule build_schedule(const ProtocolConfig& config);

enum class ConditionPolicy { warn, enforce };

struct ProtocolResult {
  Engine engine = Engine::full_simulation;
  double jz = 0.0;                 // final <J_z>
  double population_plus = 0.0;    // |c+(t_f)|^2
  double leakage = 0.0;            // full simulation only
  double jz_tanh = 0.0;            // large-x limit for comparison
  ResolvedSchedule resolved;
  std::optional<EvolutionResult> evolution;
};

// Full simulation starts from the x-polarized product state with the boson
// in vacuum. The analytic engine evaluates final_population with Delta_i
// from the numeric gap and reports N (|c+|^2 - 1/2). With
// ConditionPolicy::enforce a failed condition throws ValidationError.
ProtocolResult run_protocol(const ProtocolConfig& config,
                            ConditionPolicy policy = ConditionPolicy::warn);

// delta_hat = (2 gamma / pi N) atanh(-2 signal / N); throws ValidationError
// when |signal| >= N/2.
double estimate_delta_quasiadiabatic(double signal, int n_atoms, double gamma);

struct SignPosterior {
  double closed_form = 0.0;
  double numeric_bayes = 0.0;
};

// P(delta > -delta_c | S_z = -N/2) for a flat prior on [-Delta_c, Delta_c]:
// the closed form 1 - (gamma / (2 Delta_c pi N)) exp(-2 pi delta_c N / gamma)
// and the direct Bayes integral with likelihood 1/2 + tanh(pi N delta / 2 gamma)/2.
SignPosterior single_shot_sign_posterior(double prior_half_width, double delta_c, double gamma,
                                         int n_atoms);

enum class SweepParameter { delta, gamma, n_atoms };

std::string to_string(SweepParameter parameter);
SweepParameter sweep_parameter_from_string(const std::string& name);

struct SweepOptions {
  bool run_full = true;
  bool run_demkov = true;
  unsigned workers = 1;
};

struct SignalPoint {
  double value = 0.0;  // swept parameter
  std::optional<double> jz_numeric;
  std::optional<double> jz_demkov;
  double jz_tanh = 0.0;
  std::optional<double> leakage;
  std::optional<ConditionReport> report;
  std::string error;  // empty on success
};

struct SignalCurve {
  SweepParameter parameter = SweepParameter::delta;
  std::vector<SignalPoint> points;  // grid order
};

// Runs run_protocol for every grid value of the chosen parameter (others as
// in config). Failures are recorded per point; the sweep itself only throws
// for an empty grid or invalid options.
SignalCurve sweep(const ProtocolConfig& config, SweepParameter parameter,
                  std::span<const double> grid, const SweepOptions& options = {});

}  // namespace dicke
