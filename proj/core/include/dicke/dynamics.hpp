// dynamics.hpp: Schroedinger evolution of the spin-boson state while the
// transverse field is ramped down in two exponential stages.

#pragma once

#include "dicke/hilbert.hpp"
#include "dicke/model.hpp"
#include "dicke/ode.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dicke {

// Omega_x(t) = omega_x_0 exp(-t / tau1)                     for t <= t_i
//            = omega_x_i exp(-(t - t_i) / tau2)             for t >  t_i
// with omega_x_i = omega_x_0 exp(-t_i / tau1) and gamma = N / tau2.
struct RampSchedule {
  double omega_x_0 = 0.0;
  double tau1 = 0.0;
  double t_i = 0.0;
  double omega_x_i = 0.0;
  double tau2 = 0.0;
  double gamma = 0.0;
  double t_f = 0.0;

  // Derives t_i and tau2 from the stage parameters.
  static RampSchedule from_stages(double omega_x_0, double tau1, double omega_x_i, double gamma,
                                  int n_atoms, double t_f);

  double omega_x(double t) const;

  // Positivity, continuity at t_i, gamma tau2 = N, t_f >= t_i and
  // omega_x_0 > omega_xc > omega_x_i.
  void validate(int n_atoms, double omega_xc) const;
};

struct PropagationOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  std::optional<double> fixed_step;
  double max_step = std::numeric_limits<double>::infinity();
  // Largest tolerated population of the top Fock level n_max.
  double truncation_threshold = 1e-6;
};

struct MultipletProjection {
  Complex c_plus;
  Complex c_minus;
  double leakage = 0.0;  // 1 - |c+|^2 - |c-|^2
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<double> jz;
  std::vector<double> parity;
  std::vector<double> norm;
  std::vector<Complex> c_plus;
  std::vector<Complex> c_minus;
  std::vector<double> leakage;
  std::optional<StateVector> final_state;  // renormalized copy of the last sample
  double max_boundary_population = 0.0;
  OdeStats stats;
};

// Integrates i d|psi>/dt = (H_D(Omega_x(t)) + delta J_z)|psi> from t = 0 and
// records observables at each sample time (sorted, within [0, t_f]). The
// Fock cutoff is that of psi0's basis; params.omega_x is ignored. Throws
// NumericalError if the n_max population exceeds the truncation threshold.
EvolutionResult propagate(const DickeParams& params, const RampSchedule& schedule,
                          const StateVector& psi0, std::span<const double> sample_times,
                          const PropagationOptions& options = {});

MultipletProjection project_onto_multiplet(const StateVector& state, const GroundPair& pair);
MultipletProjection project_onto_multiplet(const ComplexVector& amplitudes,
                                           const GroundPair& pair);

double measure_jz(const StateVector& state);
double measure_parity(const StateVector& state);

// count >= 2 points from t0 to t1 inclusive; count == 1 gives {t1}.
std::vector<double> uniform_samples(double t0, double t1, std::size_t count);

}  // namespace dicke
