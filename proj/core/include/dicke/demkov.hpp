// demkov.hpp: two-level model of the metrology stage,
//   i dc+/dt =  (N delta / 2) c+ + (Delta(t) / 2) c-
//   i dc-/dt = -(N delta / 2) c- + (Delta(t) / 2) c+,   Delta(t) = Delta_i exp(-gamma t),
// started from c+(0) = 1/sqrt2, c-(0) = -1/sqrt2, and its Bessel-function
// solution.

#pragma once

#include "dicke/ode.hpp"
#include "dicke/special_functions.hpp"

#include <span>
#include <vector>

namespace dicke {

struct DemkovParams {
  double delta_i = 0.0;  // gap at the start of the stage
  double gamma = 0.0;    // decay rate of the gap
  int n_atoms = 1;
  double delta = 0.0;

  double x() const { return delta_i / (2.0 * gamma); }
  // nu = 1/2 - i N delta / (2 gamma)
  Complex nu() const { return {0.5, -n_atoms * delta / (2.0 * gamma)}; }
  // pi N delta / (2 gamma)
  double phase() const;

  // gamma > 0, N >= 1, delta_i >= 0, all finite; the closed forms
  // additionally need delta_i > 0.
  void validate() const;
};

// Closed-form c+(t), t measured from the start of the stage. The four Bessel
// values at x are computed once per call of the span overload.
Complex amplitude_cplus(const DemkovParams& params, double t);
std::vector<Complex> amplitude_cplus(const DemkovParams& params, std::span<const double> times);

// |c+|^2 once the gap has closed (x exp(-gamma t) << 1):
//   1/2 + i (pi/4) (x / cosh(phase)) (J_nu J_-nu - J_{nu-1} J_{1-nu}) at x.
// The bracket times i is real; an imaginary part above 1e-8 raises
// NumericalError.
double final_population(const DemkovParams& params);

// Imaginary part that final_population discards.
double final_population_residue(const DemkovParams& params);

// Large-x limits of the signal and its statistics:
//   <J_z> = -(N/2) tanh(pi N delta / 2 gamma)
//   <Delta^2 J_z>^{1/2} = N / (2 cosh(pi N delta / 2 gamma))
//   deltabar = <Delta^2 J_z>^{1/2} / |d<J_z>/d delta| = (2 gamma / pi N) cosh(pi N delta / 2 gamma)
double jz_tanh(int n_atoms, double delta, double gamma);
double jz_tanh_derivative(int n_atoms, double delta, double gamma);  // d/d delta
double signal_variance(int n_atoms, double delta, double gamma);
double signal_std_dev(int n_atoms, double delta, double gamma);
double uncertainty_deltabar(int n_atoms, double delta, double gamma);

// Inverse of jz_tanh: delta = (2 gamma / pi N) atanh(-2 <J_z> / N). Requires
// |<J_z>| < N/2.
double invert_jz_tanh(int n_atoms, double jz, double gamma);

struct TwoLevelTrajectory {
  std::vector<double> times;
  std::vector<Complex> c_plus;
  std::vector<Complex> c_minus;
  OdeStats stats;
};

// Direct integration of the two-level equations at the given samples
// (sorted, >= 0). Tolerances default to rtol = 1e-12, atol = 1e-14; the
// norm is checked to stay within 1e-10 of one.
TwoLevelTrajectory two_level_ode_reference(const DemkovParams& params,
                                           std::span<const double> times, double rtol = 1e-12,
                                           double atol = 1e-14);

}  // namespace dicke
