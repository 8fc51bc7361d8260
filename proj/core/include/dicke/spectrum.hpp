// spectrum.hpp: exact low-energy spectra of H_D, the tunnelling gap and the
// closed-form perturbative gap of the superradiant phase.

#pragma once

#include "dicke/hilbert.hpp"
#include "dicke/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dicke {

// Fock truncation rule. Unless fixed_cutoff is given, start from
// default_fock_cutoff() and double n_max until the two lowest eigenvalues
// move by less than `tolerance` (units of g).
struct FockCutoffPolicy {
  std::optional<int> fixed_cutoff;
  double tolerance = 1e-8;
  Eigen::Index max_dim = kDefaultMaxDim;
};

// ceil(8 N (g/omega)^2) + 20: the mean occupation of the displaced ground
// state is N (g/omega)^2.
int default_fock_cutoff(const DickeParams& params);

// Applies the policy to H(params) (delta included). Throws NumericalError if
// the cap is reached before convergence.
int converged_fock_cutoff(const DickeParams& params, const FockCutoffPolicy& policy = {});

// Two eigenvalues closer than this (units of g) are reported as degenerate.
inline constexpr double kDegeneracyThreshold = 1e-8;

struct SpectrumResult {
  std::optional<DickeParams> params;
  std::vector<double> energies;      // ascending
  std::vector<StateVector> states;
  double gap = 0.0;                  // E1 - E0
  double next_gap = 0.0;             // E2 - E1
  std::vector<double> parities;      // <Pi> of each state
  std::vector<bool> degenerate;      // true if a neighbour lies within kDegeneracyThreshold
};

// k lowest eigenpairs of a dense Hermitian matrix (complex double). Each pair
// is checked to satisfy ||Hv - Ev|| <= 1e-8 * max|H_ij|.
SpectrumResult eigen_lowest(const HermitianOperator& h, int k);

// eigen_lowest on H(params) at the converged cutoff.
SpectrumResult lowest_spectrum(const DickeParams& params, int k,
                               const FockCutoffPolicy& policy = {});

struct ParityLevels {
  std::vector<long double> even;  // ascending, Pi = +1 block
  std::vector<long double> odd;   // ascending, Pi = -1 block
};

// Lowest `count` eigenvalues of each parity block of H_D (delta ignored),
// diagonalized in long double. Exponentially small tunnelling gaps survive
// because each block is solved separately.
ParityLevels parity_resolved_levels(const SpinBosonBasis& basis, const DickeParams& params,
                                    int count);

struct GapResult {
  double gap = 0.0;       // Delta_N = E1 - E0 of H_D
  double next_gap = 0.0;  // Delta' = E2 - E1
  double ground_energy = 0.0;
  int fock_cutoff = 0;
};

// Gap of H_D (delta ignored) at the converged Fock cutoff.
GapResult gap_numeric(const DickeParams& params, const FockCutoffPolicy& policy = {});

// Weak-coupling (g << omega) N-th order result
//   2 exp(-2 (g/omega)^2) N^{N+1} / (2^N N!) Omega_x (Omega_x/Omega_{x,c})^{N-1},
// evaluated in log space. Requires g > 0.
double gap_perturbative(const DickeParams& params);
double log_gap_perturbative(const DickeParams& params);

// Stirling form of gap_perturbative for large N.
double gap_asymptotic(const DickeParams& params);

// Omega_x < Omega_{x,c} and g/omega <= 0.3; outside it the closed forms are
// only indicative.
bool in_perturbative_regime(const DickeParams& params);

// Empirical scaling function f_N = gap / (Omega_x (Omega_x/Omega_{x,c})^{N-1}).
double gap_scaling_ratio(const DickeParams& params, double gap);

struct EffectiveTwoLevel {
  double splitting = 0.0;          // Delta_N
  double bias = 0.0;               // N delta
  double correction_factor = 1.0;  // multiplies the bias
  bool regime_warning = false;     // Omega_x > Omega_{x,c}/2
};

// H_eff = (Delta_N/2) sigma^x + (N delta/2) * correction * sigma^z with
// correction = 1 - exp(-(4/N)(g/omega)^2) Omega_x^2/(2 Omega_{x,c}^2) (1-1/N)^{-2}.
// Requires N >= 2.
EffectiveTwoLevel effective_two_level(const DickeParams& params, double gap);
EffectiveTwoLevel effective_two_level(const DickeParams& params, const GapResult& gap);
double bias_correction_factor(const DickeParams& params);

// Diagnostic: ground-multiplet state corrected to first order in Omega_x by
// the admixture of |Phi_{0, +-(N/2-1)}>. `admixture` is the (real)
// coefficient before normalization; with the conventions of this library it
// equals -exp(-(2/N)(g/omega)^2) (Omega_x / 2 Omega_{x,c}) sqrt(N) / (1 - 1/N).
struct PerturbedGroundState {
  StateVector state;
  double admixture = 0.0;
};
PerturbedGroundState perturbed_ground_state(const SpinBosonBasis& basis,
                                            const DickeParams& params, int sign);

struct SpectrumRow {
  double omega_x = 0.0;
  std::vector<double> energies;
  double gap = 0.0;
  double next_gap = 0.0;
  std::vector<double> parities;
};

// eigen_lowest on every omega_x of the grid (other params fixed). The Fock
// cutoff is converged once, at the smallest field of the grid.
std::vector<SpectrumRow> spectrum_scan(const DickeParams& params,
                                       std::span<const double> omega_x_grid, int k,
                                       const FockCutoffPolicy& policy = {},
                                       unsigned workers = 1);

}  // namespace dicke
