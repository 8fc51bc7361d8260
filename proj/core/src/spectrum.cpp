#include "dicke/spectrum.hpp"

#include "dicke/detail/assemble.hpp"
#include "dicke/errors.hpp"
#include "dicke/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace dicke {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

Eigen::Index basis_dim(int n_atoms, int cutoff) {
  return static_cast<Eigen::Index>(n_atoms + 1) * (cutoff + 1);
}

// Doubles the cutoff until `lowest_two(cutoff)` stops moving. Returns the
// accepted cutoff and the levels evaluated there.
template <class LowestTwo>
std::pair<int, std::array<double, 2>> converge_cutoff(const DickeParams& params,
                                                      const FockCutoffPolicy& policy,
                                                      LowestTwo&& lowest_two) {
  if (policy.fixed_cutoff) {
    const int cutoff = *policy.fixed_cutoff;
    if (cutoff < 0) throw ValidationError("FockCutoffPolicy: fixed cutoff must be >= 0");
    return {cutoff, lowest_two(cutoff)};
  }
  int cutoff = default_fock_cutoff(params);
  if (basis_dim(params.n_atoms, cutoff) > policy.max_dim) {
    throw NumericalError("Fock cutoff: initial dimension already exceeds the cap");
  }
  // Without coupling the levels do not depend on the cutoff beyond rounding,
  // so the bare energy scale stands in for g.
  const double scale = params.g > 0.0 ? params.g : std::max(params.omega, params.omega_x);
  char tol_text[32];
  std::snprintf(tol_text, sizeof tol_text, "%g", policy.tolerance);
  auto levels = lowest_two(cutoff);
  for (;;) {
    const int doubled = 2 * cutoff;
    if (basis_dim(params.n_atoms, doubled) > policy.max_dim) {
      throw NumericalError("Fock cutoff: lowest levels not converged to " +
                           std::string(tol_text) + " before the dimension cap " +
                           std::to_string(policy.max_dim) + " (n_max = " +
                           std::to_string(cutoff) + ")");
    }
    const auto refined = lowest_two(doubled);
    const double change =
        std::max(std::abs(refined[0] - levels[0]), std::abs(refined[1] - levels[1]));
    if (change < policy.tolerance * scale || change == 0.0) {
      return {cutoff, levels};
    }
    cutoff = doubled;
    levels = refined;
  }
}

std::array<double, 2> lowest_two_full(const DickeParams& params, int cutoff) {
  const SpinBosonBasis basis(params.n_atoms, cutoff, std::numeric_limits<Eigen::Index>::max());
  const Eigen::MatrixXd h = detail::dense_hamiltonian<double>(basis, params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const auto& e = solver.eigenvalues();
  return {e[0], e.size() > 1 ? e[1] : e[0]};
}

std::vector<long double> merged_levels(const ParityLevels& levels) {
  std::vector<long double> all(levels.even);
  all.insert(all.end(), levels.odd.begin(), levels.odd.end());
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

int default_fock_cutoff(const DickeParams& params) {
  params.validate();
  const double ratio = params.g / params.omega;
  return static_cast<int>(std::ceil(8.0 * params.n_atoms * ratio * ratio)) + 20;
}

int converged_fock_cutoff(const DickeParams& params, const FockCutoffPolicy& policy) {
  params.validate();
  return converge_cutoff(params, policy, [&](int cutoff) {
           return lowest_two_full(params, cutoff);
         }).first;
}

SpectrumResult eigen_lowest(const HermitianOperator& h, int k) {
  const SpinBosonBasis& basis = h.basis();
  if (k < 1 || k > basis.dim()) {
    throw ValidationError("eigen_lowest: k must lie in [1, dim]");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) throw NumericalError("eigen_lowest: eigensolver failed");
  const Eigen::VectorXd& e = solver.eigenvalues();
  const ComplexMatrix& v = solver.eigenvectors();

  const double scale = std::max(max_abs(h.matrix()), 1e-300);
  const ComplexMatrix parity = op_parity(basis).matrix();

  SpectrumResult out;
  out.energies.reserve(k);
  out.states.reserve(k);
  for (int i = 0; i < k; ++i) {
    const ComplexVector vec = v.col(i);
    const double residual = (h.matrix() * vec - e[i] * vec).norm();
    if (residual > 1e-8 * scale) {
      throw NumericalError("eigen_lowest: residual " + std::to_string(residual) +
                           " exceeds tolerance for eigenpair " + std::to_string(i));
    }
    out.energies.push_back(e[i]);
    out.states.push_back(StateVector::normalized(basis, vec));
    out.parities.push_back(vec.dot(parity * vec).real());
    const bool below = i > 0 && e[i] - e[i - 1] < kDegeneracyThreshold;
    const bool above = i + 1 < e.size() && e[i + 1] - e[i] < kDegeneracyThreshold;
    out.degenerate.push_back(below || above);
  }
  if (e.size() > 1) out.gap = std::max(0.0, e[1] - e[0]);
  if (e.size() > 2) out.next_gap = std::max(0.0, e[2] - e[1]);
  return out;
}

SpectrumResult lowest_spectrum(const DickeParams& params, int k, const FockCutoffPolicy& policy) {
  const int cutoff = converged_fock_cutoff(params, policy);
  const SpinBosonBasis basis(params.n_atoms, cutoff, policy.max_dim);
  SpectrumResult out = eigen_lowest(build_h(basis, params), k);
  out.params = params;
  return out;
}

ParityLevels parity_resolved_levels(const SpinBosonBasis& basis, const DickeParams& params,
                                    int count) {
  params.validate();
  if (basis.n_atoms() != params.n_atoms) {
    throw ValidationError("parity_resolved_levels: basis N does not match params N");
  }
  DickeParams symmetric = params;
  symmetric.delta = 0.0;
  const LongMatrix h = detail::dense_hamiltonian<long double>(basis, symmetric);

  // Pi e_i = s_i e_{p(i)}; sector vectors are (e_i + lambda s_i e_{p(i)}) / sqrt 2
  // for i < p(i), plus e_i alone when i = p(i) and s_i = lambda.
  struct Entry {
    Eigen::Index index;
    long double coeff;
  };
  using SectorVector = std::array<Entry, 2>;
  const int big_n = basis.n_atoms();
  const double phase = spin_parity_phase(big_n);
  std::array<std::vector<SectorVector>, 2> sectors;  // [0] even, [1] odd
  const long double inv_sqrt2 = 1.0L / std::sqrt(2.0L);
  for (int k = 0; k <= big_n; ++k) {
    const int partner = big_n - k;
    if (partner < k) continue;
    for (int n = 0; n <= basis.fock_cutoff(); ++n) {
      const long double s = phase * ((n % 2 == 0) ? 1.0L : -1.0L);
      const Eigen::Index i = basis.index(k, n);
      if (partner == k) {
        sectors[s > 0 ? 0 : 1].push_back({Entry{i, 1.0L}, Entry{i, 0.0L}});
        continue;
      }
      const Eigen::Index p = basis.index(partner, n);
      sectors[0].push_back({Entry{i, inv_sqrt2}, Entry{p, s * inv_sqrt2}});
      sectors[1].push_back({Entry{i, inv_sqrt2}, Entry{p, -s * inv_sqrt2}});
    }
  }

  ParityLevels out;
  for (int sector = 0; sector < 2; ++sector) {
    const auto& vecs = sectors[sector];
    const auto d = static_cast<Eigen::Index>(vecs.size());
    std::vector<long double>& target = sector == 0 ? out.even : out.odd;
    if (d == 0) continue;
    LongMatrix block(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = a; b < d; ++b) {
        long double sum = 0.0L;
        for (const Entry& ea : vecs[a]) {
          if (ea.coeff == 0.0L) continue;
          for (const Entry& eb : vecs[b]) {
            if (eb.coeff == 0.0L) continue;
            sum += ea.coeff * eb.coeff * h(ea.index, eb.index);
          }
        }
        block(a, b) = sum;
        block(b, a) = sum;
      }
    }
    Eigen::SelfAdjointEigenSolver<LongMatrix> solver(block, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("parity_resolved_levels: eigensolver failed");
    }
    const auto take = std::min<Eigen::Index>(count, d);
    for (Eigen::Index i = 0; i < take; ++i) target.push_back(solver.eigenvalues()[i]);
  }
  return out;
}

GapResult gap_numeric(const DickeParams& params, const FockCutoffPolicy& policy) {
  params.validate();
  DickeParams symmetric = params;
  symmetric.delta = 0.0;
  std::map<int, std::vector<long double>> solved;
  auto lowest_two = [&](int cutoff) {
    const SpinBosonBasis basis(params.n_atoms, cutoff, std::numeric_limits<Eigen::Index>::max());
    const auto& levels = solved[cutoff] =
        merged_levels(parity_resolved_levels(basis, symmetric, 3));
    return std::array<double, 2>{static_cast<double>(levels[0]),
                                 static_cast<double>(levels.size() > 1 ? levels[1] : levels[0])};
  };
  const int cutoff = converge_cutoff(symmetric, policy, lowest_two).first;
  const std::vector<long double>& levels = solved.at(cutoff);
  GapResult out;
  out.fock_cutoff = cutoff;
  out.ground_energy = static_cast<double>(levels[0]);
  if (levels.size() > 1) out.gap = static_cast<double>(std::max(0.0L, levels[1] - levels[0]));
  if (levels.size() > 2) {
    out.next_gap = static_cast<double>(std::max(0.0L, levels[2] - levels[1]));
  }
  return out;
}

double log_gap_perturbative(const DickeParams& params) {
  params.validate();
  if (!(params.g > 0.0)) throw ValidationError("gap_perturbative: requires g > 0");
  if (!(params.omega_x > 0.0)) throw ValidationError("log_gap_perturbative: requires omega_x > 0");
  const double n = params.n_atoms;
  const double ratio = params.g / params.omega;
  const double omega_xc = critical_field(params);
  return std::log(2.0) - 2.0 * ratio * ratio + (n + 1.0) * std::log(n) - n * std::log(2.0) -
         std::lgamma(n + 1.0) + std::log(params.omega_x) +
         (n - 1.0) * std::log(params.omega_x / omega_xc);
}

double gap_perturbative(const DickeParams& params) {
  params.validate();
  if (!(params.g > 0.0)) throw ValidationError("gap_perturbative: requires g > 0");
  if (params.omega_x == 0.0) return 0.0;
  return std::exp(log_gap_perturbative(params));
}

double gap_asymptotic(const DickeParams& params) {
  params.validate();
  if (!(params.g > 0.0)) throw ValidationError("gap_asymptotic: requires g > 0");
  if (params.omega_x == 0.0) return 0.0;
  const double n = params.n_atoms;
  const double ratio = params.g / params.omega;
  const double omega_xc = critical_field(params);
  const double log_value = 0.5 * std::log(2.0 / std::numbers::pi) - 2.0 * ratio * ratio +
                           std::log(omega_xc) + 0.5 * std::log(n) -
                           n * (std::log(2.0 * omega_xc / params.omega_x) - 1.0);
  return std::exp(log_value);
}

bool in_perturbative_regime(const DickeParams& params) {
  params.validate();
  return params.g > 0.0 && params.omega_x < critical_field(params) &&
         params.g / params.omega <= 0.3;
}

double gap_scaling_ratio(const DickeParams& params, double gap) {
  params.validate();
  if (!(params.omega_x > 0.0) || !(params.g > 0.0)) {
    throw ValidationError("gap_scaling_ratio: requires omega_x > 0 and g > 0");
  }
  const double log_scale = std::log(params.omega_x) +
                           (params.n_atoms - 1.0) * std::log(params.omega_x / critical_field(params));
  return gap * std::exp(-log_scale);
}

double bias_correction_factor(const DickeParams& params) {
  params.validate();
  if (params.n_atoms < 2) throw ValidationError("bias_correction_factor: requires N >= 2");
  if (!(params.g > 0.0)) throw ValidationError("bias_correction_factor: requires g > 0");
  const double n = params.n_atoms;
  const double ratio = params.g / params.omega;
  const double field = params.omega_x / critical_field(params);
  const double shrink = 1.0 - 1.0 / n;
  return 1.0 - std::exp(-(4.0 / n) * ratio * ratio) * field * field / 2.0 / (shrink * shrink);
}

EffectiveTwoLevel effective_two_level(const DickeParams& params, double gap) {
  EffectiveTwoLevel out;
  out.splitting = gap;
  out.bias = params.n_atoms * params.delta;
  out.correction_factor = bias_correction_factor(params);
  out.regime_warning = params.omega_x > 0.5 * critical_field(params);
  return out;
}

EffectiveTwoLevel effective_two_level(const DickeParams& params, const GapResult& gap) {
  return effective_two_level(params, gap.gap);
}

PerturbedGroundState perturbed_ground_state(const SpinBosonBasis& basis,
                                            const DickeParams& params, int sign) {
  params.validate();
  if (sign != 1 && sign != -1) throw ValidationError("perturbed_ground_state: sign must be +-1");
  if (params.n_atoms < 2) throw ValidationError("perturbed_ground_state: requires N >= 2");
  if (!(params.g > 0.0)) throw ValidationError("perturbed_ground_state: requires g > 0");
  const int big_n = params.n_atoms;
  const double n = big_n;
  const double ratio = params.g / params.omega;
  const double admixture = -std::exp(-(2.0 / n) * ratio * ratio) *
                           (params.omega_x / (2.0 * critical_field(params))) * std::sqrt(n) /
                           (1.0 - 1.0 / n);
  const auto m_edge = SpinProjection::from_index(big_n, sign > 0 ? big_n : 0);
  const auto m_next = SpinProjection::from_index(big_n, sign > 0 ? big_n - 1 : 1);
  const ComplexVector v = displaced_fock_state(basis, params, 0, m_edge).amplitudes() +
                          admixture * displaced_fock_state(basis, params, 0, m_next).amplitudes();
  return {StateVector::normalized(basis, v), admixture};
}

std::vector<SpectrumRow> spectrum_scan(const DickeParams& params,
                                       std::span<const double> omega_x_grid, int k,
                                       const FockCutoffPolicy& policy, unsigned workers) {
  params.validate();
  if (omega_x_grid.empty()) return {};
  DickeParams weakest = params;
  weakest.omega_x = *std::min_element(omega_x_grid.begin(), omega_x_grid.end());
  FockCutoffPolicy fixed = policy;
  fixed.fixed_cutoff = converged_fock_cutoff(weakest, policy);
  const SpinBosonBasis basis(params.n_atoms, *fixed.fixed_cutoff, policy.max_dim);

  std::vector<SpectrumRow> rows(omega_x_grid.size());
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    DickeParams point = params;
    point.omega_x = omega_x_grid[i];
    const SpectrumResult r = eigen_lowest(build_h(basis, point), k);
    rows[i] = SpectrumRow{point.omega_x, r.energies, r.gap, r.next_gap, r.parities};
  });
  return rows;
}

}  // namespace dicke
