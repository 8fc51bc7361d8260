#include "dicke/model.hpp"

#include "dicke/detail/assemble.hpp"
#include "dicke/errors.hpp"

#include <cmath>
#include <string>

namespace dicke {

void DickeParams::validate() const {
  if (n_atoms < 1) throw ValidationError("DickeParams: N must be >= 1");
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw ValidationError("DickeParams: omega must be positive and finite");
  }
  if (!(omega_x >= 0.0) || !std::isfinite(omega_x)) {
    throw ValidationError("DickeParams: omega_x must be non-negative and finite");
  }
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw ValidationError("DickeParams: g must be non-negative and finite");
  }
  if (!std::isfinite(delta)) throw ValidationError("DickeParams: delta must be finite");
}

SpinProjection SpinProjection::from_index(int n_atoms, int m_index) {
  if (n_atoms < 1 || m_index < 0 || m_index > n_atoms) {
    throw ValidationError("SpinProjection: m_index out of range");
  }
  return {n_atoms, m_index};
}

SpinProjection SpinProjection::from_value(int n_atoms, double m) {
  const double shifted = m + 0.5 * n_atoms;
  const double rounded = std::round(shifted);
  if (std::abs(shifted - rounded) > 1e-12) {
    throw ValidationError("SpinProjection: m + N/2 must be an integer");
  }
  return from_index(n_atoms, static_cast<int>(rounded));
}

double critical_field(const DickeParams& params) {
  if (!(params.omega > 0.0)) throw ValidationError("critical_field: omega must be positive");
  return 4.0 * params.g * params.g / params.omega;
}

namespace {

void require_matching(const SpinBosonBasis& basis, const DickeParams& params, const char* where) {
  params.validate();
  if (basis.n_atoms() != params.n_atoms) {
    throw ValidationError(std::string(where) + ": basis N does not match params N");
  }
}

}  // namespace

HermitianOperator build_h(const SpinBosonBasis& basis, const DickeParams& params) {
  require_matching(basis, params, "build_h");
  return {basis, detail::dense_hamiltonian<double>(basis, params).cast<Complex>()};
}

HermitianOperator build_hd(const SpinBosonBasis& basis, const DickeParams& params) {
  DickeParams symmetric = params;
  symmetric.delta = 0.0;
  return build_h(basis, symmetric);
}

double displacement_amplitude(const DickeParams& params, SpinProjection m) {
  return -2.0 * params.g / (params.omega * std::sqrt(static_cast<double>(params.n_atoms))) *
         m.value();
}

double zero_field_energy(const DickeParams& params, int n, SpinProjection m) {
  params.validate();
  if (n < 0) throw ValidationError("zero_field_energy: n must be >= 0");
  const double ratio = m.value() / (0.5 * params.n_atoms);
  return n * params.omega - params.g * params.g * params.n_atoms / params.omega * ratio * ratio;
}

StateVector displaced_fock_state(const SpinBosonBasis& basis, const DickeParams& params, int n,
                                 SpinProjection m) {
  require_matching(basis, params, "displaced_fock_state");
  if (m.n_atoms() != basis.n_atoms()) {
    throw ValidationError("displaced_fock_state: spin projection built for a different N");
  }
  if (n < 0 || n > basis.fock_cutoff()) {
    throw ValidationError("displaced_fock_state: n outside the Fock cutoff");
  }
  const ComplexMatrix d =
      fock_displacement(basis.fock_cutoff(), Complex(displacement_amplitude(params, m), 0.0));
  ComplexVector v = ComplexVector::Zero(basis.dim());
  v.segment(basis.index(m.index(), 0), basis.fock_dim()) = d.col(n);
  // Truncation leaves a deficit of at most ~1e-8 in the norm of a safe column.
  return StateVector::normalized(basis, std::move(v));
}

GroundPair ground_pair(const SpinBosonBasis& basis, const DickeParams& params) {
  const int big_n = basis.n_atoms();
  return {displaced_fock_state(basis, params, 0, SpinProjection::from_index(big_n, big_n)),
          displaced_fock_state(basis, params, 0, SpinProjection::from_index(big_n, 0))};
}

StateVector noninteracting_ground(const SpinBosonBasis& basis) {
  const int big_n = basis.n_atoms();
  ComplexVector v = ComplexVector::Zero(basis.dim());
  for (int k = 0; k <= big_n; ++k) {
    const double log_amp = 0.5 * (std::lgamma(big_n + 1.0) - std::lgamma(k + 1.0) -
                                  std::lgamma(big_n - k + 1.0)) -
                           0.5 * big_n * std::log(2.0);
    v[basis.index(k, 0)] = ((k % 2 == 0) ? 1.0 : -1.0) * std::exp(log_amp);
  }
  return StateVector::normalized(basis, std::move(v));
}

}  // namespace dicke
