// hilbert.hpp: N collective spins (j = N/2) coupled to one truncated bosonic mode.
//
// Basis ordering is m-major: flat = m_index * (n_max + 1) + n, where
// m_index = m + N/2 runs over 0..N and n over 0..n_max.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <utility>

namespace dicke {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Dense complex storage: 3000^2 * 16 bytes = 144 MB per operator.
inline constexpr Eigen::Index kDefaultMaxDim = 3000;

class SpinBosonBasis {
 public:
  SpinBosonBasis(int n_atoms, int fock_cutoff, Eigen::Index max_dim = kDefaultMaxDim);

  int n_atoms() const noexcept { return n_atoms_; }
  double j() const noexcept { return 0.5 * n_atoms_; }
  int fock_cutoff() const noexcept { return fock_cutoff_; }
  int spin_dim() const noexcept { return n_atoms_ + 1; }
  int fock_dim() const noexcept { return fock_cutoff_ + 1; }
  Eigen::Index dim() const noexcept {
    return static_cast<Eigen::Index>(spin_dim()) * fock_dim();
  }

  // Spin projection m for a given m_index (m = m_index - N/2).
  double m_value(int m_index) const noexcept { return m_index - j(); }

  Eigen::Index index(int m_index, int n) const;
  std::pair<int, int> components(Eigen::Index flat) const;

  bool operator==(const SpinBosonBasis& other) const noexcept {
    return n_atoms_ == other.n_atoms_ && fock_cutoff_ == other.fock_cutoff_;
  }

 private:
  int n_atoms_;
  int fock_cutoff_;
};

SpinBosonBasis build_basis(int n_atoms, int fock_cutoff,
                           Eigen::Index max_dim = kDefaultMaxDim);

// General (not necessarily Hermitian) operator, e.g. a or D(alpha).
class Operator {
 public:
  Operator(SpinBosonBasis basis, ComplexMatrix matrix);

  const SpinBosonBasis& basis() const noexcept { return basis_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  Operator adjoint() const { return {basis_, matrix_.adjoint()}; }

 private:
  SpinBosonBasis basis_;
  ComplexMatrix matrix_;
};

Operator operator*(const Operator& lhs, const Operator& rhs);
Operator operator+(const Operator& lhs, const Operator& rhs);
Operator operator-(const Operator& lhs, const Operator& rhs);
Operator operator*(Complex scale, const Operator& op);
Operator commutator(const Operator& lhs, const Operator& rhs);
double max_abs(const ComplexMatrix& m);

// Hermitian within kTolerance (entrywise, absolute); checked on construction.
class HermitianOperator {
 public:
  static constexpr double kTolerance = 1e-12;

  HermitianOperator(SpinBosonBasis basis, ComplexMatrix matrix);

  const SpinBosonBasis& basis() const noexcept { return basis_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Operator as_operator() const { return {basis_, matrix_}; }

 private:
  SpinBosonBasis basis_;
  ComplexMatrix matrix_;
};

// Normalized amplitude vector. The constructor rejects vectors whose norm
// deviates from one by more than kNormTolerance; use normalized() to rescale.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-10;

  StateVector(SpinBosonBasis basis, ComplexVector amplitudes);
  static StateVector normalized(SpinBosonBasis basis, ComplexVector amplitudes);

  const SpinBosonBasis& basis() const noexcept { return basis_; }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

  double norm() const { return amplitudes_.norm(); }
  // <this|other>
  Complex overlap(const StateVector& other) const;

 private:
  SpinBosonBasis basis_;
  ComplexVector amplitudes_;
};

// |j, m> |n> product state.
StateVector basis_state(const SpinBosonBasis& basis, int m_index, int n);

HermitianOperator op_jz(const SpinBosonBasis& basis);
HermitianOperator op_jx(const SpinBosonBasis& basis);
HermitianOperator op_jy(const SpinBosonBasis& basis);
Operator op_jplus(const SpinBosonBasis& basis);
Operator op_jminus(const SpinBosonBasis& basis);

struct BosonOperators {
  Operator a;
  Operator a_dag;
  HermitianOperator number;
};

// Ladder operators truncated at n_max: a_dag |n_max> = 0.
BosonOperators op_boson(const SpinBosonBasis& basis);

// Phase picked up by |j,m> -> |j,-m> under the spin part of the parity.
//
// Convention: Pi_s = (-1)^N sigma_1^x ... sigma_N^x. With Condon-Shortley
// Dicke states the bare sigma^x product maps |j,m> to +|j,-m>; the extra
// (-1)^N = (-1)^{2j} makes the x-polarized state |-...->_x parity-even for
// every N. Full parity: Pi |j,m>|n> = (-1)^N (-1)^n |j,-m>|n>.
double spin_parity_phase(int n_atoms) noexcept;
HermitianOperator op_parity(const SpinBosonBasis& basis);

// D(alpha) = exp(alpha a_dag - conj(alpha) a) on the Fock factor, obtained by
// diagonalizing the Hermitian generator i(alpha a_dag - conj(alpha) a).
// Requires |alpha|^2 <= n_max / 4 so that the truncation is harmless on the
// low-n columns.
ComplexMatrix fock_displacement(int fock_cutoff, Complex alpha);
Operator displacement_operator(const SpinBosonBasis& basis, Complex alpha);

double expectation(const HermitianOperator& op, const StateVector& state);
Complex expectation(const Operator& op, const StateVector& state);

// Raw product op|psi> (not normalized).
ComplexVector act(const Operator& op, const StateVector& state);
ComplexVector act(const HermitianOperator& op, const StateVector& state);
// op|psi> / ||op|psi>||; throws if the image vanishes.
StateVector apply(const Operator& op, const StateVector& state);

// Spin-only (N+1)x(N+1) and Fock-only (n_max+1)x(n_max+1) building blocks,
// embedded into the product space as spin (x) 1 and 1 (x) fock.
Eigen::MatrixXd spin_jz_block(int n_atoms);
Eigen::MatrixXd spin_jplus_block(int n_atoms);
Eigen::MatrixXd fock_annihilation_block(int fock_cutoff);
ComplexMatrix embed_spin(const SpinBosonBasis& basis, const ComplexMatrix& spin);
ComplexMatrix embed_fock(const SpinBosonBasis& basis, const ComplexMatrix& fock);

}  // namespace dicke
