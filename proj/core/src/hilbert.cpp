#include "dicke/hilbert.hpp"

#include "dicke/errors.hpp"

#include <cmath>
#include <string>

namespace dicke {

SpinBosonBasis::SpinBosonBasis(int n_atoms, int fock_cutoff, Eigen::Index max_dim)
    : n_atoms_(n_atoms), fock_cutoff_(fock_cutoff) {
  if (n_atoms < 1) {
    throw ValidationError("SpinBosonBasis: N must be >= 1");
  }
  if (fock_cutoff < 0) {
    throw ValidationError("SpinBosonBasis: n_max must be >= 0");
  }
  if (dim() > max_dim) {
    throw ValidationError("SpinBosonBasis: dimension " + std::to_string(dim()) +
                          " exceeds the memory cap " + std::to_string(max_dim));
  }
}

Eigen::Index SpinBosonBasis::index(int m_index, int n) const {
  if (m_index < 0 || m_index > n_atoms_ || n < 0 || n > fock_cutoff_) {
    throw ValidationError("SpinBosonBasis::index: (m_index, n) out of range");
  }
  return static_cast<Eigen::Index>(m_index) * fock_dim() + n;
}

std::pair<int, int> SpinBosonBasis::components(Eigen::Index flat) const {
  if (flat < 0 || flat >= dim()) {
    throw ValidationError("SpinBosonBasis::components: index out of range");
  }
  return {static_cast<int>(flat / fock_dim()), static_cast<int>(flat % fock_dim())};
}

SpinBosonBasis build_basis(int n_atoms, int fock_cutoff, Eigen::Index max_dim) {
  return SpinBosonBasis(n_atoms, fock_cutoff, max_dim);
}

// ---------------------------------------------------------------- operators

namespace {

void require_same_basis(const SpinBosonBasis& a, const SpinBosonBasis& b, const char* where) {
  if (!(a == b)) {
    throw ValidationError(std::string(where) + ": basis mismatch");
  }
}

void require_shape(const SpinBosonBasis& basis, const ComplexMatrix& m, const char* where) {
  if (m.rows() != basis.dim() || m.cols() != basis.dim()) {
    throw ValidationError(std::string(where) + ": matrix shape does not match basis");
  }
}

}  // namespace

Operator::Operator(SpinBosonBasis basis, ComplexMatrix matrix)
    : basis_(basis), matrix_(std::move(matrix)) {
  require_shape(basis_, matrix_, "Operator");
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_basis(lhs.basis(), rhs.basis(), "operator*");
  return {lhs.basis(), lhs.matrix() * rhs.matrix()};
}

Operator operator+(const Operator& lhs, const Operator& rhs) {
  require_same_basis(lhs.basis(), rhs.basis(), "operator+");
  return {lhs.basis(), lhs.matrix() + rhs.matrix()};
}

Operator operator-(const Operator& lhs, const Operator& rhs) {
  require_same_basis(lhs.basis(), rhs.basis(), "operator-");
  return {lhs.basis(), lhs.matrix() - rhs.matrix()};
}

Operator operator*(Complex scale, const Operator& op) {
  return {op.basis(), scale * op.matrix()};
}

Operator commutator(const Operator& lhs, const Operator& rhs) {
  return lhs * rhs - rhs * lhs;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(SpinBosonBasis basis, ComplexMatrix matrix)
    : basis_(basis), matrix_(std::move(matrix)) {
  require_shape(basis_, matrix_, "HermitianOperator");
  const double asym = max_abs(matrix_ - matrix_.adjoint());
  if (asym > kTolerance) {
    throw ValidationError("HermitianOperator: matrix is not Hermitian (max |A - A^dag| = " +
                          std::to_string(asym) + ")");
  }
}

// -------------------------------------------------------------------- states

StateVector::StateVector(SpinBosonBasis basis, ComplexVector amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != basis_.dim()) {
    throw ValidationError("StateVector: length does not match basis dimension");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
    throw ValidationError("StateVector: amplitudes are not normalized");
  }
}

StateVector StateVector::normalized(SpinBosonBasis basis, ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("StateVector::normalized: vector has zero or non-finite norm");
  }
  amplitudes /= n;
  return {basis, std::move(amplitudes)};
}

Complex StateVector::overlap(const StateVector& other) const {
  require_same_basis(basis_, other.basis_, "StateVector::overlap");
  return amplitudes_.dot(other.amplitudes_);
}

StateVector basis_state(const SpinBosonBasis& basis, int m_index, int n) {
  ComplexVector v = ComplexVector::Zero(basis.dim());
  v[basis.index(m_index, n)] = 1.0;
  return {basis, std::move(v)};
}

// ------------------------------------------------------------ building blocks

Eigen::MatrixXd spin_jz_block(int n_atoms) {
  const double j = 0.5 * n_atoms;
  Eigen::MatrixXd jz = Eigen::MatrixXd::Zero(n_atoms + 1, n_atoms + 1);
  for (int k = 0; k <= n_atoms; ++k) {
    jz(k, k) = k - j;
  }
  return jz;
}

Eigen::MatrixXd spin_jplus_block(int n_atoms) {
  const double j = 0.5 * n_atoms;
  Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(n_atoms + 1, n_atoms + 1);
  for (int k = 0; k < n_atoms; ++k) {
    const double m = k - j;
    jp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  return jp;
}

Eigen::MatrixXd fock_annihilation_block(int fock_cutoff) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(fock_cutoff + 1, fock_cutoff + 1);
  for (int n = 1; n <= fock_cutoff; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

ComplexMatrix embed_spin(const SpinBosonBasis& basis, const ComplexMatrix& spin) {
  const int fd = basis.fock_dim();
  ComplexMatrix out = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (int r = 0; r < spin.rows(); ++r) {
    for (int c = 0; c < spin.cols(); ++c) {
      if (spin(r, c) == Complex{}) continue;
      for (int n = 0; n < fd; ++n) {
        out(static_cast<Eigen::Index>(r) * fd + n, static_cast<Eigen::Index>(c) * fd + n) = spin(r, c);
      }
    }
  }
  return out;
}

ComplexMatrix embed_fock(const SpinBosonBasis& basis, const ComplexMatrix& fock) {
  const int fd = basis.fock_dim();
  ComplexMatrix out = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (int k = 0; k < basis.spin_dim(); ++k) {
    out.block(static_cast<Eigen::Index>(k) * fd, static_cast<Eigen::Index>(k) * fd, fd, fd) = fock;
  }
  return out;
}

HermitianOperator op_jz(const SpinBosonBasis& basis) {
  return {basis, embed_spin(basis, spin_jz_block(basis.n_atoms()).cast<Complex>())};
}

Operator op_jplus(const SpinBosonBasis& basis) {
  return {basis, embed_spin(basis, spin_jplus_block(basis.n_atoms()).cast<Complex>())};
}

Operator op_jminus(const SpinBosonBasis& basis) {
  return {basis, embed_spin(basis, spin_jplus_block(basis.n_atoms()).transpose().cast<Complex>())};
}

HermitianOperator op_jx(const SpinBosonBasis& basis) {
  const Eigen::MatrixXd jp = spin_jplus_block(basis.n_atoms());
  const Eigen::MatrixXd jx = 0.5 * (jp + jp.transpose());
  return {basis, embed_spin(basis, jx.cast<Complex>())};
}

HermitianOperator op_jy(const SpinBosonBasis& basis) {
  const Eigen::MatrixXd jp = spin_jplus_block(basis.n_atoms());
  // (J+ - J-) / 2i
  const ComplexMatrix jy = (jp - jp.transpose()).cast<Complex>() / Complex(0.0, 2.0);
  return {basis, embed_spin(basis, jy)};
}

BosonOperators op_boson(const SpinBosonBasis& basis) {
  const Eigen::MatrixXd a = fock_annihilation_block(basis.fock_cutoff());
  const Eigen::MatrixXd num = a.transpose() * a;
  return {Operator(basis, embed_fock(basis, a.cast<Complex>())),
          Operator(basis, embed_fock(basis, a.transpose().cast<Complex>())),
          HermitianOperator(basis, embed_fock(basis, num.cast<Complex>()))};
}

double spin_parity_phase(int n_atoms) noexcept {
  return (n_atoms % 2 == 0) ? 1.0 : -1.0;
}

HermitianOperator op_parity(const SpinBosonBasis& basis) {
  const int big_n = basis.n_atoms();
  const double phase = spin_parity_phase(big_n);
  ComplexMatrix p = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (int k = 0; k <= big_n; ++k) {
    for (int n = 0; n <= basis.fock_cutoff(); ++n) {
      const double boson = (n % 2 == 0) ? 1.0 : -1.0;
      p(basis.index(big_n - k, n), basis.index(k, n)) = phase * boson;
    }
  }
  return {basis, std::move(p)};
}

ComplexMatrix fock_displacement(int fock_cutoff, Complex alpha) {
  if (std::norm(alpha) > 0.25 * fock_cutoff) {
    throw ValidationError("displacement: |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                          " exceeds n_max/4 = " + std::to_string(0.25 * fock_cutoff) +
                          "; raise the Fock cutoff");
  }
  if (alpha == Complex{}) {
    return ComplexMatrix::Identity(fock_cutoff + 1, fock_cutoff + 1);
  }
  const ComplexMatrix a = fock_annihilation_block(fock_cutoff).cast<Complex>();
  // exp(G) with G anti-Hermitian; K = iG is Hermitian and exp(G) = exp(-iK).
  const ComplexMatrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  const ComplexMatrix k = Complex(0.0, 1.0) * generator;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(k);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("displacement: eigendecomposition failed");
  }
  const ComplexVector phases =
      (Complex(0.0, -1.0) * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Operator displacement_operator(const SpinBosonBasis& basis, Complex alpha) {
  return {basis, embed_fock(basis, fock_displacement(basis.fock_cutoff(), alpha))};
}

// --------------------------------------------------------------- expectation

double expectation(const HermitianOperator& op, const StateVector& state) {
  require_same_basis(op.basis(), state.basis(), "expectation");
  // Imaginary part is O(1e-16) for a Hermitian matrix and is dropped.
  return state.amplitudes().dot(op.matrix() * state.amplitudes()).real();
}

Complex expectation(const Operator& op, const StateVector& state) {
  require_same_basis(op.basis(), state.basis(), "expectation");
  return state.amplitudes().dot(op.matrix() * state.amplitudes());
}

ComplexVector act(const Operator& op, const StateVector& state) {
  require_same_basis(op.basis(), state.basis(), "act");
  return op.matrix() * state.amplitudes();
}

ComplexVector act(const HermitianOperator& op, const StateVector& state) {
  require_same_basis(op.basis(), state.basis(), "act");
  return op.matrix() * state.amplitudes();
}

StateVector apply(const Operator& op, const StateVector& state) {
  return StateVector::normalized(state.basis(), act(op, state));
}

}  // namespace dicke
