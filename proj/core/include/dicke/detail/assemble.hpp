#pragma once

#include "dicke/hilbert.hpp"
#include "dicke/model.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace dicke::detail {

// Visits every nonzero of the real symmetric Dicke Hamiltonian; both (r,c)
// and (c,r) are emitted for off-diagonal entries. Real selects the precision
// used for the matrix elements.
template <class Real, class Sink>
void for_each_hamiltonian_entry(const SpinBosonBasis& basis, const DickeParams& p, Sink&& sink) {
  using std::sqrt;
  const int big_n = basis.n_atoms();
  const int n_max = basis.fock_cutoff();
  const Real j = Real(big_n) / 2;
  const Real coupling = 2 * Real(p.g) / sqrt(Real(big_n));
  for (int k = 0; k <= big_n; ++k) {
    const Real m = Real(k) - j;
    for (int n = 0; n <= n_max; ++n) {
      const Eigen::Index row = basis.index(k, n);
      const Real diag = Real(p.omega) * n + Real(p.delta) * m;
      if (diag != Real(0)) sink(row, row, diag);
      if (n < n_max && p.g != 0.0 && m != Real(0)) {
        const Real v = coupling * m * sqrt(Real(n + 1));
        const Eigen::Index col = basis.index(k, n + 1);
        sink(row, col, v);
        sink(col, row, v);
      }
      if (k < big_n && p.omega_x != 0.0) {
        const Real v = Real(p.omega_x) / 2 * sqrt(j * (j + 1) - m * (m + 1));
        const Eigen::Index col = basis.index(k + 1, n);
        sink(row, col, v);
        sink(col, row, v);
      }
    }
  }
}

template <class Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> dense_hamiltonian(const SpinBosonBasis& basis,
                                                                      const DickeParams& p) {
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> h =
      Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(basis.dim(), basis.dim());
  for_each_hamiltonian_entry<Real>(basis, p,
                                   [&](Eigen::Index r, Eigen::Index c, Real v) { h(r, c) += v; });
  return h;
}

}  // namespace dicke::detail
