// model.hpp: Dicke Hamiltonian H = H_D + delta J_z and its exactly solvable
// Omega_x = 0 limit (displaced Fock states).
//
// Units: the spin-boson coupling g sets the frequency scale (g = 1 by
// default); times are in units of 1/g. g is kept as a field only so that the
// non-interacting limit g = 0 can be expressed.

#pragma once

#include "dicke/hilbert.hpp"

namespace dicke {

struct DickeParams {
  int n_atoms = 1;
  double omega = 1.0;    // boson frequency
  double omega_x = 0.0;  // transverse field
  double delta = 0.0;    // longitudinal (symmetry-breaking) field
  double g = 1.0;        // spin-boson coupling

  // omega > 0, N >= 1, omega_x >= 0, g >= 0, all finite.
  void validate() const;
};

// Half-integer spin projection m in -N/2..N/2, stored as m_index = m + N/2.
class SpinProjection {
 public:
  static SpinProjection from_index(int n_atoms, int m_index);
  // Accepts m only if m + N/2 is an integer in range.
  static SpinProjection from_value(int n_atoms, double m);

  int n_atoms() const noexcept { return n_atoms_; }
  int index() const noexcept { return m_index_; }
  double value() const noexcept { return m_index_ - 0.5 * n_atoms_; }

 private:
  SpinProjection(int n_atoms, int m_index) : n_atoms_(n_atoms), m_index_(m_index) {}
  int n_atoms_;
  int m_index_;
};

// Omega_{x,c} = 4 g^2 / omega.
double critical_field(const DickeParams& params);

HermitianOperator build_hd(const SpinBosonBasis& basis, const DickeParams& params);
HermitianOperator build_h(const SpinBosonBasis& basis, const DickeParams& params);

// Displacement of |N/2, m>|n> at Omega_x = 0: alpha_m = -(2g / (omega sqrt N)) m.
double displacement_amplitude(const DickeParams& params, SpinProjection m);

// E_{n,m} = n omega - (g^2 N / omega) (m / (N/2))^2.
double zero_field_energy(const DickeParams& params, int n, SpinProjection m);

// |Phi_{n,m}> = D(alpha_m) |N/2, m>|n>.
StateVector displaced_fock_state(const SpinBosonBasis& basis, const DickeParams& params,
                                 int n, SpinProjection m);

struct GroundPair {
  StateVector plus;   // D(-sqrt(N) g/omega) |N/2, +N/2>|0>
  StateVector minus;  // D(+sqrt(N) g/omega) |N/2, -N/2>|0>
};

// Degenerate Omega_x = 0 ground states (Omega_x in params is ignored).
GroundPair ground_pair(const SpinBosonBasis& basis, const DickeParams& params);

// Product of single-spin sigma^x = -1 eigenstates times the boson vacuum:
// the J_x = -N/2 eigenvector, phase fixed so the m = -N/2 amplitude is
// positive. Amplitudes (-1)^k sqrt(C(N,k)) / 2^{N/2} on |N/2, k - N/2>|0>.
StateVector noninteracting_ground(const SpinBosonBasis& basis);

}  // namespace dicke
