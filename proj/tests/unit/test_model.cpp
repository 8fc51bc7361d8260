#include "dicke/errors.hpp"
#include "dicke/model.hpp"
#include "dicke/spectrum.hpp"

#include <doctest.h>

#include <cmath>

using namespace dicke;

TEST_CASE("critical field is 4 g^2 / omega") {
  CHECK(critical_field({4, 10.0, 0.0, 0.0, 1.0}) == doctest::Approx(0.4));
  CHECK(critical_field({4, 3.0, 0.0, 0.0, 2.0}) == doctest::Approx(16.0 / 3.0));
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(DickeParams({0, 1.0, 0.0, 0.0, 1.0}).validate(), ValidationError);
  CHECK_THROWS_AS(DickeParams({1, 0.0, 0.0, 0.0, 1.0}).validate(), ValidationError);
  CHECK_THROWS_AS(DickeParams({1, 1.0, -1.0, 0.0, 1.0}).validate(), ValidationError);
  CHECK_THROWS_AS(DickeParams({1, 1.0, 0.0, NAN, 1.0}).validate(), ValidationError);
  CHECK_THROWS_AS(SpinProjection::from_value(3, 1.0), ValidationError);
  CHECK(SpinProjection::from_value(3, 1.5).index() == 3);
}

TEST_CASE("displaced Fock states diagonalize H_D at zero transverse field") {
  for (int n_atoms : {1, 2, 3, 4}) {
    for (double omega : {3.0, 6.0}) {
      const DickeParams p{n_atoms, omega, 0.0, 0.0, 1.0};
      const SpinBosonBasis b(n_atoms, default_fock_cutoff(p) + 10);
      const HermitianOperator h = build_hd(b, p);
      for (int k = 0; k <= n_atoms; ++k) {
        const auto m = SpinProjection::from_index(n_atoms, k);
        for (int n = 0; n <= 3; ++n) {
          const StateVector phi = displaced_fock_state(b, p, n, m);
          const double e = zero_field_energy(p, n, m);
          CHECK((act(h, phi) - e * phi.amplitudes()).norm() < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("displaced Fock states are orthonormal") {
  const DickeParams p{4, 3.0, 0.0, 0.0, 1.0};
  const SpinBosonBasis b(4, default_fock_cutoff(p));
  std::vector<StateVector> states;
  for (int k = 0; k <= 4; ++k) {
    for (int n = 0; n <= 3; ++n) {
      states.push_back(displaced_fock_state(b, p, n, SpinProjection::from_index(4, k)));
    }
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      CHECK(std::abs(states[i].overlap(states[j]) - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("ground pair: polarized, degenerate, and split by the bias exactly") {
  for (int n_atoms : {2, 4, 8}) {
    const DickeParams p{n_atoms, 6.0, 0.0, 0.0, 1.0};
    const SpinBosonBasis b(n_atoms, default_fock_cutoff(p));
    const GroundPair pair = ground_pair(b, p);
    const HermitianOperator jz = op_jz(b);
    CHECK(expectation(jz, pair.plus) == doctest::Approx(0.5 * n_atoms).epsilon(1e-12));
    CHECK(expectation(jz, pair.minus) == doctest::Approx(-0.5 * n_atoms).epsilon(1e-12));
    const double e0 = -n_atoms * p.g * p.g / p.omega;
    CHECK(expectation(build_hd(b, p), pair.plus) == doctest::Approx(e0).epsilon(1e-9));
    CHECK(expectation(build_hd(b, p), pair.minus) == doctest::Approx(e0).epsilon(1e-9));
    const double delta = 3e-3;
    DickeParams biased = p;
    biased.delta = delta;
    const double shift_plus = expectation(build_h(b, biased), pair.plus) - e0;
    const double shift_minus = expectation(build_h(b, biased), pair.minus) - e0;
    CHECK(shift_plus == doctest::Approx(0.5 * n_atoms * delta).epsilon(1e-6));
    CHECK(shift_minus == doctest::Approx(-0.5 * n_atoms * delta).epsilon(1e-6));
  }
}

TEST_CASE("J_x^M cannot connect the ground pair below order N") {
  for (int n_atoms = 1; n_atoms <= 6; ++n_atoms) {
    const DickeParams p{n_atoms, 4.0, 0.0, 0.0, 1.0};
    const SpinBosonBasis b(n_atoms, default_fock_cutoff(p));
    const GroundPair pair = ground_pair(b, p);
    const ComplexMatrix jx = op_jx(b).matrix();
    ComplexVector v = pair.minus.amplitudes();
    for (int power = 1; power <= n_atoms; ++power) {
      v = jx * v;
      const double element = std::abs(pair.plus.amplitudes().dot(v));
      if (power < n_atoms) {
        CHECK(element < 1e-10);
      } else {
        CHECK(element > 1e-3);  // the N-th power flips every spin
      }
    }
  }
}
