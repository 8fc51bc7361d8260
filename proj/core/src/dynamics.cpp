#include "dicke/dynamics.hpp"

#include "dicke/detail/assemble.hpp"
#include "dicke/errors.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <string>

namespace dicke {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseMatrix assemble_sparse(const SpinBosonBasis& basis, const DickeParams& p) {
  std::vector<Eigen::Triplet<double>> triplets;
  detail::for_each_hamiltonian_entry<double>(
      basis, p, [&](Eigen::Index r, Eigen::Index c, double v) { triplets.emplace_back(r, c, v); });
  SparseMatrix m(basis.dim(), basis.dim());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

// Pi e_i = sign[i] e_{partner[i]}.
struct ParityMap {
  std::vector<Eigen::Index> partner;
  std::vector<double> sign;
};

ParityMap parity_map(const SpinBosonBasis& basis) {
  ParityMap map;
  map.partner.resize(basis.dim());
  map.sign.resize(basis.dim());
  const double phase = spin_parity_phase(basis.n_atoms());
  for (int k = 0; k <= basis.n_atoms(); ++k) {
    for (int n = 0; n <= basis.fock_cutoff(); ++n) {
      const Eigen::Index i = basis.index(k, n);
      map.partner[i] = basis.index(basis.n_atoms() - k, n);
      map.sign[i] = phase * (n % 2 == 0 ? 1.0 : -1.0);
    }
  }
  return map;
}

double parity_of(const ComplexVector& psi, const ParityMap& map) {
  Complex sum = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    sum += std::conj(psi[map.partner[i]]) * map.sign[i] * psi[i];
  }
  return sum.real();
}

double jz_of(const ComplexVector& psi, const SpinBosonBasis& basis) {
  double sum = 0.0;
  for (int k = 0; k <= basis.n_atoms(); ++k) {
    const double m = basis.m_value(k);
    for (int n = 0; n <= basis.fock_cutoff(); ++n) sum += m * std::norm(psi[basis.index(k, n)]);
  }
  return sum;
}

double boundary_population(const ComplexVector& psi, const SpinBosonBasis& basis) {
  double sum = 0.0;
  for (int k = 0; k <= basis.n_atoms(); ++k) {
    sum += std::norm(psi[basis.index(k, basis.fock_cutoff())]);
  }
  return sum;
}

}  // namespace

RampSchedule RampSchedule::from_stages(double omega_x_0, double tau1, double omega_x_i,
                                       double gamma, int n_atoms, double t_f) {
  if (!(omega_x_0 > 0.0) || !(tau1 > 0.0) || !(omega_x_i > 0.0) || !(gamma > 0.0) ||
      n_atoms < 1) {
    throw ValidationError("RampSchedule: fields, rates and N must be positive");
  }
  if (!(omega_x_i <= omega_x_0)) {
    throw ValidationError("RampSchedule: switch field must not exceed the initial field");
  }
  RampSchedule s;
  s.omega_x_0 = omega_x_0;
  s.tau1 = tau1;
  s.omega_x_i = omega_x_i;
  s.t_i = tau1 * std::log(omega_x_0 / omega_x_i);
  s.gamma = gamma;
  s.tau2 = n_atoms / gamma;
  s.t_f = t_f;
  return s;
}

double RampSchedule::omega_x(double t) const {
  if (t <= t_i) return omega_x_0 * std::exp(-t / tau1);
  return omega_x_i * std::exp(-(t - t_i) / tau2);
}

void RampSchedule::validate(int n_atoms, double omega_xc) const {
  const bool finite = std::isfinite(omega_x_0) && std::isfinite(tau1) && std::isfinite(t_i) &&
                      std::isfinite(omega_x_i) && std::isfinite(tau2) && std::isfinite(gamma) &&
                      std::isfinite(t_f);
  if (!finite || !(omega_x_0 > 0.0) || !(tau1 > 0.0) || !(t_i >= 0.0) || !(omega_x_i > 0.0) ||
      !(tau2 > 0.0) || !(gamma > 0.0)) {
    throw ValidationError("RampSchedule: parameters must be finite and positive");
  }
  if (std::abs(omega_x_0 * std::exp(-t_i / tau1) - omega_x_i) > 1e-12 * omega_x_0) {
    throw ValidationError("RampSchedule: field is discontinuous at the stage switch");
  }
  if (std::abs(gamma * tau2 - n_atoms) > 1e-12 * n_atoms) {
    throw ValidationError("RampSchedule: gamma * tau2 must equal N");
  }
  if (!(t_f >= t_i)) throw ValidationError("RampSchedule: t_f must not precede t_i");
  if (!(omega_x_0 > omega_xc && omega_xc > omega_x_i)) {
    throw ValidationError("RampSchedule: requires omega_x(0) > omega_xc > omega_x_i");
  }
}

EvolutionResult propagate(const DickeParams& params, const RampSchedule& schedule,
                          const StateVector& psi0, std::span<const double> sample_times,
                          const PropagationOptions& options) {
  params.validate();
  const SpinBosonBasis& basis = psi0.basis();
  if (basis.n_atoms() != params.n_atoms) {
    throw ValidationError("propagate: state basis N does not match params N");
  }
  schedule.validate(params.n_atoms, critical_field(params));
  for (double t : sample_times) {
    if (!(t >= 0.0) || !(t <= schedule.t_f)) {
      throw ValidationError("propagate: sample times must lie in [0, t_f]");
    }
  }

  DickeParams static_part = params;
  static_part.omega_x = 0.0;
  const SparseMatrix h0 = assemble_sparse(basis, static_part);
  DickeParams transverse{params.n_atoms, 0.0, 1.0, 0.0, 0.0};
  const SparseMatrix jx2 = assemble_sparse(basis, transverse);  // Omega_x J_x with Omega_x = 1

  const Eigen::Index dim = basis.dim();
  Eigen::VectorXd work(dim);
  const OdeRhs rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    const double f = schedule.omega_x(t);
    const auto re = y.head(dim);
    const auto im = y.tail(dim);
    work.noalias() = h0 * im;
    work.noalias() += f * (jx2 * im);
    dydt.head(dim) = work;
    work.noalias() = h0 * re;
    work.noalias() += f * (jx2 * re);
    dydt.tail(dim) = -work;
  };

  Eigen::VectorXd y(2 * dim);
  y.head(dim) = psi0.amplitudes().real();
  y.tail(dim) = psi0.amplitudes().imag();

  const GroundPair pair = ground_pair(basis, params);
  const ParityMap map = parity_map(basis);

  EvolutionResult out;
  const std::size_t count = sample_times.size();
  out.times.reserve(count);
  ComplexVector psi(dim);
  const OdeObserver observer = [&](std::size_t, double t, const Eigen::VectorXd& state) {
    psi.real() = state.head(dim);
    psi.imag() = state.tail(dim);
    const double boundary = boundary_population(psi, basis);
    out.max_boundary_population = std::max(out.max_boundary_population, boundary);
    if (boundary > options.truncation_threshold) {
      throw NumericalError("propagate: population " + std::to_string(boundary) +
                           " at the Fock cutoff n_max = " + std::to_string(basis.fock_cutoff()) +
                           " exceeds the truncation threshold at t = " + std::to_string(t));
    }
    const MultipletProjection proj = project_onto_multiplet(psi, pair);
    out.times.push_back(t);
    out.jz.push_back(jz_of(psi, basis));
    out.parity.push_back(parity_of(psi, map));
    out.norm.push_back(psi.norm());
    out.c_plus.push_back(proj.c_plus);
    out.c_minus.push_back(proj.c_minus);
    out.leakage.push_back(proj.leakage);
  };

  OdeOptions ode;
  ode.rtol = options.rtol;
  ode.atol = options.atol;
  ode.fixed_step = options.fixed_step;
  ode.max_step = options.max_step;
  out.stats = integrate_dop853(rhs, 0.0, y, sample_times, observer, ode);

  if (count > 0) {
    ComplexVector last(dim);
    last.real() = y.head(dim);
    last.imag() = y.tail(dim);
    out.final_state = StateVector::normalized(basis, last);
  }
  return out;
}

MultipletProjection project_onto_multiplet(const ComplexVector& amplitudes,
                                           const GroundPair& pair) {
  if (amplitudes.size() != pair.plus.basis().dim()) {
    throw ValidationError("project_onto_multiplet: dimension mismatch");
  }
  MultipletProjection out;
  out.c_plus = pair.plus.amplitudes().dot(amplitudes);
  out.c_minus = pair.minus.amplitudes().dot(amplitudes);
  out.leakage = 1.0 - std::norm(out.c_plus) - std::norm(out.c_minus);
  return out;
}

MultipletProjection project_onto_multiplet(const StateVector& state, const GroundPair& pair) {
  if (!(state.basis() == pair.plus.basis())) {
    throw ValidationError("project_onto_multiplet: basis mismatch");
  }
  return project_onto_multiplet(state.amplitudes(), pair);
}

double measure_jz(const StateVector& state) { return jz_of(state.amplitudes(), state.basis()); }

double measure_parity(const StateVector& state) {
  return parity_of(state.amplitudes(), parity_map(state.basis()));
}

std::vector<double> uniform_samples(double t0, double t1, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {t1};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = t1;
  return out;
}

}  // namespace dicke
