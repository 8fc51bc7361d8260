#include "dicke/demkov.hpp"

#include "dicke/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dicke {

namespace {

constexpr double kResidueTolerance = 1e-8;
constexpr Complex kI{0.0, 1.0};

void require_closed_form(const DemkovParams& p, const char* where) {
  p.validate();
  if (!(p.delta_i > 0.0)) throw ValidationError(std::string(where) + ": requires delta_i > 0");
}

void require_rate(int n_atoms, double gamma, const char* where) {
  if (n_atoms < 1 || !(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ValidationError(std::string(where) + ": requires N >= 1 and gamma > 0");
  }
}

double tanh_argument(int n_atoms, double delta, double gamma) {
  return std::numbers::pi * n_atoms * delta / (2.0 * gamma);
}

struct Coefficients {
  Complex a1;
  Complex a2;
  double prefactor;  // (pi / 2 sqrt2) x / cosh(phase)
};

Coefficients coefficients(const DemkovParams& p) {
  const double x = p.x();
  const Complex nu = p.nu();
  const Complex j_nu = bessel_j(nu, x);
  const Complex j_mnu = bessel_j(-nu, x);
  const Complex j_nu_m1 = bessel_j(nu - 1.0, x);
  const Complex j_1_mnu = bessel_j(1.0 - nu, x);
  return {j_1_mnu - kI * j_mnu, j_nu_m1 + kI * j_nu,
          std::numbers::pi / (2.0 * std::numbers::sqrt2) * x / std::cosh(p.phase())};
}

Complex evaluate(const DemkovParams& p, const Coefficients& c, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ValidationError("amplitude_cplus: requires finite t >= 0");
  }
  const double z = p.x() * std::exp(-p.gamma * t);
  const Complex nu = p.nu();
  return c.prefactor * std::exp(-p.gamma * t / 2.0) *
         (c.a1 * bessel_j(nu, z) + c.a2 * bessel_j(-nu, z));
}

Complex final_population_complex(const DemkovParams& p) {
  require_closed_form(p, "final_population");
  const double x = p.x();
  const Complex nu = p.nu();
  const Complex bracket =
      bessel_j(nu, x) * bessel_j(-nu, x) - bessel_j(nu - 1.0, x) * bessel_j(1.0 - nu, x);
  return 0.5 + kI * (std::numbers::pi / 4.0) * (x / std::cosh(p.phase())) * bracket;
}

}  // namespace

double DemkovParams::phase() const { return tanh_argument(n_atoms, delta, gamma); }

void DemkovParams::validate() const {
  if (n_atoms < 1) throw ValidationError("DemkovParams: N must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("DemkovParams: gamma must be positive and finite");
  }
  if (!(delta_i >= 0.0) || !std::isfinite(delta_i)) {
    throw ValidationError("DemkovParams: delta_i must be non-negative and finite");
  }
  if (!std::isfinite(delta)) throw ValidationError("DemkovParams: delta must be finite");
}

Complex amplitude_cplus(const DemkovParams& params, double t) {
  require_closed_form(params, "amplitude_cplus");
  return evaluate(params, coefficients(params), t);
}

std::vector<Complex> amplitude_cplus(const DemkovParams& params, std::span<const double> times) {
  require_closed_form(params, "amplitude_cplus");
  const Coefficients c = coefficients(params);
  std::vector<Complex> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(evaluate(params, c, t));
  return out;
}

double final_population_residue(const DemkovParams& params) {
  return final_population_complex(params).imag();
}

double final_population(const DemkovParams& params) {
  const Complex value = final_population_complex(params);
  if (std::abs(value.imag()) > kResidueTolerance) {
    throw NumericalError("final_population: imaginary residue " + std::to_string(value.imag()) +
                         " exceeds tolerance");
  }
  return value.real();
}

double jz_tanh(int n_atoms, double delta, double gamma) {
  require_rate(n_atoms, gamma, "jz_tanh");
  return -0.5 * n_atoms * std::tanh(tanh_argument(n_atoms, delta, gamma));
}

double jz_tanh_derivative(int n_atoms, double delta, double gamma) {
  require_rate(n_atoms, gamma, "jz_tanh_derivative");
  const double c = std::cosh(tanh_argument(n_atoms, delta, gamma));
  return -0.5 * n_atoms * (std::numbers::pi * n_atoms / (2.0 * gamma)) / (c * c);
}

double signal_std_dev(int n_atoms, double delta, double gamma) {
  require_rate(n_atoms, gamma, "signal_std_dev");
  return n_atoms / (2.0 * std::cosh(tanh_argument(n_atoms, delta, gamma)));
}

double signal_variance(int n_atoms, double delta, double gamma) {
  const double s = signal_std_dev(n_atoms, delta, gamma);
  return s * s;
}

double uncertainty_deltabar(int n_atoms, double delta, double gamma) {
  require_rate(n_atoms, gamma, "uncertainty_deltabar");
  return 2.0 * gamma / (std::numbers::pi * n_atoms) *
         std::cosh(tanh_argument(n_atoms, delta, gamma));
}

double invert_jz_tanh(int n_atoms, double jz, double gamma) {
  require_rate(n_atoms, gamma, "invert_jz_tanh");
  const double ratio = -2.0 * jz / n_atoms;
  if (!(std::abs(ratio) < 1.0)) {
    throw ValidationError("invert_jz_tanh: |<J_z>| must be below N/2");
  }
  return 2.0 * gamma / (std::numbers::pi * n_atoms) * std::atanh(ratio);
}

TwoLevelTrajectory two_level_ode_reference(const DemkovParams& params,
                                           std::span<const double> times, double rtol,
                                           double atol) {
  params.validate();
  const double bias = 0.5 * params.n_atoms * params.delta;
  const OdeRhs rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    // y = (Re c+, Im c+, Re c-, Im c-); dc/dt = -i M c.
    const double d = 0.5 * params.delta_i * std::exp(-params.gamma * t);
    dydt[0] = bias * y[1] + d * y[3];
    dydt[1] = -(bias * y[0] + d * y[2]);
    dydt[2] = -bias * y[3] + d * y[1];
    dydt[3] = bias * y[2] - d * y[0];
  };
  Eigen::VectorXd y(4);
  y << 1.0 / std::numbers::sqrt2, 0.0, -1.0 / std::numbers::sqrt2, 0.0;

  TwoLevelTrajectory out;
  out.times.reserve(times.size());
  const OdeObserver observer = [&](std::size_t, double t, const Eigen::VectorXd& s) {
    const double norm = s.squaredNorm();
    if (std::abs(norm - 1.0) > 1e-10) {
      throw NumericalError("two_level_ode_reference: norm drifted to " + std::to_string(norm));
    }
    out.times.push_back(t);
    out.c_plus.emplace_back(s[0], s[1]);
    out.c_minus.emplace_back(s[2], s[3]);
  };
  OdeOptions options;
  options.rtol = rtol;
  options.atol = atol;
  out.stats = integrate_dop853(rhs, 0.0, y, times, observer, options);
  return out;
}

}  // namespace dicke
