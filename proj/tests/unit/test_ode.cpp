#include "dicke/errors.hpp"
#include "dicke/ode.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace dicke;

namespace {

void oscillator(double, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
  dydt[0] = y[1];
  dydt[1] = -y[0];
}

double oscillator_error(double step) {
  Eigen::VectorXd y(2);
  y << 1.0, 0.0;
  OdeOptions opts;
  opts.fixed_step = step;
  const std::vector<double> samples = {4.0};
  integrate_dop853(oscillator, 0.0, y, samples, nullptr, opts);
  return std::hypot(y[0] - std::cos(4.0), y[1] + std::sin(4.0));
}

}  // namespace

TEST_CASE("harmonic oscillator follows cos/sin at every sample") {
  Eigen::VectorXd y(2);
  y << 1.0, 0.0;
  std::vector<double> samples;
  for (int i = 0; i <= 50; ++i) samples.push_back(0.4 * i);
  double worst = 0.0;
  std::size_t seen = 0;
  integrate_dop853(oscillator, 0.0, y, samples,
                   [&](std::size_t index, double t, const Eigen::VectorXd& state) {
                     CHECK(index == seen++);
                     CHECK(t == samples[index]);  // sample times are hit exactly
                     worst = std::max(worst, std::abs(state[0] - std::cos(t)));
                     worst = std::max(worst, std::abs(state[1] + std::sin(t)));
                   });
  CHECK(seen == samples.size());
  CHECK(worst < 1e-9);
}

TEST_CASE("Van der Pol oscillator matches the reference DOP853 implementation") {
  // Frozen from scipy.integrate.solve_ivp(method="DOP853", rtol=1e-10, atol=1e-12).
  const double mu = 1.0;
  const OdeRhs rhs = [mu](double, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    dydt[0] = y[1];
    dydt[1] = mu * (1.0 - y[0] * y[0]) * y[1] - y[0];
  };
  Eigen::VectorXd y(2);
  y << 2.0, 0.0;
  const std::vector<double> samples = {10.0};
  const OdeStats stats = integrate_dop853(rhs, 0.0, y, samples, nullptr);
  CHECK(y[0] == doctest::Approx(-2.008340782576012).epsilon(1e-9));
  CHECK(y[1] == doctest::Approx(0.032907065863388776).epsilon(1e-7));
  CHECK(stats.accepted_steps == doctest::Approx(103).epsilon(0.1));
  CHECK(stats.rhs_evaluations == doctest::Approx(1610).epsilon(0.1));
}

TEST_CASE("fixed-step convergence is eighth order") {
  const double e1 = oscillator_error(0.2);
  const double e2 = oscillator_error(0.1);
  const double order = std::log2(e1 / e2);
  CHECK(order == doctest::Approx(8.0).epsilon(0.2));
}

TEST_CASE("finite-time blow-up reports step underflow") {
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    dydt[0] = y[0] * y[0];
  };
  Eigen::VectorXd y(1);
  y << 1.0;
  const std::vector<double> samples = {2.0};
  CHECK_THROWS_AS(integrate_dop853(rhs, 0.0, y, samples, nullptr), NumericalError);
}

TEST_CASE("step budget and argument guards") {
  Eigen::VectorXd y(2);
  y << 1.0, 0.0;
  OdeOptions opts;
  opts.max_steps = 3;
  const std::vector<double> far = {1000.0};
  CHECK_THROWS_AS(integrate_dop853(oscillator, 0.0, y, far, nullptr, opts), NumericalError);
  y << 1.0, 0.0;
  const std::vector<double> backwards = {1.0, 0.5};
  CHECK_THROWS_AS(integrate_dop853(oscillator, 0.0, y, backwards, nullptr), ValidationError);
}
