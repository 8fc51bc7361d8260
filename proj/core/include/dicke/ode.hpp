// ode.hpp: explicit Runge-Kutta integration (Dormand-Prince 8(5,3)) for real
// first-order systems.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

namespace dicke {

// dydt = f(t, y); dydt is preallocated to y.size().
using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

// Called once per sample time, in order, with the state at exactly that time.
using OdeObserver = std::function<void(std::size_t index, double t, const Eigen::VectorXd& y)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::optional<double> initial_step;  // chosen automatically if unset
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
  // Constant step, no error control. Steps are shortened to land on sample
  // times.
  std::optional<double> fixed_step;
};

struct OdeStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
};

// Integrates from t0 through every entry of sample_times (non-decreasing,
// >= t0), landing exactly on each. y holds the initial state on entry and the
// state at the last sample on exit. Throws NumericalError on step-size
// underflow, non-finite states or when max_steps is exceeded.
OdeStats integrate_dop853(const OdeRhs& rhs, double t0, Eigen::VectorXd& y,
                          std::span<const double> sample_times, const OdeObserver& observer,
                          const OdeOptions& options = {});

}  // namespace dicke
