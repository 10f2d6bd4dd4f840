#pragma once

#include <algorithm>
#include <cmath>

#include "mlb/common.hpp"

namespace mlb {

// Embedded Dormand-Prince 5(4) pair with a proportional-integral step
// controller.  The controller state is part of checkpoints so that a
// resumed run retraces the exact step sequence.
struct StepSettings {
  double atol = 1e-8;
  double rtol = 1e-8;
  double safety = 0.9;
  double max_growth = 5.0;   // dt_next <= 5 dt
  double max_shrink = 0.1;   // dt_next >= 0.1 dt
  double min_dt = 1e-12;     // below this the problem counts as stiff
};

struct StepController {
  double dt = 1e-3;       // proposal for the next attempt
  double err_old = 1e-4;  // previous accepted error (PI memory)
};

struct StepReport {
  double dt_used = 0.0;
  double error = 0.0;
  int rejections = 0;
};

// Scaled RMS norm of the embedded error estimate: component i is weighted
// by atol + rtol * max(|y_i|, |y_new_i|); acceptance means <= 1.
inline double error_norm(const VectorXcd& err, const VectorXcd& y,
                         const VectorXcd& y_new, const StepSettings& s) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc =
        s.atol + s.rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
    const double q = std::abs(err(i)) / sc;
    sum += q * q;
  }
  return std::sqrt(sum / double(err.size()));
}

// Advances (t, y) by one accepted step of at most dt_cap.  rhs maps
// (t, y) -> dy/dt.  Throws NumericalError when the controller underflows
// (stiffness), embedding t and dt in the message.
template <class Rhs>
StepReport step_adaptive(Rhs&& rhs, double& t, VectorXcd& y,
                         StepController& ctl, double dt_cap,
                         const StepSettings& s) {
  // Dormand-Prince tableau
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                          b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  // difference between the 5th- and 4th-order weights
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  // PI controller exponents (Hairer/Norsett/Wanner dopri5)
  static constexpr double beta = 0.04;
  static constexpr double expo = 0.2 - 0.75 * beta;

  StepReport report;
  for (;;) {
    const double dt = std::min(ctl.dt, dt_cap);
    if (dt < s.min_dt)
      throw NumericalError("step size underflow at t = " + std::to_string(t) +
                           " (dt = " + std::to_string(dt) + "): stiff system");

    const VectorXcd k1 = rhs(t, y);
    const VectorXcd k2 = rhs(t + c2 * dt, y + dt * (a21 * k1));
    const VectorXcd k3 = rhs(t + c3 * dt, y + dt * (a31 * k1 + a32 * k2));
    const VectorXcd k4 =
        rhs(t + c4 * dt, y + dt * (a41 * k1 + a42 * k2 + a43 * k3));
    const VectorXcd k5 = rhs(
        t + c5 * dt, y + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const VectorXcd k6 =
        rhs(t + dt,
            y + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const VectorXcd y_new =
        y + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const VectorXcd k7 = rhs(t + dt, y_new);
    const VectorXcd err_vec =
        dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err = error_norm(err_vec, y, y_new, s);
    if (err <= 1.0) {
      const double fac = s.safety * std::pow(std::max(err, 1e-16), -expo) *
                         std::pow(ctl.err_old, beta);
      ctl.dt = dt * std::clamp(fac, s.max_shrink, s.max_growth);
      ctl.err_old = std::max(err, 1e-4);
      t += dt;
      y = y_new;
      report.dt_used = dt;
      report.error = err;
      return report;
    }
    // rejected: shrink, never grow
    const double fac = s.safety * std::pow(err, -expo);
    ctl.dt = dt * std::clamp(fac, s.max_shrink, 1.0);
    ++report.rejections;
  }
}

}  // namespace mlb
