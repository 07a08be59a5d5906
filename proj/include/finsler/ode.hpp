#pragma once

#include "finsler/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

namespace finsler {

enum class OdeMethod { Adaptive, FixedRK4 };

struct SolverSettings {
  OdeMethod method = OdeMethod::Adaptive;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-2;
  double min_step = 1e-13;
  std::size_t max_steps = 200000;
  int fixed_steps = 2000;  // FixedRK4 only
};

struct SolverStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

struct OdeOutcome {
  SolverStats stats;
  bool halted = false;     // stopped before t1
  double halt_time = 0.0;  // time reached when halted
  std::string halt_reason;
};

/// Integrates x' = rhs(x, t) from t0 to t1 (t1 > t0). `observe(x, t)` runs
/// after every accepted step. A DomainError thrown by rhs is treated as a
/// rejected step; if the step then underflows, integration halts at the last
/// accepted state and the outcome records why.
template <std::size_t N, class Rhs, class Observer>
OdeOutcome integrate_ode(Rhs&& rhs, std::array<double, N>& x, double t0, double t1,
                         const SolverSettings& settings, Observer&& observe) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, N>;
  if (!(t1 > t0)) throw std::invalid_argument("integrate_ode: t1 must exceed t0");
  if (!(settings.abs_tol > 0.0 && settings.rel_tol > 0.0))
    throw std::invalid_argument("integrate_ode: tolerances must be positive");

  auto system = [&rhs](const State& s, State& ds, double t) { ds = rhs(s, t); };
  OdeOutcome out;
  double t = t0;
  observe(static_cast<const State&>(x), t);

  if (settings.method == OdeMethod::FixedRK4) {
    if (settings.fixed_steps < 1) throw std::invalid_argument("integrate_ode: fixed_steps must be >= 1");
    odeint::runge_kutta4<State> stepper;
    const double h = (t1 - t0) / settings.fixed_steps;
    for (int i = 0; i < settings.fixed_steps; ++i) {
      try {
        stepper.do_step(system, x, t, h);
      } catch (const DomainError& e) {
        out.halted = true;
        out.halt_time = t;
        out.halt_reason = e.what();
        return out;
      }
      t = t0 + (i + 1) * h;
      ++out.stats.steps;
      observe(static_cast<const State&>(x), t);
    }
    return out;
  }

  auto stepper = odeint::make_controlled(settings.abs_tol, settings.rel_tol,
                                         odeint::runge_kutta_dopri5<State>());
  double dt = std::min(settings.initial_step, t1 - t0);
  std::string last_error;
  while (t < t1) {
    if (out.stats.steps + out.stats.rejected >= settings.max_steps)
      throw SolverError("integrate_ode: step budget exhausted at t = " + std::to_string(t));
    // land exactly on t1
    if (t + dt > t1 || t1 - (t + dt) < 1e-12 * (t1 - t0)) dt = t1 - t;
    const State saved = x;
    const double t_saved = t;
    odeint::controlled_step_result result;
    try {
      result = stepper.try_step(system, x, t, dt);
    } catch (const DomainError& e) {
      x = saved;
      t = t_saved;
      stepper.reset();
      last_error = e.what();
      dt *= 0.5;
      result = odeint::fail;
    }
    if (result == odeint::success) {
      ++out.stats.steps;
      last_error.clear();
      observe(static_cast<const State&>(x), t);
    } else {
      ++out.stats.rejected;
    }
    if (t < t1 && dt < settings.min_step) {
      if (last_error.empty()) throw SolverError("integrate_ode: step size underflow at t = " + std::to_string(t));
      out.halted = true;
      out.halt_time = t;
      out.halt_reason = last_error;
      return out;
    }
  }
  return out;
}

} // namespace finsler
