#include "finsler/circle_map.hpp"

#include "finsler/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace finsler {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

CircleMap::CircleMap(std::vector<double> lift) : lift_(std::move(lift)) {
  const int n = size();
  if (n < 2) throw std::invalid_argument("circle map needs at least two samples");
  if (min_increment() <= 0.0)
    throw SolverError("circle map lift is not strictly increasing (resolution failure: raise the grid size "
                      "or tighten the solver tolerance)");
  const std::vector<double> d = displacement();
  const int kmax = (n - 1) / 2;
  a_.assign(kmax + 1, 0.0);
  b_.assign(kmax + 1, 0.0);
  for (int k = 0; k <= kmax; ++k) {
    double ca = 0.0, sb = 0.0;
    for (int i = 0; i < n; ++i) {
      const double angle = kTwoPi * ((static_cast<long>(k) * i) % n) / n;
      ca += d[i] * std::cos(angle);
      sb += d[i] * std::sin(angle);
    }
    a_[k] = (k == 0 ? 1.0 : 2.0) * ca / n;
    b_[k] = 2.0 * sb / n;
  }
  // even n: the Nyquist mode cos(n t / 2) with half weight keeps grid values exact
  if (n % 2 == 0) {
    double nyq = 0.0;
    for (int i = 0; i < n; ++i) nyq += (i % 2 == 0 ? d[i] : -d[i]);
    a_.push_back(nyq / n);
    b_.push_back(0.0);
  }
}

CircleMap CircleMap::identity(int n) { return rotation(n, 0.0); }

CircleMap CircleMap::rotation(int n, double angle) {
  std::vector<double> lift(n);
  for (int i = 0; i < n; ++i) lift[i] = kTwoPi * i / n + angle;
  return CircleMap(std::move(lift));
}

double CircleMap::grid_point(int i) const { return kTwoPi * i / size(); }

std::vector<double> CircleMap::displacement() const {
  std::vector<double> d(lift_.size());
  for (int i = 0; i < size(); ++i) d[i] = lift_[i] - grid_point(i);
  return d;
}

double CircleMap::operator()(double t) const {
  // exact on the grid
  const double pos = t / kTwoPi * size();
  const double idx = std::round(pos);
  if (std::abs(pos - idx) < 1e-12) {
    const long i = static_cast<long>(idx);
    const long n = size();
    const long wraps = (i >= 0 ? i / n : -((-i + n - 1) / n));
    return lift_[i - wraps * n] + kTwoPi * wraps;
  }
  double d = a_[0];
  for (std::size_t k = 1; k < a_.size(); ++k) d += a_[k] * std::cos(k * t) + b_[k] * std::sin(k * t);
  return t + d;
}

CircleMap CircleMap::resampled(int n) const {
  if (n == size()) return *this;
  std::vector<double> lift(n);
  for (int i = 0; i < n; ++i) lift[i] = (*this)(kTwoPi * i / n);
  return CircleMap(std::move(lift));
}

double CircleMap::min_increment() const {
  double m = lift_.front() + kTwoPi - lift_.back();
  for (std::size_t i = 1; i < lift_.size(); ++i) m = std::min(m, lift_[i] - lift_[i - 1]);
  return m;
}

CircleMap compose(const CircleMap& phi, const CircleMap& psi) {
  const int n = std::max(phi.size(), psi.size());
  const CircleMap inner = psi.resampled(n);
  std::vector<double> lift(n);
  for (int i = 0; i < n; ++i) lift[i] = phi(inner.lift()[i]);
  return CircleMap(std::move(lift));
}

double distance(const CircleMap& phi, const CircleMap& psi) {
  const int n = std::max(phi.size(), psi.size());
  const CircleMap p = phi.resampled(n), q = psi.resampled(n);
  const double h = kTwoPi / n;
  double value = 0.0, slope = 0.0;
  for (int i = 0; i < n; ++i) {
    value = std::max(value, std::abs(p.lift()[i] - q.lift()[i]));
    const int j = (i + 1) % n;
    const double wrap = j == 0 ? kTwoPi : 0.0;
    const double dp = p.lift()[j] + wrap - p.lift()[i], dq = q.lift()[j] + wrap - q.lift()[i];
    slope = std::max(slope, std::abs(dp - dq) / h);
  }
  return value + slope;
}

SolverSettings flow_solver_settings() {
  SolverSettings s;
  s.abs_tol = 1e-12;
  s.rel_tol = 1e-12;
  return s;
}

CircleMap exp_flow(const CircleVectorField& f, double s, int n, const SolverSettings& settings) {
  if (n < 16) throw std::invalid_argument("exp_flow: grid size must be >= 16");
  std::vector<double> lift(n);
  const double direction = s < 0.0 ? -1.0 : 1.0;
  for (int i = 0; i < n; ++i) {
    std::array<double, 1> theta{kTwoPi * i / n};
    if (s != 0.0) {
      const OdeOutcome out = integrate_ode<1>(
          [&](const std::array<double, 1>& th, double) { return std::array<double, 1>{direction * f(th[0])}; },
          theta, 0.0, std::abs(s), settings, [](const std::array<double, 1>&, double) {});
      if (out.halted) throw SolverError("exp_flow: integration halted: " + out.halt_reason);
    }
    lift[i] = theta[0];
  }
  return CircleMap(std::move(lift));
}

} // namespace finsler
