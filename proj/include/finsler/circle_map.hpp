#pragma once

#include "finsler/circle_field.hpp"
#include "finsler/ode.hpp"

#include <vector>

namespace finsler {

/// Orientation-preserving circle diffeomorphism stored as its lift
/// phi(t_i) at t_i = 2 pi i / N, with phi(t + 2 pi) = phi(t) + 2 pi.
/// Off-grid values use trigonometric interpolation of phi(t) - t.
class CircleMap {
public:
  /// Throws SolverError unless the lift is strictly increasing (wrap included).
  explicit CircleMap(std::vector<double> lift);

  static CircleMap identity(int n);
  static CircleMap rotation(int n, double angle);

  int size() const { return static_cast<int>(lift_.size()); }
  const std::vector<double>& lift() const { return lift_; }
  double grid_point(int i) const;
  /// phi(t_i) - t_i
  std::vector<double> displacement() const;

  double operator()(double t) const;
  /// The same map sampled on an n-point grid.
  CircleMap resampled(int n) const;

  /// Smallest gap phi(t_{i+1}) - phi(t_i) over the grid, wrap included.
  double min_increment() const;

private:
  std::vector<double> lift_;
  // real DFT of the displacement, a0 then (a_k, b_k)
  std::vector<double> a_, b_;
};

/// phi o psi on the finer of the two grids.
CircleMap compose(const CircleMap& phi, const CircleMap& psi);

/// sup |phi - psi| + sup |first-difference quotient discrepancy|, on the finer grid.
double distance(const CircleMap& phi, const CircleMap& psi);

/// Time-s flow of f d/dt from every grid point (s may be negative).
CircleMap exp_flow(const CircleVectorField& f, double s, int n, const SolverSettings& settings = {});

/// Flow settings: tolerance 1e-12 for the 1e-8 flow checks.
SolverSettings flow_solver_settings();

} // namespace finsler
