#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

/// Input outside the domain of a metric or evaluator (|x| >= 1 for Funk,
/// y = 0, Bryant-Shen away from the origin, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A geometric object came out degenerate: singular or indefinite
/// fundamental tensor, non-tangent curvature field, failed hypotheses.
class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// ODE integration failed (step-size underflow, norm drift, breakdown,
/// non-monotone holonomy lift).
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace finsler
