#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace finsler {

inline constexpr int kDefaultNmax = 16;
inline constexpr int kDefaultGrid = 256;

/// f(t) d/dt with f(t) = a0 + sum_{n=1}^{nmax} (a_n cos nt + b_n sin nt).
class CircleVectorField {
public:
  explicit CircleVectorField(int nmax = kDefaultNmax);

  static CircleVectorField constant(double a0, int nmax = kDefaultNmax);
  static CircleVectorField cos_mode(int n, double amplitude = 1.0, int nmax = kDefaultNmax);
  static CircleVectorField sin_mode(int n, double amplitude = 1.0, int nmax = kDefaultNmax);
  /// Coefficient vector layout (a0, a1, b1, a2, b2, ...).
  static CircleVectorField from_coefficients(const Eigen::VectorXd& coeffs);

  int nmax() const { return nmax_; }
  double a0() const { return a0_; }
  double& a0() { return a0_; }
  /// n in [1, nmax]
  double a(int n) const { return cos_.at(n - 1); }
  double& a(int n) { return cos_.at(n - 1); }
  double b(int n) const { return sin_.at(n - 1); }
  double& b(int n) { return sin_.at(n - 1); }
  const std::vector<double>& cos_coefficients() const { return cos_; }
  const std::vector<double>& sin_coefficients() const { return sin_; }

  double operator()(double t) const;
  double derivative_at(double t) const;
  CircleVectorField derivative() const;

  /// Values on the uniform grid t_i = 2 pi i / n.
  std::vector<double> sample(int n) const;
  Eigen::VectorXd coefficients() const;
  /// Zero-padded or truncated copy.
  CircleVectorField resized(int nmax) const;

  /// Mean square of f over the circle: a0^2 + 1/2 sum (a_n^2 + b_n^2).
  double energy() const;
  double nonconstant_energy() const { return energy() - a0_ * a0_; }
  /// Largest |f| on a grid of max(256, 16 nmax) points.
  double sup_norm() const;
  /// Largest coefficient magnitude.
  double max_coefficient() const;

  CircleVectorField& operator+=(const CircleVectorField& o);
  CircleVectorField& operator-=(const CircleVectorField& o);
  CircleVectorField& operator*=(double s);
  friend CircleVectorField operator+(CircleVectorField a, const CircleVectorField& b) { return a += b; }
  friend CircleVectorField operator-(CircleVectorField a, const CircleVectorField& b) { return a -= b; }
  friend CircleVectorField operator*(CircleVectorField a, double s) { return a *= s; }
  friend CircleVectorField operator*(double s, CircleVectorField a) { return a *= s; }
  friend CircleVectorField operator-(CircleVectorField a) { return a *= -1.0; }

private:
  int nmax_;
  double a0_ = 0.0;
  std::vector<double> cos_, sin_;
};

struct BracketResult {
  CircleVectorField field;
  double truncation_loss = 0.0;  // l2 norm of dropped coefficients
};

/// [f d/dt, g d/dt] = (g f' - g' f) d/dt, truncated at max(f.nmax, g.nmax).
/// This is the negative of the usual vector-field bracket.
BracketResult lie_bracket(const CircleVectorField& f, const CircleVectorField& g);

struct FourierResult {
  CircleVectorField field;
  double top_mode_fraction = 0.0;
  bool aliasing_warning = false;  // top mode holds more than 1% of the energy
};

/// Discrete Fourier projection of uniform samples; needs samples.size() > 2 nmax.
FourierResult fourier_decompose(std::span<const double> samples, int nmax = kDefaultNmax);

/// d/dt, cos t, sin t, cos 2t, sin 2t.
std::vector<CircleVectorField> fourier_generators(int nmax = kDefaultNmax);

struct ClosureResult {
  std::vector<int> dimension_trace;  // spanned dimension after each depth, depth 0 first
  int final_dimension = 0;
  int depth_used = 0;
  bool stabilized = false;
  double max_truncation_loss = 0.0;
};

/// Brackets the span with the generators depth by depth inside the
/// degree-<= nmax Fourier space, growing a Gram-Schmidt basis until no new
/// direction appears or max_depth is reached.
ClosureResult bracket_closure(const std::vector<CircleVectorField>& generators, int nmax, int max_depth);

} // namespace finsler
