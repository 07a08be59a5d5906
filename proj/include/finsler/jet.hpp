#pragma once

// Truncated multivariate Taylor arithmetic ("jets") over at most four
// variables. A jet of order K stores the Taylor coefficients of a smooth
// function at a point for every multi-index of total degree <= K, so sums,
// products and compositions with elementary functions give exact mixed
// partials up to order K. Differentiating a jet with respect to one variable
// lowers its order by one, which is what lets geometric quantities built from
// derivatives (sprays, curvature, covariant derivatives) be differentiated
// again.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace finsler {

inline constexpr int kJetVariables = 4;
inline constexpr int kMaxJetOrder = 8;
inline constexpr int kDefaultJetOrder = 4;

using MultiIndex = std::array<int, kJetVariables>;

int total_degree(const MultiIndex& alpha);

class Jet {
public:
  Jet();
  explicit Jet(double value, int order = kMaxJetOrder);

  /// The coordinate function for variable `var`, seeded at `value`.
  static Jet variable(int var, double value, int order);

  int order() const noexcept { return order_; }
  double value() const noexcept { return coeffs_[0]; }

  /// Taylor coefficient of the monomial h^alpha (partial / alpha!).
  double taylor(const MultiIndex& alpha) const;
  /// Mixed partial d^|alpha| f / dv0^a0 ... dv3^a3 at the seed point.
  double partial(const MultiIndex& alpha) const;

  /// Partial derivative with respect to `var`; the result has order - 1.
  Jet derivative(int var) const;
  Jet truncated(int order) const;

  /// True when every non-constant coefficient is zero.
  bool is_constant() const noexcept;

  std::span<const double> coefficients() const noexcept { return coeffs_; }

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);

private:
  Jet(int order, std::vector<double> coeffs);

  // Composes a univariate function given its Taylor coefficients at value().
  Jet compose(std::span<const double> taylor) const;

  friend Jet sqrt(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet log(const Jet& a);
  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);
  friend Jet pow(const Jet& a, double r);
  friend Jet reciprocal(const Jet& a);

  int order_;
  std::vector<double> coeffs_;
};

Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, double r);
Jet reciprocal(const Jet& a);

/// Variable declaration for lift(). Variables are numbered base first, then
/// fiber. A request with fiber variables is treated as norm-like: lifting at a
/// point whose fiber part is zero is rejected, since norms are not smooth there.
struct DerivativeRequest {
  std::vector<std::string> base;
  std::vector<std::string> fiber;
  int order = kDefaultJetOrder;

  int variable_count() const { return static_cast<int>(base.size() + fiber.size()); }

  /// (x1, x2; y1, y2) at the given order.
  static DerivativeRequest tangent_bundle(int order = kDefaultJetOrder);
  /// A single named variable.
  static DerivativeRequest scalar(std::string name, int order = kDefaultJetOrder);
};

using JetFunction = std::function<Jet(std::span<const Jet>)>;
using ScalarFunction = std::function<double(std::span<const double>)>;

/// Seeds one jet per requested variable at `point` and evaluates f on them.
Jet lift(const JetFunction& f, std::span<const double> point,
         const DerivativeRequest& request);

/// Central finite-difference estimate of the mixed partial `multi_index`
/// (one entry per coordinate of `point`, total order <= 4), Richardson
/// extrapolated from steps h and h/2. Test oracle only.
double fd_check(const ScalarFunction& f, std::span<const double> point,
                std::span<const int> multi_index, double step);

} // namespace finsler
