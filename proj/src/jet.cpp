#include "finsler/jet.hpp"

#include "finsler/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace finsler {

namespace {

// Monomials of total degree <= kMaxJetOrder in graded order, so the
// coefficients of a jet of order K are a prefix of those of order K + 1.
struct JetTables {
  static constexpr int kBase = kMaxJetOrder + 1;

  std::vector<MultiIndex> monomials;
  std::vector<int> degree;
  std::array<int, kMaxJetOrder + 2> terms_upto{};  // terms_upto[K] = #monomials with degree <= K
  std::vector<int> lookup;                          // encoded multi-index -> position

  struct Product {
    int a, b, c;
  };
  std::vector<Product> products;                    // sorted by degree of c
  std::array<std::size_t, kMaxJetOrder + 1> products_upto{};

  // raise[v][i] = position of monomial i + e_v, or -1 beyond the table.
  std::array<std::vector<int>, kJetVariables> raise;

  static int encode(const MultiIndex& a) {
    int code = 0;
    for (int v = 0; v < kJetVariables; ++v) code = code * kBase + a[v];
    return code;
  }

  int index_of(const MultiIndex& a) const {
    for (int v : a)
      if (v < 0 || v > kMaxJetOrder) return -1;
    if (total_degree(a) > kMaxJetOrder) return -1;
    return lookup[encode(a)];
  }

  JetTables() {
    lookup.assign(kBase * kBase * kBase * kBase, -1);
    for (int d = 0; d <= kMaxJetOrder; ++d) {
      // lexicographic within a degree, first variable highest
      for (int a0 = d; a0 >= 0; --a0)
        for (int a1 = d - a0; a1 >= 0; --a1)
          for (int a2 = d - a0 - a1; a2 >= 0; --a2) {
            MultiIndex m{a0, a1, a2, d - a0 - a1 - a2};
            lookup[encode(m)] = static_cast<int>(monomials.size());
            monomials.push_back(m);
            degree.push_back(d);
          }
      terms_upto[d] = static_cast<int>(monomials.size());
    }
    terms_upto[kMaxJetOrder + 1] = static_cast<int>(monomials.size());

    const int n = static_cast<int>(monomials.size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (degree[a] + degree[b] > kMaxJetOrder) continue;
        MultiIndex m{};
        for (int v = 0; v < kJetVariables; ++v) m[v] = monomials[a][v] + monomials[b][v];
        products.push_back({a, b, lookup[encode(m)]});
      }
    std::stable_sort(products.begin(), products.end(), [&](const Product& p, const Product& q) {
      return degree[p.c] < degree[q.c];
    });
    for (int k = 0; k <= kMaxJetOrder; ++k)
      products_upto[k] = static_cast<std::size_t>(
          std::count_if(products.begin(), products.end(),
                        [&](const Product& p) { return degree[p.c] <= k; }));

    for (int v = 0; v < kJetVariables; ++v) {
      raise[v].resize(n);
      for (int i = 0; i < n; ++i) {
        MultiIndex m = monomials[i];
        ++m[v];
        raise[v][i] = index_of(m);
      }
    }
  }
};

const JetTables& tables() {
  static const JetTables t;
  return t;
}

int terms(int order) { return tables().terms_upto[order]; }

void check_order(int order) {
  if (order < 0 || order > kMaxJetOrder)
    throw std::invalid_argument("jet order " + std::to_string(order) + " outside [0, " +
                                std::to_string(kMaxJetOrder) + "]");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

} // namespace

int total_degree(const MultiIndex& alpha) {
  int d = 0;
  for (int a : alpha) d += a;
  return d;
}

Jet::Jet() : order_(kMaxJetOrder), coeffs_{0.0} {}

Jet::Jet(double value, int order) : order_(order), coeffs_{value} { check_order(order); }

Jet::Jet(int order, std::vector<double> coeffs) : order_(order), coeffs_(std::move(coeffs)) {}

Jet Jet::variable(int var, double value, int order) {
  check_order(order);
  if (var < 0 || var >= kJetVariables) throw std::invalid_argument("jet variable out of range");
  std::vector<double> c(order >= 1 ? terms(1) : 1, 0.0);
  c[0] = value;
  if (order >= 1) c[1 + var] = 1.0;
  return Jet(order, std::move(c));
}

double Jet::taylor(const MultiIndex& alpha) const {
  if (total_degree(alpha) > order_)
    throw std::out_of_range("multi-index exceeds jet order " + std::to_string(order_));
  const int i = tables().index_of(alpha);
  if (i < 0) throw std::out_of_range("invalid multi-index");
  return i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0.0;
}

double Jet::partial(const MultiIndex& alpha) const {
  double f = 1.0;
  for (int a : alpha) f *= factorial(a);
  return taylor(alpha) * f;
}

Jet Jet::derivative(int var) const {
  if (order_ == 0) throw std::logic_error("cannot differentiate an order-0 jet");
  const auto& t = tables();
  const int n = terms(order_ - 1);
  const int len = static_cast<int>(coeffs_.size());
  std::vector<double> out(std::min(n, std::max(1, len)), 0.0);
  for (int i = 0; i < static_cast<int>(out.size()); ++i) {
    const int up = t.raise[var][i];
    if (up >= 0 && up < len) out[i] = (t.monomials[i][var] + 1) * coeffs_[up];
  }
  return Jet(order_ - 1, std::move(out));
}

Jet Jet::truncated(int order) const {
  check_order(order);
  const int k = std::min(order, order_);
  std::vector<double> c(coeffs_.begin(),
                        coeffs_.begin() + std::min<std::size_t>(coeffs_.size(), terms(k)));
  return Jet(k, std::move(c));
}

bool Jet::is_constant() const noexcept {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c == 0.0; });
}

Jet& Jet::operator+=(const Jet& other) {
  order_ = std::min(order_, other.order_);
  const std::size_t n = terms(order_);
  const std::size_t len = std::min(n, std::max(coeffs_.size(), other.coeffs_.size()));
  coeffs_.resize(std::min(coeffs_.size(), n));
  coeffs_.resize(len, 0.0);
  for (std::size_t i = 0; i < std::min(len, other.coeffs_.size()); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  order_ = std::min(order_, other.order_);
  const std::size_t n = terms(order_);
  const std::size_t len = std::min(n, std::max(coeffs_.size(), other.coeffs_.size()));
  coeffs_.resize(std::min(coeffs_.size(), n));
  coeffs_.resize(len, 0.0);
  for (std::size_t i = 0; i < std::min(len, other.coeffs_.size()); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& other) { return *this = *this * other; }
Jet& Jet::operator/=(const Jet& other) { return *this = *this / other; }

Jet& Jet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  coeffs_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}
Jet& Jet::operator/=(double s) {
  for (double& c : coeffs_) c /= s;
  return *this;
}

Jet operator-(Jet a) {
  for (double& c : a.coeffs_) c = -c;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int order = std::min(a.order_, b.order_);
  if (a.coeffs_.size() == 1) return Jet(b.truncated(order)) *= a.coeffs_[0];
  if (b.coeffs_.size() == 1) return Jet(a.truncated(order)) *= b.coeffs_[0];
  const auto& t = tables();
  const int la = static_cast<int>(a.coeffs_.size());
  const int lb = static_cast<int>(b.coeffs_.size());
  std::vector<double> out(terms(order), 0.0);
  const std::size_t count = t.products_upto[order];
  for (std::size_t p = 0; p < count; ++p) {
    const auto& pr = t.products[p];
    if (pr.a < la && pr.b < lb) out[pr.c] += a.coeffs_[pr.a] * b.coeffs_[pr.b];
  }
  return Jet(order, std::move(out));
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

Jet Jet::compose(std::span<const double> taylor) const {
  // f(a + h) = sum_n taylor[n] h^n, evaluated by Horner in the nilpotent h.
  Jet h = *this;
  h.coeffs_[0] = 0.0;
  const int k = order_;
  Jet result(taylor[k], k);
  for (int n = k - 1; n >= 0; --n) {
    result = result * h;
    result += taylor[n];
  }
  return result;
}

Jet pow(const Jet& a, double r) {
  const double x = a.value();
  if (!(x > 0.0) && !(r == std::floor(r) && r >= 0.0))
    throw DomainError("jet pow: base must be positive");
  std::array<double, kMaxJetOrder + 1> c{};
  double binom = 1.0;  // r choose n
  for (int n = 0; n <= a.order(); ++n) {
    c[n] = binom * std::pow(x, r - n);
    binom *= (r - n) / (n + 1);
  }
  return a.compose(std::span<const double>(c.data(), a.order() + 1));
}

Jet sqrt(const Jet& a) {
  if (!(a.value() > 0.0)) throw DomainError("jet sqrt: argument must be positive");
  return pow(a, 0.5);
}

Jet reciprocal(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw DomainError("jet reciprocal: division by zero");
  std::array<double, kMaxJetOrder + 1> c{};
  double p = 1.0 / x;
  for (int n = 0; n <= a.order(); ++n) {
    c[n] = (n % 2 == 0 ? 1.0 : -1.0) * p;
    p /= x;
  }
  return a.compose(std::span<const double>(c.data(), a.order() + 1));
}

Jet exp(const Jet& a) {
  std::array<double, kMaxJetOrder + 1> c{};
  const double e = std::exp(a.value());
  for (int n = 0; n <= a.order(); ++n) c[n] = e / factorial(n);
  return a.compose(std::span<const double>(c.data(), a.order() + 1));
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("jet log: argument must be positive");
  std::array<double, kMaxJetOrder + 1> c{};
  c[0] = std::log(x);
  for (int n = 1; n <= a.order(); ++n) c[n] = (n % 2 == 1 ? 1.0 : -1.0) / (n * std::pow(x, n));
  return a.compose(std::span<const double>(c.data(), a.order() + 1));
}

Jet sin(const Jet& a) {
  std::array<double, kMaxJetOrder + 1> c{};
  const double s = std::sin(a.value()), co = std::cos(a.value());
  const double cycle[4] = {s, co, -s, -co};
  for (int n = 0; n <= a.order(); ++n) c[n] = cycle[n % 4] / factorial(n);
  return a.compose(std::span<const double>(c.data(), a.order() + 1));
}

Jet cos(const Jet& a) {
  std::array<double, kMaxJetOrder + 1> c{};
  const double s = std::sin(a.value()), co = std::cos(a.value());
  const double cycle[4] = {co, -s, -co, s};
  for (int n = 0; n <= a.order(); ++n) c[n] = cycle[n % 4] / factorial(n);
  return a.compose(std::span<const double>(c.data(), a.order() + 1));
}

DerivativeRequest DerivativeRequest::tangent_bundle(int order) {
  return DerivativeRequest{{"x1", "x2"}, {"y1", "y2"}, order};
}

DerivativeRequest DerivativeRequest::scalar(std::string name, int order) {
  return DerivativeRequest{{std::move(name)}, {}, order};
}

Jet lift(const JetFunction& f, std::span<const double> point, const DerivativeRequest& request) {
  const int n = request.variable_count();
  if (n < 1 || n > kJetVariables)
    throw std::invalid_argument("lift: between 1 and 4 variables must be declared");
  if (request.order < 1 || request.order > kMaxJetOrder)
    throw std::invalid_argument("lift: order " + std::to_string(request.order) +
                                " exceeds the engine maximum " + std::to_string(kMaxJetOrder));
  if (static_cast<int>(point.size()) != n)
    throw std::invalid_argument("lift: point has wrong number of coordinates");
  if (!request.fiber.empty()) {
    const auto fiber = point.subspan(request.base.size());
    if (std::all_of(fiber.begin(), fiber.end(), [](double v) { return v == 0.0; }))
      throw DomainError("lift: fiber coordinates are zero (norm is not smooth at y = 0)");
  }
  std::vector<Jet> vars;
  vars.reserve(n);
  for (int v = 0; v < n; ++v) vars.push_back(Jet::variable(v, point[v], request.order));
  return f(vars);
}

namespace {

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;
};

// Second-order accurate central stencils for the m-th derivative (unit step).
const Stencil& central_stencil(int m) {
  static const std::array<Stencil, 5> stencils{{
      {{0}, {1.0}},
      {{-1, 1}, {-0.5, 0.5}},
      {{-1, 0, 1}, {1.0, -2.0, 1.0}},
      {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
      {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}},
  }};
  return stencils[m];
}

double central_difference(const ScalarFunction& f, std::span<const double> point,
                          std::span<const int> alpha, double h) {
  const std::size_t n = point.size();
  std::vector<double> x(point.begin(), point.end());
  std::vector<std::size_t> pos(n, 0);
  double sum = 0.0;
  // odometer over the tensor product of the per-variable stencils
  while (true) {
    double w = 1.0;
    for (std::size_t v = 0; v < n; ++v) {
      const auto& s = central_stencil(alpha[v]);
      w *= s.weights[pos[v]];
      x[v] = point[v] + s.offsets[pos[v]] * h;
    }
    sum += w * f(x);
    std::size_t v = 0;
    for (; v < n; ++v) {
      if (++pos[v] < central_stencil(alpha[v]).offsets.size()) break;
      pos[v] = 0;
    }
    if (v == n) break;
  }
  int order = 0;
  for (int a : alpha) order += a;
  return sum / std::pow(h, order);
}

} // namespace

double fd_check(const ScalarFunction& f, std::span<const double> point,
                std::span<const int> multi_index, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_check: step must be positive");
  if (multi_index.size() != point.size())
    throw std::invalid_argument("fd_check: multi-index length differs from point dimension");
  int order = 0;
  for (int a : multi_index) {
    if (a < 0) throw std::invalid_argument("fd_check: negative multi-index entry");
    order += a;
  }
  if (order > 4) throw std::invalid_argument("fd_check: total order must be <= 4");
  const double coarse = central_difference(f, point, multi_index, step);
  const double fine = central_difference(f, point, multi_index, step / 2);
  return (4.0 * fine - coarse) / 3.0;
}

} // namespace finsler
