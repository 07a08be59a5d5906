#include "finsler/circle_field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace finsler {

namespace {

using cplx = std::complex<double>;

// c_k for k = -n..n stored at index k + n.
std::vector<cplx> to_complex(const CircleVectorField& f) {
  const int n = f.nmax();
  std::vector<cplx> c(2 * n + 1);
  c[n] = f.a0();
  for (int k = 1; k <= n; ++k) {
    c[n + k] = 0.5 * cplx(f.a(k), -f.b(k));
    c[n - k] = std::conj(c[n + k]);
  }
  return c;
}

std::vector<cplx> convolve(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  std::vector<cplx> w(u.size() + v.size() - 1);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) w[i + j] += u[i] * v[j];
  return w;
}

void check_nmax(int nmax) {
  if (nmax < 0) throw std::invalid_argument("Fourier truncation must be >= 0");
}

} // namespace

CircleVectorField::CircleVectorField(int nmax) : nmax_(nmax) {
  check_nmax(nmax);
  cos_.assign(nmax, 0.0);
  sin_.assign(nmax, 0.0);
}

CircleVectorField CircleVectorField::constant(double a0, int nmax) {
  CircleVectorField f(nmax);
  f.a0_ = a0;
  return f;
}

CircleVectorField CircleVectorField::cos_mode(int n, double amplitude, int nmax) {
  if (n == 0) return constant(amplitude, nmax);
  CircleVectorField f(nmax);
  f.a(n) = amplitude;
  return f;
}

CircleVectorField CircleVectorField::sin_mode(int n, double amplitude, int nmax) {
  CircleVectorField f(nmax);
  f.b(n) = amplitude;
  return f;
}

CircleVectorField CircleVectorField::from_coefficients(const Eigen::VectorXd& coeffs) {
  if (coeffs.size() % 2 != 1) throw std::invalid_argument("coefficient vector must have odd length");
  CircleVectorField f(static_cast<int>(coeffs.size() / 2));
  f.a0_ = coeffs[0];
  for (int n = 1; n <= f.nmax_; ++n) {
    f.a(n) = coeffs[2 * n - 1];
    f.b(n) = coeffs[2 * n];
  }
  return f;
}

double CircleVectorField::operator()(double t) const {
  double v = a0_;
  for (int n = 1; n <= nmax_; ++n) v += cos_[n - 1] * std::cos(n * t) + sin_[n - 1] * std::sin(n * t);
  return v;
}

double CircleVectorField::derivative_at(double t) const {
  double v = 0.0;
  for (int n = 1; n <= nmax_; ++n) v += n * (sin_[n - 1] * std::cos(n * t) - cos_[n - 1] * std::sin(n * t));
  return v;
}

CircleVectorField CircleVectorField::derivative() const {
  CircleVectorField d(nmax_);
  for (int n = 1; n <= nmax_; ++n) {
    d.a(n) = n * b(n);
    d.b(n) = -n * a(n);
  }
  return d;
}

std::vector<double> CircleVectorField::sample(int n) const {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = (*this)(2.0 * std::numbers::pi * i / n);
  return out;
}

Eigen::VectorXd CircleVectorField::coefficients() const {
  Eigen::VectorXd c(2 * nmax_ + 1);
  c[0] = a0_;
  for (int n = 1; n <= nmax_; ++n) {
    c[2 * n - 1] = a(n);
    c[2 * n] = b(n);
  }
  return c;
}

CircleVectorField CircleVectorField::resized(int nmax) const {
  CircleVectorField f(nmax);
  f.a0_ = a0_;
  for (int n = 1; n <= std::min(nmax, nmax_); ++n) {
    f.a(n) = a(n);
    f.b(n) = b(n);
  }
  return f;
}

double CircleVectorField::energy() const {
  double e = a0_ * a0_;
  for (int n = 0; n < nmax_; ++n) e += 0.5 * (cos_[n] * cos_[n] + sin_[n] * sin_[n]);
  return e;
}

double CircleVectorField::sup_norm() const {
  double m = 0.0;
  for (double v : sample(std::max(256, 16 * nmax_))) m = std::max(m, std::abs(v));
  return m;
}

double CircleVectorField::max_coefficient() const {
  double m = std::abs(a0_);
  for (int n = 0; n < nmax_; ++n) m = std::max({m, std::abs(cos_[n]), std::abs(sin_[n])});
  return m;
}

CircleVectorField& CircleVectorField::operator+=(const CircleVectorField& o) {
  if (o.nmax_ > nmax_) *this = resized(o.nmax_);
  a0_ += o.a0_;
  for (int n = 0; n < o.nmax_; ++n) {
    cos_[n] += o.cos_[n];
    sin_[n] += o.sin_[n];
  }
  return *this;
}

CircleVectorField& CircleVectorField::operator-=(const CircleVectorField& o) { return *this += -1.0 * o; }

CircleVectorField& CircleVectorField::operator*=(double s) {
  a0_ *= s;
  for (int n = 0; n < nmax_; ++n) {
    cos_[n] *= s;
    sin_[n] *= s;
  }
  return *this;
}

BracketResult lie_bracket(const CircleVectorField& f, const CircleVectorField& g) {
  const int nmax = std::max(f.nmax(), g.nmax());
  const auto F = to_complex(f.resized(nmax)), G = to_complex(g.resized(nmax));
  const auto dF = to_complex(f.resized(nmax).derivative()), dG = to_complex(g.resized(nmax).derivative());
  const auto gf = convolve(G, dF), fg = convolve(dG, F);
  // product index k in [-2 nmax, 2 nmax] sits at k + 2 nmax
  const int mid = 2 * nmax;
  BracketResult out{CircleVectorField(nmax), 0.0};
  auto coeff = [&](int k) { return gf[mid + k] - fg[mid + k]; };
  out.field.a0() = coeff(0).real();
  double lost = 0.0;
  for (int k = 1; k <= mid; ++k) {
    const cplx c = coeff(k);
    const double ak = 2.0 * c.real(), bk = -2.0 * c.imag();
    if (k <= nmax) {
      out.field.a(k) = ak;
      out.field.b(k) = bk;
    } else {
      lost += ak * ak + bk * bk;
    }
  }
  out.truncation_loss = std::sqrt(lost);
  return out;
}

FourierResult fourier_decompose(std::span<const double> samples, int nmax) {
  check_nmax(nmax);
  const int m = static_cast<int>(samples.size());
  if (m <= 2 * nmax)
    throw std::invalid_argument("fourier_decompose: " + std::to_string(m) + " samples cannot resolve nmax = " +
                                std::to_string(nmax));
  FourierResult out{CircleVectorField(nmax)};
  double mean = 0.0;
  for (double v : samples) mean += v;
  out.field.a0() = mean / m;
  for (int n = 1; n <= nmax; ++n) {
    double ca = 0.0, sb = 0.0;
    for (int i = 0; i < m; ++i) {
      // reduce n*i mod m so the angle stays small and exact
      const double angle = 2.0 * std::numbers::pi * ((static_cast<long>(n) * i) % m) / m;
      ca += samples[i] * std::cos(angle);
      sb += samples[i] * std::sin(angle);
    }
    out.field.a(n) = 2.0 * ca / m;
    out.field.b(n) = 2.0 * sb / m;
  }
  const double total = out.field.energy();
  if (nmax >= 1 && total > 0.0) {
    const double top = 0.5 * (out.field.a(nmax) * out.field.a(nmax) + out.field.b(nmax) * out.field.b(nmax));
    out.top_mode_fraction = top / total;
    out.aliasing_warning = out.top_mode_fraction > 0.01;
  }
  return out;
}

std::vector<CircleVectorField> fourier_generators(int nmax) {
  if (nmax < 2) throw std::invalid_argument("the five generators need nmax >= 2");
  return {CircleVectorField::constant(1.0, nmax), CircleVectorField::cos_mode(1, 1.0, nmax),
          CircleVectorField::sin_mode(1, 1.0, nmax), CircleVectorField::cos_mode(2, 1.0, nmax),
          CircleVectorField::sin_mode(2, 1.0, nmax)};
}

ClosureResult bracket_closure(const std::vector<CircleVectorField>& generators, int nmax, int max_depth) {
  if (nmax < 0 || max_depth < 0) throw std::invalid_argument("bracket_closure: nmax and depth must be >= 0");
  const int dim = 2 * nmax + 1;
  constexpr double kIndependence = 1e-9;
  std::vector<Eigen::VectorXd> basis;

  // Adds v to the orthonormal basis if it has a new direction (two Gram-Schmidt passes).
  auto absorb = [&](const CircleVectorField& f) {
    Eigen::VectorXd v = f.resized(nmax).coefficients();
    const double scale = v.norm();
    if (scale == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass)
      for (const Eigen::VectorXd& q : basis) v -= q.dot(v) * q;
    if (v.norm() <= kIndependence * scale || static_cast<int>(basis.size()) == dim) return false;
    basis.push_back(v / v.norm());
    return true;
  };

  ClosureResult out;
  std::vector<CircleVectorField> frontier;
  for (const CircleVectorField& g : generators)
    if (absorb(g)) frontier.push_back(g.resized(nmax));
  out.dimension_trace.push_back(static_cast<int>(basis.size()));

  for (int depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
    std::vector<CircleVectorField> next;
    for (const CircleVectorField& f : frontier)
      for (const CircleVectorField& g : generators) {
        BracketResult br = lie_bracket(f, g.resized(nmax));
        out.max_truncation_loss = std::max(out.max_truncation_loss, br.truncation_loss);
        if (absorb(br.field)) next.push_back(std::move(br.field));
      }
    out.depth_used = depth;
    out.dimension_trace.push_back(static_cast<int>(basis.size()));
    frontier = std::move(next);
  }
  out.stabilized = frontier.empty();
  out.final_dimension = static_cast<int>(basis.size());
  return out;
}

} // namespace finsler
