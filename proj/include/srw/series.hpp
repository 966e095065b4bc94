#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace srw {

// Truncated power series: coefficient t multiplies u^t, t = 0..order.
// Binary operations truncate to the shorter operand, so no operation ever
// fabricates coefficients it cannot know exactly.
template <typename T>
class Series {
 public:
  Series() : c_(1, T{}) {}

  explicit Series(std::size_t order) : c_(order + 1, T{}) {}

  explicit Series(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty())
      throw std::invalid_argument("series needs at least a constant term");
  }

  std::size_t order() const { return c_.size() - 1; }

  T& operator[](std::size_t t) { return c_[t]; }
  const T& operator[](std::size_t t) const { return c_[t]; }

  const std::vector<T>& coeffs() const { return c_; }

  Series truncated(std::size_t new_order) const {
    Series out(new_order);
    const std::size_t n = std::min(new_order, order());
    for (std::size_t t = 0; t <= n; ++t) out[t] = c_[t];
    return out;
  }

 private:
  std::vector<T> c_;
};

using SeriesU = Series<double>;
using SeriesUC = Series<std::complex<double>>;

template <typename T>
Series<T> constant_series(std::size_t order, T value) {
  Series<T> out(order);
  out[0] = value;
  return out;
}

template <typename T>
Series<T> operator+(const Series<T>& a, const Series<T>& b) {
  const std::size_t n = std::min(a.order(), b.order());
  Series<T> out(n);
  for (std::size_t t = 0; t <= n; ++t) out[t] = a[t] + b[t];
  return out;
}

template <typename T>
Series<T> operator-(const Series<T>& a, const Series<T>& b) {
  const std::size_t n = std::min(a.order(), b.order());
  Series<T> out(n);
  for (std::size_t t = 0; t <= n; ++t) out[t] = a[t] - b[t];
  return out;
}

template <typename T>
Series<T> operator*(const Series<T>& a, T s) {
  Series<T> out(a.order());
  for (std::size_t t = 0; t <= a.order(); ++t) out[t] = a[t] * s;
  return out;
}

template <typename T>
Series<T> operator*(T s, const Series<T>& a) {
  return a * s;
}

// Cauchy product truncated to min(order a, order b).
template <typename T>
Series<T> operator*(const Series<T>& a, const Series<T>& b) {
  const std::size_t n = std::min(a.order(), b.order());
  Series<T> out(n);
  for (std::size_t i = 0; i <= n; ++i) {
    if (a[i] == T{}) continue;
    const T ai = a[i];
    for (std::size_t j = 0; i + j <= n; ++j) out[i + j] += ai * b[j];
  }
  return out;
}

// Multiplicative inverse as a formal series; needs a nonzero constant term.
// r_k = -(1/b_0) * sum_{j=1..k} b_j r_{k-j}.
template <typename T>
Series<T> recip(const Series<T>& b) {
  if (b[0] == T{})
    throw std::domain_error("series reciprocal needs a nonzero constant term");
  const std::size_t n = b.order();
  Series<T> r(n);
  const T inv0 = T{1} / b[0];
  r[0] = inv0;
  for (std::size_t k = 1; k <= n; ++k) {
    T acc{};
    for (std::size_t j = 1; j <= k; ++j) acc += b[j] * r[k - j];
    r[k] = -acc * inv0;
  }
  return r;
}

// Multiplication by 1/(1-u): running partial sums of the coefficients.
template <typename T>
Series<T> cumsum(const Series<T>& a) {
  Series<T> out(a.order());
  T acc{};
  for (std::size_t t = 0; t <= a.order(); ++t) {
    acc += a[t];
    out[t] = acc;
  }
  return out;
}

// u d/du: coefficient t becomes t * a_t. Applying this before any division by
// (1-u) keeps derivative information exact under truncation.
template <typename T>
Series<T> times_index(const Series<T>& a) {
  Series<T> out(a.order());
  for (std::size_t t = 0; t <= a.order(); ++t)
    out[t] = static_cast<T>(static_cast<double>(t)) * a[t];
  return out;
}

// Multiplication by u^k; top coefficients fall off the truncation.
template <typename T>
Series<T> shift_up(const Series<T>& a, std::size_t k) {
  Series<T> out(a.order());
  for (std::size_t t = k; t <= a.order(); ++t) out[t] = a[t - k];
  return out;
}

// Horner evaluation of the truncated polynomial at x.
template <typename T, typename X>
auto eval_series(const Series<T>& a, X x) {
  using R = decltype(a[0] * x);
  R acc{};
  for (std::size_t i = a.order() + 1; i-- > 0;) acc = acc * x + R{a[i]};
  return acc;
}

// Coefficients of f(zeta * u) for a real series f and complex scale zeta.
inline SeriesUC with_scaled_argument(const SeriesU& a,
                                     std::complex<double> zeta) {
  SeriesUC out(a.order());
  std::complex<double> pw{1.0, 0.0};
  for (std::size_t t = 0; t <= a.order(); ++t) {
    out[t] = a[t] * pw;
    pw *= zeta;
  }
  return out;
}

// Coefficients of (1-u)^lambda via c_{t+1} = c_t (t - lambda) / (t + 1).
inline SeriesU binomial_series(double lambda, std::size_t order) {
  SeriesU c(order);
  c[0] = 1.0;
  for (std::size_t t = 0; t < order; ++t)
    c[t + 1] = c[t] * (static_cast<double>(t) - lambda) /
               (static_cast<double>(t) + 1.0);
  return c;
}

}  // namespace srw
