#include "srw/bivariate.hpp"

#include <stdexcept>

namespace srw {

SeriesUW::SeriesUW(std::size_t order_w, std::size_t order_u)
    : nw_(order_w), nu_(order_u), c_((order_w + 1) * (order_u + 1), 0.0) {}

SeriesUW SeriesUW::outer(const SeriesU& f_w, const SeriesU& g_u) {
  SeriesUW out(f_w.order(), g_u.order());
  for (std::size_t i = 0; i <= f_w.order(); ++i) {
    if (f_w[i] == 0.0) continue;
    for (std::size_t j = 0; j <= g_u.order(); ++j)
      out.at(i, j) = f_w[i] * g_u[j];
  }
  return out;
}

SeriesUW SeriesUW::diagonal(const SeriesU& f, std::size_t order_w,
                            std::size_t order_u) {
  SeriesUW out(order_w, order_u);
  const std::size_t n = std::min({order_w, order_u, f.order()});
  for (std::size_t k = 0; k <= n; ++k) out.at(k, k) = f[k];
  return out;
}

static void require_same_shape(const SeriesUW& a, const SeriesUW& b) {
  if (a.order_w() != b.order_w() || a.order_u() != b.order_u())
    throw std::invalid_argument("bivariate series shapes differ");
}

SeriesUW operator+(const SeriesUW& a, const SeriesUW& b) {
  require_same_shape(a, b);
  SeriesUW out(a.order_w(), a.order_u());
  for (std::size_t i = 0; i <= a.order_w(); ++i)
    for (std::size_t j = 0; j <= a.order_u(); ++j)
      out.at(i, j) = a.at(i, j) + b.at(i, j);
  return out;
}

SeriesUW operator-(const SeriesUW& a, const SeriesUW& b) {
  require_same_shape(a, b);
  SeriesUW out(a.order_w(), a.order_u());
  for (std::size_t i = 0; i <= a.order_w(); ++i)
    for (std::size_t j = 0; j <= a.order_u(); ++j)
      out.at(i, j) = a.at(i, j) - b.at(i, j);
  return out;
}

SeriesUW mul_w(const SeriesUW& a, const SeriesU& f_w) {
  SeriesUW out(a.order_w(), a.order_u());
  for (std::size_t k = 0; k <= std::min(f_w.order(), a.order_w()); ++k) {
    if (f_w[k] == 0.0) continue;
    const double fk = f_w[k];
    for (std::size_t i = 0; i + k <= a.order_w(); ++i)
      for (std::size_t j = 0; j <= a.order_u(); ++j)
        out.at(i + k, j) += fk * a.at(i, j);
  }
  return out;
}

SeriesUW mul_u(const SeriesUW& a, const SeriesU& f_u) {
  SeriesUW out(a.order_w(), a.order_u());
  for (std::size_t i = 0; i <= a.order_w(); ++i)
    for (std::size_t j = 0; j <= a.order_u(); ++j) {
      const double aij = a.at(i, j);
      if (aij == 0.0) continue;
      const std::size_t kmax = std::min(f_u.order(), a.order_u() - j);
      for (std::size_t k = 0; k <= kmax; ++k)
        out.at(i, j + k) += aij * f_u[k];
    }
  return out;
}

SeriesUW shift_u(const SeriesUW& a) {
  SeriesUW out(a.order_w(), a.order_u());
  for (std::size_t i = 0; i <= a.order_w(); ++i)
    for (std::size_t j = 1; j <= a.order_u(); ++j)
      out.at(i, j) = a.at(i, j - 1);
  return out;
}

SeriesUW divided_difference(const SeriesU& psi, std::size_t order_w,
                            std::size_t order_u) {
  if (psi[0] != 0.0)
    throw std::domain_error(
        "divided difference needs a waiting-time series with psi_0 = 0");
  SeriesUW out(order_w, order_u);
  for (std::size_t i = 0; i <= order_w; ++i)
    for (std::size_t j = 0; j <= order_u; ++j) {
      const std::size_t k = i + j + 1;
      if (k <= psi.order()) out.at(i, j) = psi[k];
    }
  return out;
}

}  // namespace srw
