#pragma once

#include <cstddef>
#include <vector>

#include "srw/series.hpp"

namespace srw {

// Truncated bivariate power series on a rectangular grid: coefficient (i, j)
// multiplies w^i u^j. Same truncation discipline as Series: operations never
// write coefficients they cannot know exactly.
class SeriesUW {
 public:
  SeriesUW(std::size_t order_w, std::size_t order_u);

  std::size_t order_w() const { return nw_; }
  std::size_t order_u() const { return nu_; }

  double& at(std::size_t iw, std::size_t iu) { return c_[iw * (nu_ + 1) + iu]; }
  double at(std::size_t iw, std::size_t iu) const {
    return c_[iw * (nu_ + 1) + iu];
  }

  // f(w) * g(u) as a coefficient grid.
  static SeriesUW outer(const SeriesU& f_w, const SeriesU& g_u);

  // f(w u): coefficient k of f lands at grid cell (k, k).
  static SeriesUW diagonal(const SeriesU& f, std::size_t order_w,
                           std::size_t order_u);

 private:
  std::size_t nw_, nu_;
  std::vector<double> c_;
};

SeriesUW operator+(const SeriesUW& a, const SeriesUW& b);
SeriesUW operator-(const SeriesUW& a, const SeriesUW& b);

// Multiply each u-column (resp. w-row) by a univariate series.
SeriesUW mul_w(const SeriesUW& a, const SeriesU& f_w);
SeriesUW mul_u(const SeriesUW& a, const SeriesU& f_u);

// Multiplication by u: columns shift right, the top column is dropped.
SeriesUW shift_u(const SeriesUW& a);

// Divided difference (psi(u) - psi(w)) / (u - w) of a waiting-time generating
// function with psi_0 = 0: grid cell (i, j) is psi_{i+j+1}. Cells needing
// coefficients beyond psi's order stay zero (truncation).
SeriesUW divided_difference(const SeriesU& psi, std::size_t order_w,
                            std::size_t order_u);

}  // namespace srw
