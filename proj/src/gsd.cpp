#include "srw/gsd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace srw {

GsdParams::GsdParams(double lambda_in) : lambda(lambda_in) {
  if (!std::isfinite(lambda) || !(lambda > 0.0))
    throw std::domain_error("lambda must be positive and finite");
  if (lambda > 1e6)
    throw std::domain_error("lambda out of supported range (max 1e6)");
  m = static_cast<int>(std::ceil(lambda));
  mu = lambda - m + 1;
}

double gsd_pmf(const GsdParams& p, std::int64_t t) {
  if (t < 1) throw std::domain_error("waiting times start at t = 1");
  // psi(t) = alpha_t * prod_{k<t} (1 - alpha_k), each factor in [0, 1).
  double acc = p.lambda / (p.m + t - 1);
  for (std::int64_t j = 0; j <= t - 2; ++j) acc *= 1.0 - p.lambda / (p.m + j);
  return acc;
}

SeriesU gsd_pmf_via_gf(const GsdParams& p, std::size_t order) {
  // u^{m-1} psibar(u) = [H(u) - (1-u)^lambda] / H(1) with H the truncation of
  // (1-u)^lambda below order m; so psi_t = -c_{t+m-1}/H(1) for t >= 1.
  const SeriesU c = binomial_series(p.lambda, order + p.m - 1);
  double h1 = 1.0;
  for (int j = 0; j < p.m - 1; ++j) h1 *= (1.0 - p.lambda + j) / (1.0 + j);
  SeriesU psi(order);
  for (std::size_t t = 1; t <= order; ++t)
    psi[t] = -c[t + p.m - 1] / h1;
  return psi;
}

double gsd_survival(const GsdParams& p, std::int64_t t) {
  if (t < 0) throw std::domain_error("survival needs t >= 0");
  double acc = 1.0;
  for (std::int64_t r = 0; r < t; ++r) acc *= 1.0 - p.lambda / (p.m + r);
  return acc;
}

double gsd_hazard(const GsdParams& p, std::int64_t k) {
  if (k < 1) throw std::domain_error("hazard index starts at k = 1");
  return p.lambda / (p.m + k - 1);
}

GsdMoments gsd_moments(const GsdParams& p) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (p.integer_order()) return {1.0, 0.0, 1.0, 0.0};
  GsdMoments mo{inf, inf, inf, inf};
  if (p.lambda > 1.0) mo.mean = (p.m - 1) / (p.lambda - 1.0);
  if (p.lambda > 2.0) {
    mo.b2 = (p.m - 1) * (p.m - p.lambda) / ((p.lambda - 1.0) * (p.lambda - 2.0));
    mo.second_moment = 2.0 * mo.b2 + mo.mean;
    mo.variance = p.lambda * (p.m - 1) * (p.m - p.lambda) /
                  ((p.lambda - 1.0) * (p.lambda - 1.0) * (p.lambda - 2.0));
  }
  return mo;
}

double gsd_tail_asymptote(const GsdParams& p, double t) {
  if (p.integer_order())
    throw std::domain_error("integer lambda has a deterministic law, no power tail");
  if (!(t > 0)) throw std::domain_error("tail asymptote needs t > 0");
  // Gamma(m)/Gamma(m - lambda) with m - lambda = 1 - mu in (0, 1).
  const double ratio = std::exp(std::lgamma(p.m) - std::lgamma(p.m - p.lambda));
  return p.lambda * ratio * std::pow(t, -p.lambda - 1.0);
}

double hypergeo_survival_gf(const GsdParams& p, double u) {
  if (!(u >= 0.0) || !(u <= 1.0))
    throw std::domain_error("survival generating function defined on [0, 1]");
  if (u == 1.0) {
    if (p.m == 1)
      throw std::domain_error("survival series diverges at u = 1 for m = 1");
    // Gauss value at unit argument collapses to the mean waiting time.
    return (p.m - 1) / (p.lambda - 1.0);
  }
  // 2F1(1, m - lambda; m; u): forward term recursion, positive terms.
  double term = 1.0, sum = 1.0;
  for (std::int64_t r = 0; r < 200000000; ++r) {
    term *= (p.m - p.lambda + r) / (p.m + r) * u;
    sum += term;
    if (term <= sum * 1e-17) return sum;
  }
  throw std::runtime_error("hypergeometric sum did not converge");
}

SeriesU bernoulli_gsp_gf(const GsdParams& p, double xi, std::size_t order) {
  if (!(xi > 0.0)) throw std::domain_error("thinning odds xi must be positive");
  const SeriesU psi = gsd_pmf_via_gf(p, order);
  const SeriesU den = constant_series(order, xi + 1.0) - psi;
  return (xi * psi) * recip(den);
}

double scaling_limit_residual(const GsdParams& p, double h, double s) {
  if (p.integer_order())
    throw std::domain_error("scaling limits need non-integer lambda");
  if (!(h > 0.0) || !(s >= 0.0))
    throw std::domain_error("need h > 0 and s >= 0");
  std::size_t order = 4096;
  if (s > 0.0) {
    // e^{-h s t} is negligible past t ~ 40/(h s); cap keeps memory desk-scale.
    const double need = 40.0 / (h * s);
    order = static_cast<std::size_t>(
        std::clamp(need, 4096.0, static_cast<double>(std::size_t{1} << 22)));
  }
  const SeriesU psi = gsd_pmf_via_gf(p, order);
  const double value = eval_series(psi, std::exp(-h * s));
  const double target = p.lambda < 1.0
                            ? 1.0 - std::pow(h * s, p.lambda)
                            : 1.0 - h * s * gsd_moments(p).mean;
  return std::abs(value - target);
}

std::int64_t gsd_sample(const GsdParams& p, Xoshiro256pp& rng) {
  std::int64_t k = 1;
  while (!rng.bernoulli(p.lambda / (p.m + k - 1))) ++k;
  return k;
}

GsdSampler::GsdSampler(const GsdParams& p)
    : GsdSampler(p, p.lambda < 1.0 ? kDefaultCutoff : 0) {}

GsdSampler::GsdSampler(const GsdParams& p, std::size_t table_cutoff)
    : params_(p) {
  cdf_.reserve(table_cutoff);
  double surv = 1.0;
  for (std::size_t k = 1; k <= table_cutoff; ++k) {
    surv *= 1.0 - p.lambda / (p.m + k - 1);
    cdf_.push_back(1.0 - surv);
  }
}

std::int64_t GsdSampler::draw(Xoshiro256pp& rng) const {
  if (!cdf_.empty()) {
    const double x = rng.uniform();
    if (x < cdf_.back()) {
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
      return static_cast<std::int64_t>(it - cdf_.begin()) + 1;
    }
    // Conditioned on T > cutoff the hazard chain continues unchanged.
    std::int64_t k = static_cast<std::int64_t>(cdf_.size()) + 1;
    while (!rng.bernoulli(params_.lambda / (params_.m + k - 1))) ++k;
    return k;
  }
  std::int64_t k = 1;
  while (!rng.bernoulli(params_.lambda / (params_.m + k - 1))) ++k;
  return k;
}

std::int64_t GsdSampler::draw_capped(Xoshiro256pp& rng,
                                     std::int64_t cap) const {
  if (cap < 1) throw std::domain_error("cap must be at least 1");
  const std::int64_t in_table =
      std::min<std::int64_t>(cap, static_cast<std::int64_t>(cdf_.size()));
  std::int64_t k = 1;
  if (in_table > 0) {
    const double x = rng.uniform();
    if (x < cdf_[in_table - 1]) {
      const auto end = cdf_.begin() + in_table;
      const auto it = std::upper_bound(cdf_.begin(), end, x);
      return static_cast<std::int64_t>(it - cdf_.begin()) + 1;
    }
    if (cap == in_table) return cap + 1;
    k = in_table + 1;
  }
  for (; k <= cap; ++k)
    if (rng.bernoulli(params_.lambda / (params_.m + k - 1))) return k;
  return cap + 1;
}

}  // namespace srw
