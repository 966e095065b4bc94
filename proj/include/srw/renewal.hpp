#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "srw/bivariate.hpp"
#include "srw/gsd.hpp"
#include "srw/rng.hpp"
#include "srw/series.hpp"

namespace srw {

// Waiting-time laws enter the renewal layer only through their discrete
// hazard alpha_k = P[T = k | T >= k], so simulation costs one Bernoulli trial
// per time step regardless of how heavy the tail is.

struct GsdLaw {
  GsdParams params;
  double hazard(std::int64_t k) const { return gsd_hazard(params, k); }
};

// Geometric waiting times: constant hazard (memoryless renewal).
struct BernoulliLaw {
  double p;
  double hazard(std::int64_t) const { return p; }
};

struct DeterministicLaw {
  double hazard(std::int64_t k) const { return k == 1 ? 1.0 : 0.0; }
};

// Finite-support law given by its pmf over t = 1..order. Mass missing from
// the table is interpreted as "no arrival ever" (defective law, hazard 0
// beyond the support).
class PmfLaw {
 public:
  explicit PmfLaw(const SeriesU& pmf) : alpha_(pmf.order() + 1, 0.0) {
    if (pmf[0] != 0.0)
      throw std::domain_error("waiting-time pmf needs psi_0 = 0");
    double surv = 1.0;
    for (std::size_t t = 1; t <= pmf.order(); ++t) {
      alpha_[t] = surv > 0.0 ? std::min(pmf[t] / surv, 1.0) : 0.0;
      surv -= pmf[t];
    }
  }

  double hazard(std::int64_t k) const {
    if (k < 1) throw std::domain_error("hazard index starts at k = 1");
    return k < static_cast<std::int64_t>(alpha_.size()) ? alpha_[k] : 0.0;
  }

 private:
  std::vector<double> alpha_;
};

struct RenewalPath {
  std::vector<std::int64_t> arrivals;
  std::int64_t horizon = 0;
};

template <typename Law>
RenewalPath simulate_counting(const Law& law, std::int64_t horizon,
                              Xoshiro256pp& rng) {
  if (horizon < 0) throw std::domain_error("horizon must be nonnegative");
  RenewalPath path;
  path.horizon = horizon;
  std::int64_t k = 1;
  for (std::int64_t step = 1; step <= horizon; ++step) {
    if (rng.bernoulli(law.hazard(k))) {
      path.arrivals.push_back(step);
      k = 1;
    } else {
      ++k;
    }
  }
  return path;
}

// P[N(t) = n] for n = 0..n_max, t = 0..horizon, plus the probability mass in
// states beyond n_max (reported, never renormalized away).
struct StateProbTable {
  std::size_t n_max = 0;
  std::size_t horizon = 0;
  std::vector<std::vector<double>> probs;  // [n][t]
  std::vector<double> remainder;           // [t]
};

// Coefficients of psibar^n (1 - psibar) / (1 - u); needs psi.order() >= horizon.
StateProbTable state_probs_exact(const SeriesU& psi, std::size_t n_max,
                                 std::size_t horizon);

// sum_n v^n P[N(t) = n] from (1 - psibar) / ((1 - u)(1 - v psibar)).
SeriesU state_polynomial_exact(const SeriesU& psi, double v,
                               std::size_t horizon);

// P[m arrivals in (tau, tau + t]] for an observation window opened after an
// aging span tau, on the grid m = 0..m_max, tau = 0..tau_max, t = 0..horizon.
struct AgedStateProbTable {
  std::size_t m_max = 0;
  std::size_t tau_max = 0;
  std::size_t horizon = 0;
  std::vector<double> data;       // [m][tau][t]
  std::vector<double> remainder;  // [tau][t]

  double at(std::size_t m, std::size_t tau, std::size_t t) const {
    return data[(m * (tau_max + 1) + tau) * (horizon + 1) + t];
  }
  double rem(std::size_t tau, std::size_t t) const {
    return remainder[tau * (horizon + 1) + t];
  }
};

// Bivariate generating-function route; needs psi.order() >= tau_max + horizon.
AgedStateProbTable aged_state_probs_exact(const SeriesU& psi,
                                          std::size_t m_max,
                                          std::size_t tau_max,
                                          std::size_t horizon);

struct McEstimate {
  std::vector<double> probs;
  std::vector<double> sem;
  std::int64_t paths = 0;
};

// Histogram of the aged increment count at one (tau, t) pair.
template <typename Law>
McEstimate aged_estimate_mc(const Law& law, std::int64_t tau, std::int64_t t,
                            std::int64_t paths, Xoshiro256pp& rng) {
  if (tau < 0 || t < 0 || paths < 1)
    throw std::domain_error("need tau >= 0, t >= 0, paths >= 1");
  std::vector<std::int64_t> counts(t + 1, 0);
  for (std::int64_t i = 0; i < paths; ++i) {
    std::int64_t k = 1, m = 0;
    for (std::int64_t step = 1; step <= tau + t; ++step) {
      if (rng.bernoulli(law.hazard(k))) {
        k = 1;
        if (step > tau) ++m;
      } else {
        ++k;
      }
    }
    ++counts[m];
  }
  McEstimate est;
  est.paths = paths;
  est.probs.resize(t + 1);
  est.sem.resize(t + 1);
  for (std::int64_t m = 0; m <= t; ++m) {
    const double ph = static_cast<double>(counts[m]) / paths;
    est.probs[m] = ph;
    est.sem[m] = std::sqrt(ph * (1.0 - ph) / paths);
  }
  return est;
}

// Joint law of the backward recurrence time and the arrival count: grid cell
// (tau, t) holds P[age tau, N(t) = n], read off survival(uw) psibar(u)^n / (1-uw).
SeriesUW backward_recurrence_exact(const SeriesU& psi, std::size_t n,
                                   std::size_t tau_max, std::size_t horizon);

}  // namespace srw
