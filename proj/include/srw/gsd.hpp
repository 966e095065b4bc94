#pragma once

#include <cstdint>
#include <vector>

#include "srw/rng.hpp"
#include "srw/series.hpp"

namespace srw {

// Parameters of the generalized Sibuya waiting-time law with index lambda > 0:
// m = ceil(lambda), mu = lambda - m + 1 in (0, 1]. Integer lambda degenerates
// to the deterministic unit waiting time psi(t) = [t == 1].
struct GsdParams {
  double lambda;
  int m;
  double mu;

  explicit GsdParams(double lambda_in);

  bool integer_order() const { return mu == 1.0; }
};

// Low-order moments; entries are +infinity where the tail index makes them
// diverge (mean for lambda <= 1, second moment and variance for lambda <= 2,
// except at integer lambda where the law is deterministic).
struct GsdMoments {
  double mean;
  double b2;  // second factorial-like combination <T(T-1)>/2
  double second_moment;
  double variance;
};

// Probability of waiting exactly t steps, t >= 1. Product form, O(t).
double gsd_pmf(const GsdParams& p, std::int64_t t);

// Same law from its generating function: series built out of (1-u)^lambda
// truncation algebra. Returns coefficients for t = 0..order with psi_0 = 0.
SeriesU gsd_pmf_via_gf(const GsdParams& p, std::size_t order);

// Survival probability P[T > t], t >= 0. Product of (1 - hazard), O(t).
double gsd_survival(const GsdParams& p, std::int64_t t);

// Discrete hazard alpha_k = P[T = k | T >= k] = lambda / (m + k - 1), k >= 1.
double gsd_hazard(const GsdParams& p, std::int64_t k);

GsdMoments gsd_moments(const GsdParams& p);

// Power-law tail approximation lambda Gamma(m)/Gamma(m-lambda) t^{-lambda-1}.
// Rejects integer lambda, whose law has no power tail.
double gsd_tail_asymptote(const GsdParams& p, double t);

// Generating function of the survival sequence, a Gauss hypergeometric value
// 2F1(1, m - lambda; m; u) for u in [0, 1]. At u = 1 requires m > 1 and
// returns (m-1)/(lambda-1), the mean waiting time.
double hypergeo_survival_gf(const GsdParams& p, double u);

// Waiting law of a success under Bernoulli(xi/(xi+1)) thinning of arrivals:
// xi psi / (xi + 1 - psi) as a coefficient series.
SeriesU bernoulli_gsp_gf(const GsdParams& p, double xi, std::size_t order);

// |psi(e^{-h s}) - scaling limit| with the limit 1 - (h s)^lambda below index
// one and 1 - h s <T> above it. Series order adapts to h*s; rejects integer
// lambda. For s = 0 this is a pure truncation residual.
double scaling_limit_residual(const GsdParams& p, double h, double s);

// One exact draw by walking the hazard chain. Expected cost O(E[T]); for
// lambda < 1 that is infinite, so prefer GsdSampler::draw_capped there.
std::int64_t gsd_sample(const GsdParams& p, Xoshiro256pp& rng);

// Exact sampler with an optional inversion table over t <= table_cutoff and
// hazard-chain continuation beyond it, so heavy tails stay exact.
class GsdSampler {
 public:
  static constexpr std::size_t kDefaultCutoff = std::size_t{1} << 16;

  // Builds the table only where it pays off: the heavy-tailed regime
  // lambda < 1, where the plain chain has infinite expected cost.
  explicit GsdSampler(const GsdParams& p);

  // table_cutoff = 0 selects the pure hazard chain.
  GsdSampler(const GsdParams& p, std::size_t table_cutoff);

  std::int64_t draw(Xoshiro256pp& rng) const;

  // Exact draw of min(T, cap + 1): returns cap + 1 when the waiting time
  // exceeds cap (censored), never spending more than O(cap) work.
  std::int64_t draw_capped(Xoshiro256pp& rng, std::int64_t cap) const;

  std::size_t table_cutoff() const { return cdf_.size(); }

 private:
  GsdParams params_;
  std::vector<double> cdf_;  // cdf_[i] = P[T <= i + 1]
};

}  // namespace srw
