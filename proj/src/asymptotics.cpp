#include "srw/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace srw {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double plateau_value(const GsdParams& p) {
  return -(p.m - 3 + 2 * p.mu) / (2.0 * (p.lambda - 1.0));
}

double relax_prefactor_value(const GsdParams& p) {
  return -std::exp(std::lgamma(p.m) - std::lgamma(1.0 - p.mu)) /
         (2.0 * (p.lambda - 1.0));
}
}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Ballistic: return "ballistic";
    case Regime::Superdiffusive: return "superdiffusive";
    case Regime::Normal: return "normal";
    case Regime::Oscillatory: return "oscillatory";
  }
  return "unknown";
}

RegimeReport classify_regime(const GsdParams& p) {
  RegimeReport r{Regime::Oscillatory, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
  if (p.integer_order()) {
    // Deterministic flip every step: positions cycle, MSD stays bounded.
    r.msd_exponent = 0.0;
    r.position_exponent = 0.0;
    return r;
  }
  if (p.lambda < 1.0) {
    r.regime = Regime::Ballistic;
    r.msd_exponent = 2.0;
    r.msd_prefactor = 1.0 - p.lambda;
    r.position_exponent = 1.0 - p.lambda;
    r.position_prefactor = 1.0 / (2.0 * std::tgamma(2.0 - p.lambda));
    return r;
  }
  r.regime = p.lambda < 2.0 ? Regime::Superdiffusive : Regime::Normal;
  if (p.lambda < 2.0) {
    r.msd_exponent = 3.0 - p.lambda;
    r.msd_prefactor = 2.0 * (p.lambda - 1.0) / std::tgamma(4.0 - p.lambda);
  } else {
    const GsdMoments mo = gsd_moments(p);
    r.msd_exponent = 1.0;
    r.msd_prefactor = mo.variance / mo.mean;
  }
  r.position_exponent = 0.0;
  r.plateau = plateau_value(p);
  r.position_prefactor = r.plateau;
  r.relax_exponent = -(p.lambda - 1.0);
  r.relax_prefactor = relax_prefactor_value(p);
  return r;
}

double predict_position(const GsdParams& p, double t, int sigma0) {
  if (sigma0 != 1 && sigma0 != -1)
    throw std::domain_error("sigma0 must be +1 or -1");
  if (p.integer_order())
    throw std::domain_error("position predictor needs non-integer lambda");
  if (!(t > 0)) throw std::domain_error("predictor needs t > 0");
  if (p.lambda < 1.0)
    return sigma0 * std::pow(t, 1.0 - p.lambda) /
           (2.0 * std::tgamma(2.0 - p.lambda));
  // Plateau plus its slowest correction, which decays only as t^{-(lambda-1)}.
  return sigma0 * (plateau_value(p) +
                   relax_prefactor_value(p) * std::pow(t, -(p.lambda - 1.0)));
}

double predict_msd(const GsdParams& p, double t) {
  if (p.integer_order())
    throw std::domain_error("MSD predictor needs non-integer lambda");
  if (!(t > 0)) throw std::domain_error("predictor needs t > 0");
  if (p.lambda < 1.0) return (1.0 - p.lambda) * t * t;
  if (p.lambda < 2.0)
    return 2.0 * (p.lambda - 1.0) / std::tgamma(4.0 - p.lambda) *
           std::pow(t, 3.0 - p.lambda);
  const GsdMoments mo = gsd_moments(p);
  return mo.variance / mo.mean * t;
}

LimitDiagnostics limit_diagnostics(int n, double eps, std::int64_t truncation) {
  if (n < 2 || n > 20) throw std::domain_error("diagnostics need 2 <= n <= 20");
  if (!(eps > 0.0) || !(eps < 0.5))
    throw std::domain_error("diagnostics need 0 < eps < 0.5");
  if (truncation < 100) throw std::domain_error("truncation too small");
  const double R = static_cast<double>(truncation);

  LimitDiagnostics d{};
  d.n = n;
  d.eps = eps;
  d.truncation = R;

  {
    const GsdParams p(2.0 + eps);
    const GsdMoments mo = gsd_moments(p);
    d.var_plus_ratio = eps * mo.variance / (2.0 * mo.mean);
  }

  {
    // lambda = 2 - eps: the pair-count factor is a delta sequence whose
    // partial sums are (eps)_t / t!; summed over the support they carry the
    // whole limit variance.
    double b2 = 0.0, term = 1.0;
    for (std::int64_t t = 0; t <= truncation; ++t) {
      b2 += term;
      term *= (eps + t) / (t + 1.0);
    }
    const double mean = 1.0 / (1.0 - eps);
    d.var_minus = 2.0 * b2 + mean - mean * mean;
  }

  // lambda = n - eps: all the n-th moment mass sits in the scaling tail, so
  // integrating the limit tail density over (0, R] is the honest estimate.
  d.moment_minus = (n - eps) * std::tgamma(n) * std::pow(R, eps) /
                   std::tgamma(1.0 + eps);
  d.moment_minus_target = std::tgamma(n + 1.0);

  {
    const GsdParams p(n + eps);
    double psi = p.lambda / p.m;
    double sum = 0.0;
    for (std::int64_t t = 1; t <= truncation; ++t) {
      double tn = 1.0;
      for (int i = 0; i < n; ++i) tn *= static_cast<double>(t);
      sum += tn * psi;
      psi *= (p.m + t - 1 - p.lambda) / (p.m + t);
    }
    const double tail_const =
        p.lambda * std::exp(std::lgamma(p.m) - std::lgamma(p.m - p.lambda));
    const double tail = tail_const * std::pow(R, -eps) / eps;
    d.moment_plus_ratio =
        (sum + tail) * eps / (n * std::tgamma(n + 1.0));
  }
  return d;
}

PowerLawFit fit_power_law(const std::vector<double>& values, std::size_t t_lo,
                          std::size_t t_hi) {
  if (t_lo < 1 || t_hi <= t_lo || t_hi >= values.size())
    throw std::domain_error("fit window must satisfy 1 <= lo < hi < size");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(t_hi - t_lo + 1);
  for (std::size_t t = t_lo; t <= t_hi; ++t) {
    if (!(values[t] > 0.0))
      throw std::domain_error("power-law fit needs positive data");
    const double x = std::log(static_cast<double>(t));
    const double y = std::log(values[t]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double var = sxx - sx * sx / count;
  PowerLawFit fit{};
  fit.exponent = (sxy - sx * sy / count) / var;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / count);
  double rss = 0;
  for (std::size_t t = t_lo; t <= t_hi; ++t) {
    const double pred = std::log(fit.prefactor) +
                        fit.exponent * std::log(static_cast<double>(t));
    const double rr = std::log(values[t]) - pred;
    rss += rr * rr;
  }
  fit.rms_log_residual = std::sqrt(rss / count);
  return fit;
}

}  // namespace srw
