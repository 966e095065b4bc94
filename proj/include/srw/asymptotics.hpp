#pragma once

#include <cstdint>
#include <vector>

#include "srw/gsd.hpp"

namespace srw {

enum class Regime {
  Ballistic,       // 0 < lambda < 1: mean position grows, MSD ~ t^2
  Superdiffusive,  // 1 < lambda < 2: plateauing mean, MSD ~ t^{3-lambda}
  Normal,          // lambda > 2: plateauing mean, MSD ~ t
  Oscillatory,     // integer lambda: deterministic period-2 walk
};

// Leading long-time behavior for one parameter point. Fields that do not
// apply to the regime (plateau in the ballistic phase, growth prefactor in
// the plateau phases, everything for the oscillator) are NaN.
struct RegimeReport {
  Regime regime;
  double msd_exponent;
  double msd_prefactor;
  double position_exponent;   // <X_t> ~ prefactor * t^exponent (sigma0 = +1)
  double position_prefactor;
  double plateau;             // limit of <X_t> for lambda > 1 (sigma0 = +1)
  double relax_exponent;      // plateau approach: plateau + c * t^{-(lambda-1)}
  double relax_prefactor;
};

const char* regime_name(Regime r);

RegimeReport classify_regime(const GsdParams& p);

// Leading-order <X_t> for non-integer lambda and sigma0 = +1 or -1. Includes
// the slowest correction term in the plateau phases, since at practical
// horizons that term is still visible.
double predict_position(const GsdParams& p, double t, int sigma0);

// Leading-order <X_t^2>: (1-lambda) t^2, 2(lambda-1)/Gamma(4-lambda) t^{3-lambda},
// or the linear law with slope variance/mean of the waiting time.
double predict_msd(const GsdParams& p, double t);

// Degenerate-limit diagnostics at distance eps from the integer boundaries,
// all built to approach known constants as eps -> 0:
//   var_plus_ratio   eps * Var[T] / (2 <T>) at lambda = 2 + eps      -> 1
//   var_minus        delta-sequence variance at lambda = 2 - eps     -> 2
//   moment_minus     <T^n> at lambda = n - eps over support (0, R]   -> n!
//   moment_plus_ratio <T^n> eps / (n n!) at lambda = n + eps         -> 1
// moment_plus sums the pmf up to R and adds the exact power-tail remainder.
struct LimitDiagnostics {
  int n;
  double eps;
  double truncation;
  double var_plus_ratio;
  double var_minus;
  double moment_minus;
  double moment_minus_target;
  double moment_plus_ratio;
};

LimitDiagnostics limit_diagnostics(int n, double eps,
                                   std::int64_t truncation = 10000000);

// Least squares on (log t, log v) over t = t_lo..t_hi (inclusive, indices
// into values). Rejects nonpositive data in the window.
struct PowerLawFit {
  double exponent;
  double prefactor;
  double rms_log_residual;
};

PowerLawFit fit_power_law(const std::vector<double>& values, std::size_t t_lo,
                          std::size_t t_hi);

}  // namespace srw
