#pragma once

#include <cstdint>
#include <vector>

#include "srw/gsd.hpp"
#include "srw/series.hpp"

namespace srw {

// Horizon guards: exact coefficient routes are quadratic in the horizon,
// propagator grids cubic, histograms quadratic in memory.
inline constexpr std::int64_t kMaxExactHorizon = 16384;
inline constexpr std::int64_t kMaxPropagatorHorizon = 1024;
inline constexpr std::int64_t kMaxHistogramHorizon = 2048;

enum class Sigma0Mode { Plus, Minus, Random };

struct WalkConfig {
  std::int64_t horizon = 256;
  std::int64_t walkers = 10000;
  std::uint64_t seed = 1;
  Sigma0Mode sigma0 = Sigma0Mode::Plus;
  int threads = 1;  // 0 selects the hardware count
  bool histogram = false;
};

// Ensemble moments per time step, t = 0..horizon. Accumulation is exact in
// integers, so results are identical for any thread count.
struct EnsembleStats {
  std::int64_t walkers = 0;
  std::vector<double> mean;
  std::vector<double> msd;
  std::vector<double> sem_mean;
  std::vector<double> sem_msd;
};

// P(X, t) on the lattice X = -T..T, t = 0..T.
struct PropagatorTable {
  std::int64_t horizon = 0;
  std::vector<double> data;  // row t, column X + horizon

  explicit PropagatorTable(std::int64_t T)
      : horizon(T), data((T + 1) * (2 * T + 1), 0.0) {}

  double& at(std::int64_t X, std::int64_t t) {
    return data[t * (2 * horizon + 1) + (X + horizon)];
  }
  double at(std::int64_t X, std::int64_t t) const {
    return data[t * (2 * horizon + 1) + (X + horizon)];
  }
};

struct WalkEnsembleResult {
  EnsembleStats stats;
  std::vector<std::uint64_t> histogram;  // counts, layout as PropagatorTable
  bool has_histogram = false;

  PropagatorTable histogram_probs(std::int64_t horizon) const;
};

// Direction flips ride on a renewal process: one hazard trial per step, flip
// on arrival, then move one lattice unit in the current direction.
WalkEnsembleResult simulate_walk(const GsdParams& p, const WalkConfig& cfg);

// <sigma_t> = sigma0 (P(-1, t) - [t == 0]) via the state polynomial at v = -1.
SeriesU mean_step_exact(const GsdParams& p, std::size_t horizon, int sigma0);

// Coefficients of sigma0 [ (1-psibar)/((1-u)^2 (1+psibar)) - 1/(1-u) ].
SeriesU expected_position_exact(const GsdParams& p, std::size_t horizon,
                                int sigma0);

// <X_t^2> from the second-derivative generating function; independent of
// sigma0 by symmetry.
SeriesU msd_exact(const GsdParams& p, std::size_t horizon);

// Exact lattice propagator by dynamic programming over (X, parity, age).
PropagatorTable propagator_dp(const GsdParams& p, std::int64_t horizon,
                              int sigma0);

// Same law through the characteristic-function representation, inverted on
// the discrete Fourier grid of 2T+1 angles. max_imag_out, when given,
// receives the largest imaginary residue discarded by the inversion.
PropagatorTable propagator_cf(const GsdParams& p, std::int64_t horizon,
                              int sigma0, int threads = 1,
                              double* max_imag_out = nullptr);

}  // namespace srw
