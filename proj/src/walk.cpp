#include "srw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "srw/errors.hpp"
#include "srw/renewal.hpp"

namespace srw {

namespace {

int resolve_threads(int requested, std::int64_t work_items) {
  int n = requested > 0
              ? requested
              : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  return static_cast<int>(
      std::min<std::int64_t>(n, std::max<std::int64_t>(work_items, 1)));
}

int validate_sigma0(int sigma0) {
  if (sigma0 != 1 && sigma0 != -1)
    throw std::domain_error("sigma0 must be +1 or -1");
  return sigma0;
}

// Integer partial sums per thread; merging them is associative and exact, so
// the ensemble moments cannot depend on the thread count.
struct Partials {
  std::vector<std::int64_t> sx, sx2;
  std::vector<unsigned __int128> sx4;
  std::vector<std::uint64_t> hist;
};

}  // namespace

PropagatorTable WalkEnsembleResult::histogram_probs(std::int64_t horizon) const {
  PropagatorTable table(horizon);
  if (!has_histogram || histogram.size() != table.data.size())
    throw std::logic_error("ensemble was run without a histogram");
  const double inv = 1.0 / static_cast<double>(stats.walkers);
  for (std::size_t i = 0; i < table.data.size(); ++i)
    table.data[i] = static_cast<double>(histogram[i]) * inv;
  return table;
}

WalkEnsembleResult simulate_walk(const GsdParams& p, const WalkConfig& cfg) {
  const std::int64_t T = cfg.horizon;
  if (T < 1 || T > kMaxExactHorizon)
    throw ResourceCapError("walk horizon outside [1, 16384]");
  if (cfg.histogram && T > kMaxHistogramHorizon)
    throw ResourceCapError("histogram horizon outside [1, 2048]");
  if (cfg.walkers < 1) throw std::domain_error("need at least one walker");

  std::vector<double> alpha(T + 2);
  for (std::int64_t k = 1; k <= T + 1; ++k) alpha[k] = gsd_hazard(p, k);

  const int nthreads = resolve_threads(cfg.threads, cfg.walkers);
  const std::size_t hist_cells = (T + 1) * (2 * T + 1);
  std::vector<Partials> parts(nthreads);

  auto worker = [&](int tid) {
    Partials& part = parts[tid];
    part.sx.assign(T + 1, 0);
    part.sx2.assign(T + 1, 0);
    part.sx4.assign(T + 1, 0);
    if (cfg.histogram) part.hist.assign(hist_cells, 0);
    for (std::int64_t w = tid; w < cfg.walkers; w += nthreads) {
      Xoshiro256pp rng(cfg.seed, static_cast<std::uint64_t>(w));
      int sigma0 = 1;
      if (cfg.sigma0 == Sigma0Mode::Minus) sigma0 = -1;
      if (cfg.sigma0 == Sigma0Mode::Random) sigma0 = (rng.next() & 1) ? 1 : -1;
      std::int64_t X = 0;
      int parity = 0;
      std::int64_t k = 1;
      if (cfg.histogram) ++part.hist[T];  // t = 0, X = 0
      for (std::int64_t t = 1; t <= T; ++t) {
        if (rng.uniform() < alpha[k]) {
          parity ^= 1;
          k = 1;
        } else {
          ++k;
        }
        X += parity ? -sigma0 : sigma0;
        part.sx[t] += X;
        const std::int64_t X2 = X * X;
        part.sx2[t] += X2;
        part.sx4[t] += static_cast<unsigned __int128>(X2) *
                       static_cast<unsigned __int128>(X2);
        if (cfg.histogram) ++part.hist[t * (2 * T + 1) + X + T];
      }
    }
  };

  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int tid = 0; tid < nthreads; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }

  WalkEnsembleResult out;
  out.stats.walkers = cfg.walkers;
  out.stats.mean.assign(T + 1, 0.0);
  out.stats.msd.assign(T + 1, 0.0);
  out.stats.sem_mean.assign(T + 1, 0.0);
  out.stats.sem_msd.assign(T + 1, 0.0);
  if (cfg.histogram) {
    out.has_histogram = true;
    out.histogram.assign(hist_cells, 0);
    for (const auto& part : parts)
      for (std::size_t i = 0; i < hist_cells; ++i)
        out.histogram[i] += part.hist[i];
  }

  const double n = static_cast<double>(cfg.walkers);
  for (std::int64_t t = 1; t <= T; ++t) {
    std::int64_t sx = 0, sx2 = 0;
    unsigned __int128 sx4 = 0;
    for (const auto& part : parts) {
      sx += part.sx[t];
      sx2 += part.sx2[t];
      sx4 += part.sx4[t];
    }
    const double mean = static_cast<double>(sx) / n;
    const double msd = static_cast<double>(sx2) / n;
    const double m4 = static_cast<double>(sx4) / n;
    out.stats.mean[t] = mean;
    out.stats.msd[t] = msd;
    out.stats.sem_mean[t] =
        std::sqrt(std::max(0.0, (msd - mean * mean) / n));
    out.stats.sem_msd[t] = std::sqrt(std::max(0.0, (m4 - msd * msd) / n));
  }
  return out;
}

SeriesU mean_step_exact(const GsdParams& p, std::size_t horizon, int sigma0) {
  validate_sigma0(sigma0);
  if (horizon > static_cast<std::size_t>(kMaxExactHorizon))
    throw ResourceCapError("exact horizon above 16384");
  const SeriesU psi = gsd_pmf_via_gf(p, horizon);
  // <sigma_t> reads off the parity polynomial at v = -1.
  SeriesU out = state_polynomial_exact(psi, -1.0, horizon);
  out[0] -= 1.0;
  return out * static_cast<double>(sigma0);
}

SeriesU expected_position_exact(const GsdParams& p, std::size_t horizon,
                                int sigma0) {
  validate_sigma0(sigma0);
  if (horizon > static_cast<std::size_t>(kMaxExactHorizon))
    throw ResourceCapError("exact horizon above 16384");
  const SeriesU psi = gsd_pmf_via_gf(p, horizon);
  const SeriesU one = constant_series(horizon, 1.0);
  const SeriesU parity = cumsum((one - psi) * recip(one + psi));
  return static_cast<double>(sigma0) * (cumsum(parity) - cumsum(one));
}

SeriesU msd_exact(const GsdParams& p, std::size_t horizon) {
  if (horizon > static_cast<std::size_t>(kMaxExactHorizon))
    throw ResourceCapError("exact horizon above 16384");
  const SeriesU psi = gsd_pmf_via_gf(p, horizon);
  const SeriesU one = constant_series(horizon, 1.0);
  const SeriesU B = one - psi;
  const SeriesU C = one + psi;
  // K(u) = 1/(1-u)^3 - [2 u psi' + (1-psibar)^2] / [(1-u)^2 (1-psibar^2)]
  const SeriesU frac =
      (2.0 * times_index(psi) + B * B) * recip(B * C);
  const SeriesU second = cumsum(cumsum(frac));
  SeriesU msd(horizon);
  for (std::size_t t = 0; t <= horizon; ++t) {
    const double td = static_cast<double>(t);
    const double K = (td + 1.0) * (td + 2.0) / 2.0 - second[t];
    msd[t] = 2.0 * K - td;
  }
  return msd;
}

PropagatorTable propagator_dp(const GsdParams& p, std::int64_t horizon,
                              int sigma0) {
  validate_sigma0(sigma0);
  const std::int64_t T = horizon;
  if (T < 0 || T > kMaxPropagatorHorizon)
    throw ResourceCapError("propagator horizon outside [0, 1024]");

  std::vector<double> alpha(T + 2, 0.0);
  for (std::int64_t k = 1; k <= T + 1; ++k) alpha[k] = gsd_hazard(p, k);

  // State layout: ((X + T) * 2 + parity) * (T + 2) + age.
  const std::size_t row = static_cast<std::size_t>(T) + 2;
  const std::size_t cells = (2 * T + 1) * 2 * row;
  std::vector<double> cur(cells, 0.0), nxt(cells, 0.0);
  auto idx = [&](std::int64_t X, int parity, std::int64_t k) {
    return (static_cast<std::size_t>(X + T) * 2 + parity) * row +
           static_cast<std::size_t>(k);
  };

  PropagatorTable table(T);
  cur[idx(0, 0, 1)] = 1.0;
  table.at(0, 0) = 1.0;

  for (std::int64_t t = 1; t <= T; ++t) {
    for (std::int64_t X = -t; X <= t; ++X)
      for (int parity = 0; parity < 2; ++parity)
        std::memset(&nxt[idx(X, parity, 0)], 0, (t + 2) * sizeof(double));

    for (std::int64_t X = -(t - 1); X <= t - 1; ++X)
      for (int parity = 0; parity < 2; ++parity) {
        const std::size_t base = idx(X, parity, 0);
        const int stay_step = (parity == 0) ? sigma0 : -sigma0;
        const int flip_step = -stay_step;
        for (std::int64_t k = 1; k <= t; ++k) {
          const double mass = cur[base + k];
          if (mass == 0.0) continue;
          const double a = alpha[k];
          nxt[idx(X + flip_step, parity ^ 1, 1)] += mass * a;
          nxt[idx(X + stay_step, parity, k + 1)] += mass * (1.0 - a);
        }
      }
    cur.swap(nxt);

    for (std::int64_t X = -t; X <= t; ++X) {
      double acc = 0.0;
      for (int parity = 0; parity < 2; ++parity) {
        const std::size_t base = idx(X, parity, 0);
        for (std::int64_t k = 1; k <= t + 1; ++k) acc += cur[base + k];
      }
      table.at(X, t) = acc;
    }
  }
  return table;
}

PropagatorTable propagator_cf(const GsdParams& p, std::int64_t horizon,
                              int sigma0, int threads, double* max_imag_out) {
  validate_sigma0(sigma0);
  const std::int64_t T = horizon;
  if (T < 0 || T > kMaxPropagatorHorizon)
    throw ResourceCapError("propagator horizon outside [0, 1024]");

  using cd = std::complex<double>;
  const std::int64_t M = 2 * T + 1;
  const SeriesU psi = gsd_pmf_via_gf(p, T);
  const SeriesU surv = cumsum(constant_series(static_cast<std::size_t>(T), 1.0) - psi);

  std::vector<std::vector<cd>> per_angle(M);
  const int nthreads = resolve_threads(threads, M);
  auto worker = [&](int tid) {
    for (std::int64_t j = tid; j < M; j += nthreads) {
      const double phi = -M_PI + 2.0 * M_PI * j / M;
      const cd z1 = std::polar(1.0, -phi * sigma0);
      const cd z2 = std::polar(1.0, phi * sigma0);
      const SeriesUC psi1 = with_scaled_argument(psi, z1);
      const SeriesUC psi2 = with_scaled_argument(psi, z2);
      const SeriesUC sv1 = with_scaled_argument(surv, z1);
      const SeriesUC sv2 = with_scaled_argument(surv, z2);
      const SeriesUC term = sv1 + (z2 / z1) * (psi1 * sv2);
      const SeriesUC den =
          constant_series(static_cast<std::size_t>(T), cd{1.0, 0.0}) -
          psi1 * psi2;
      per_angle[j] = (term * recip(den)).coeffs();
    }
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int tid = 0; tid < nthreads; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }

  PropagatorTable table(T);
  double max_imag = 0.0;
  std::vector<cd> acc(T + 1);
  for (std::int64_t X = -T; X <= T; ++X) {
    std::fill(acc.begin(), acc.end(), cd{});
    for (std::int64_t j = 0; j < M; ++j) {
      const double phi = -M_PI + 2.0 * M_PI * j / M;
      const cd phase = std::polar(1.0, phi * X);
      const auto& col = per_angle[j];
      for (std::int64_t t = 0; t <= T; ++t) acc[t] += phase * col[t];
    }
    for (std::int64_t t = 0; t <= T; ++t) {
      const cd v = acc[t] / static_cast<double>(M);
      table.at(X, t) = v.real();
      max_imag = std::max(max_imag, std::abs(v.imag()));
    }
  }
  if (max_imag_out) *max_imag_out = max_imag;
  return table;
}

}  // namespace srw
