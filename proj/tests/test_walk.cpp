#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "srw/errors.hpp"
#include "srw/walk.hpp"

using namespace srw;

namespace {

// Exhaustive enumeration over flip/no-flip outcomes: 2^T weighted paths give
// the exact propagator for tiny horizons, independent of any series algebra.
struct WalkOracle {
  GsdParams p;
  int sigma0;
  std::int64_t T;

  std::vector<std::vector<double>> run() const {
    std::vector<std::vector<double>> dist(T + 1,
                                          std::vector<double>(2 * T + 1, 0.0));
    dist[0][T] = 1.0;
    recurse(dist, 0, 0, 0, 1, 1.0);
    return dist;
  }

 private:
  void recurse(std::vector<std::vector<double>>& dist, std::int64_t t,
               std::int64_t X, int parity, std::int64_t age,
               double prob) const {
    if (t == T) return;
    const double alpha = gsd_hazard(p, age);
    // Flip branch: parity changes, age resets, step in the new direction.
    {
      const int np = parity ^ 1;
      const std::int64_t nx = X + (np ? -sigma0 : sigma0);
      dist[t + 1][nx + T] += prob * alpha;
      recurse(dist, t + 1, nx, np, 1, prob * alpha);
    }
    {
      const std::int64_t nx = X + (parity ? -sigma0 : sigma0);
      dist[t + 1][nx + T] += prob * (1.0 - alpha);
      recurse(dist, t + 1, nx, parity, age + 1, prob * (1.0 - alpha));
    }
  }
};

double table_mean(const PropagatorTable& tab, std::int64_t t) {
  double acc = 0.0;
  for (std::int64_t X = -tab.horizon; X <= tab.horizon; ++X)
    acc += X * tab.at(X, t);
  return acc;
}

double table_msd(const PropagatorTable& tab, std::int64_t t) {
  double acc = 0.0;
  for (std::int64_t X = -tab.horizon; X <= tab.horizon; ++X)
    acc += static_cast<double>(X) * X * tab.at(X, t);
  return acc;
}

}  // namespace

TEST_CASE("tiny horizons: enumeration, DP, CF, and series routes coincide") {
  for (double lambda : {0.5, 1.5, 2.5}) {
    const GsdParams p(lambda);
    const std::int64_t T = 6;
    const auto truth = WalkOracle{p, +1, T}.run();
    const PropagatorTable dp = propagator_dp(p, T, +1);
    double max_imag = 0.0;
    const PropagatorTable cf = propagator_cf(p, T, +1, 1, &max_imag);
    CHECK(max_imag <= 1e-12);

    double worst_dp = 0.0, worst_cf = 0.0;
    for (std::int64_t t = 0; t <= T; ++t)
      for (std::int64_t X = -T; X <= T; ++X) {
        worst_dp = std::max(worst_dp, std::abs(dp.at(X, t) - truth[t][X + T]));
        worst_cf = std::max(worst_cf, std::abs(cf.at(X, t) - truth[t][X + T]));
      }
    CHECK(worst_dp <= 1e-14);
    CHECK(worst_cf <= 1e-12);

    const SeriesU mean = expected_position_exact(p, T, +1);
    const SeriesU msd = msd_exact(p, T);
    const SeriesU step = mean_step_exact(p, T, +1);
    double cum = 0.0;
    for (std::int64_t t = 0; t <= T; ++t) {
      double m = 0.0, m2 = 0.0;
      for (std::int64_t X = -T; X <= T; ++X) {
        m += X * truth[t][X + T];
        m2 += static_cast<double>(X) * X * truth[t][X + T];
      }
      CHECK(mean[t] == doctest::Approx(m).epsilon(1e-13));
      CHECK(msd[t] == doctest::Approx(m2).epsilon(1e-13));
      if (t >= 1) cum += step[t];
      CHECK(cum == doctest::Approx(mean[t]).epsilon(1e-12));
    }
  }
}

TEST_CASE("frozen four-step walk at lambda = 1.5, sigma0 = +1") {
  const GsdParams p(1.5);
  const PropagatorTable dp = propagator_dp(p, 4, +1);
  CHECK(dp.at(-1, 1) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(dp.at(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(dp.at(-2, 2) == doctest::Approx(0.1875).epsilon(1e-14));
  CHECK(dp.at(0, 2) == doctest::Approx(0.6875).epsilon(1e-14));
  CHECK(dp.at(2, 2) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(dp.at(-4, 4) == doctest::Approx(0.05859375).epsilon(1e-13));
  CHECK(dp.at(-2, 4) == doctest::Approx(0.2265625).epsilon(1e-13));
  CHECK(dp.at(0, 4) == doctest::Approx(0.5078125).epsilon(1e-13));
  CHECK(dp.at(2, 4) == doctest::Approx(0.15234375).epsilon(1e-13));
  CHECK(dp.at(4, 4) == doctest::Approx(0.0546875).epsilon(1e-13));

  const SeriesU mean = expected_position_exact(p, 4, +1);
  const SeriesU msd = msd_exact(p, 4);
  const double mean_frozen[] = {0.0, -0.5, -0.125, -0.3125, -0.1640625};
  const double msd_frozen[] = {0.0, 1.0, 1.25, 2.375, 3.328125};
  for (std::size_t t = 0; t <= 4; ++t) {
    CHECK(mean[t] == doctest::Approx(mean_frozen[t]).epsilon(1e-13));
    CHECK(msd[t] == doctest::Approx(msd_frozen[t]).epsilon(1e-13));
  }
}

TEST_CASE("integer lambda: deterministic period-two oscillator") {
  for (double lambda : {1.0, 2.0}) {
    const GsdParams p(lambda);
    const PropagatorTable dp = propagator_dp(p, 8, +1);
    const SeriesU mean = expected_position_exact(p, 8, +1);
    const SeriesU msd = msd_exact(p, 8);
    for (std::int64_t t = 0; t <= 8; ++t) {
      const double want = (t % 2) ? -1.0 : 0.0;
      CHECK(dp.at(t % 2 ? -1 : 0, t) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(mean[t] == doctest::Approx(want).epsilon(1e-13));
      CHECK(msd[t] == doctest::Approx(t % 2 ? 1.0 : 0.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("flipping sigma0 mirrors the propagator exactly") {
  const GsdParams p(1.5);
  const PropagatorTable plus = propagator_dp(p, 32, +1);
  const PropagatorTable minus = propagator_dp(p, 32, -1);
  for (std::int64_t t = 0; t <= 32; ++t)
    for (std::int64_t X = -32; X <= 32; ++X)
      CHECK(plus.at(X, t) == minus.at(-X, t));
}

TEST_CASE("propagator columns are normalized with parity support") {
  for (double lambda : {0.5, 1.5}) {
    const PropagatorTable dp = propagator_dp(GsdParams(lambda), 64, +1);
    for (std::int64_t t = 0; t <= 64; ++t) {
      double col = 0.0;
      for (std::int64_t X = -64; X <= 64; ++X) {
        if ((X + t) % 2 != 0) CHECK(dp.at(X, t) == 0.0);
        if (std::abs(X) > t) CHECK(dp.at(X, t) == 0.0);
        col += dp.at(X, t);
      }
      CHECK(col == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("DP and CF propagators agree at T = 64") {
  for (double lambda : {0.5, 1.5, 2.5}) {
    const GsdParams p(lambda);
    const PropagatorTable dp = propagator_dp(p, 64, +1);
    double max_imag = 0.0;
    const PropagatorTable cf = propagator_cf(p, 64, +1, 1, &max_imag);
    double worst = 0.0;
    for (std::int64_t t = 0; t <= 64; ++t)
      for (std::int64_t X = -64; X <= 64; ++X)
        worst = std::max(worst, std::abs(dp.at(X, t) - cf.at(X, t)));
    CHECK(worst <= 1e-10);
    CHECK(max_imag <= 1e-10);
  }
}

TEST_CASE("DP marginals track the series routes out to T = 128") {
  for (double lambda : {1.5, 2.5}) {
    const GsdParams p(lambda);
    const PropagatorTable dp = propagator_dp(p, 128, +1);
    const SeriesU mean = expected_position_exact(p, 128, +1);
    const SeriesU msd = msd_exact(p, 128);
    for (std::int64_t t = 0; t <= 128; t += 8) {
      CHECK(std::abs(table_mean(dp, t) - mean[t]) <= 1e-10);
      CHECK(std::abs(table_msd(dp, t) - msd[t]) <=
            1e-11 * std::max(1.0, msd[t]));
    }
  }
}

TEST_CASE("first step invariants across the parameter range") {
  for (double lambda : {0.3, 0.5, 1.2, 1.5, 2.5, 3.4}) {
    const GsdParams p(lambda);
    const SeriesU msd = msd_exact(p, 4);
    CHECK(msd[0] == 0.0);
    CHECK(msd[1] == doctest::Approx(1.0).epsilon(1e-13));
    const SeriesU mean = expected_position_exact(p, 4, +1);
    CHECK(mean[0] == 0.0);
    CHECK(mean[1] == doctest::Approx(1.0 - 2.0 * gsd_hazard(p, 1)).epsilon(1e-13));
  }
}

TEST_CASE("Monte Carlo ensemble reproduces exact moments") {
  const GsdParams p(1.5);
  WalkConfig cfg;
  cfg.horizon = 128;
  cfg.walkers = 200000;
  cfg.seed = 9;
  const WalkEnsembleResult mc = simulate_walk(p, cfg);
  const SeriesU mean = expected_position_exact(p, 128, +1);
  const SeriesU msd = msd_exact(p, 128);

  int bad = 0;
  for (std::int64_t t = 1; t <= 128; ++t) {
    const double dev_mean = std::abs(mc.stats.mean[t] - mean[t]);
    const double dev_msd = std::abs(mc.stats.msd[t] - msd[t]);
    CHECK(dev_mean <= 6 * mc.stats.sem_mean[t]);
    CHECK(dev_msd <= 6 * mc.stats.sem_msd[t]);
    bad += dev_mean > 4 * mc.stats.sem_mean[t];
    bad += dev_msd > 4 * mc.stats.sem_msd[t];
  }
  CHECK(bad <= 2);
}

TEST_CASE("Monte Carlo histogram tracks the exact propagator") {
  const GsdParams p(0.5);
  WalkConfig cfg;
  cfg.horizon = 32;
  cfg.walkers = 200000;
  cfg.seed = 4;
  cfg.histogram = true;
  const WalkEnsembleResult mc = simulate_walk(p, cfg);
  const PropagatorTable hist = mc.histogram_probs(cfg.horizon);
  const PropagatorTable dp = propagator_dp(p, cfg.horizon, +1);

  int checked = 0, bad = 0;
  for (std::int64_t t = 0; t <= 32; ++t)
    for (std::int64_t X = -32; X <= 32; ++X) {
      const double q = dp.at(X, t);
      if (q * cfg.walkers < 10.0) continue;
      ++checked;
      const double sem = std::sqrt(q * (1.0 - q) / cfg.walkers);
      bad += std::abs(hist.at(X, t) - q) > 4 * sem;
    }
  CHECK(checked > 300);
  CHECK(bad <= checked / 100);
}

TEST_CASE("random starting direction symmetrizes the mean only") {
  const GsdParams p(1.5);
  WalkConfig cfg;
  cfg.horizon = 64;
  cfg.walkers = 100000;
  cfg.seed = 21;
  cfg.sigma0 = Sigma0Mode::Random;
  const WalkEnsembleResult mc = simulate_walk(p, cfg);
  const SeriesU msd = msd_exact(p, 64);
  for (std::int64_t t = 1; t <= 64; t += 7) {
    CHECK(std::abs(mc.stats.mean[t]) <= 5 * mc.stats.sem_mean[t] + 1e-12);
    CHECK(std::abs(mc.stats.msd[t] - msd[t]) <= 5 * mc.stats.sem_msd[t]);
  }
}

TEST_CASE("ensemble results are identical for any thread count") {
  const GsdParams p(1.5);
  WalkConfig one;
  one.horizon = 64;
  one.walkers = 30000;
  one.seed = 33;
  one.histogram = true;
  one.threads = 1;
  WalkConfig three = one;
  three.threads = 3;
  const WalkEnsembleResult a = simulate_walk(p, one);
  const WalkEnsembleResult b = simulate_walk(p, three);
  for (std::int64_t t = 0; t <= 64; ++t) {
    CHECK(a.stats.mean[t] == b.stats.mean[t]);
    CHECK(a.stats.msd[t] == b.stats.msd[t]);
    CHECK(a.stats.sem_msd[t] == b.stats.sem_msd[t]);
  }
  REQUIRE(a.histogram.size() == b.histogram.size());
  for (std::size_t i = 0; i < a.histogram.size(); ++i)
    CHECK(a.histogram[i] == b.histogram[i]);
}

TEST_CASE("horizon caps and argument validation") {
  const GsdParams p(1.5);
  CHECK_THROWS_AS(propagator_dp(p, 2000, +1), ResourceCapError);
  CHECK_THROWS_AS(propagator_cf(p, 2000, +1), ResourceCapError);
  CHECK_THROWS_AS(propagator_dp(p, 16, 0), std::domain_error);
  CHECK_THROWS_AS(msd_exact(p, 20000), ResourceCapError);
  WalkConfig cfg;
  cfg.horizon = 0;
  CHECK_THROWS_AS(simulate_walk(p, cfg), ResourceCapError);
  cfg.horizon = 8;
  cfg.walkers = 0;
  CHECK_THROWS_AS(simulate_walk(p, cfg), std::domain_error);
}
