// Command-line front end: exact tables, Monte Carlo ensembles, asymptotic
// predictors, and a deterministic selftest. Exit codes: 0 success, 1 usage or
// parameter errors, 2 refused resource caps, 3 selftest failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "srw/asymptotics.hpp"
#include "srw/bivariate.hpp"
#include "srw/errors.hpp"
#include "srw/gsd.hpp"
#include "srw/renewal.hpp"
#include "srw/rng.hpp"
#include "srw/series.hpp"
#include "srw/tableio.hpp"
#include "srw/walk.hpp"

using json = nlohmann::ordered_json;
using namespace srw;

namespace {

std::string fmt(double v) { return format_double(v); }

// All emitted tables funnel through this sink: fixed metadata order, fixed
// float formatting, no timestamps, so identical inputs give identical bytes.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct Meta {
  std::vector<std::pair<std::string, std::string>> kv;
  void add(const std::string& k, const std::string& v) { kv.push_back({k, v}); }
  void add(const std::string& k, double v) { add(k, fmt(v)); }
  void add(const std::string& k, std::int64_t v) { add(k, std::to_string(v)); }
};

void write_csv(std::ostream& os, const Meta& meta,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  os << "# artifact=srw " << kArtifactVersion << "\n";
  for (const auto& [k, v] : meta.kv) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

json meta_json(const Meta& meta) {
  json j;
  j["artifact"] = std::string("srw ") + kArtifactVersion;
  for (const auto& [k, v] : meta.kv) j[k] = v;
  return j;
}

int parse_sigma0(const std::string& s) {
  if (s == "+1" || s == "1") return 1;
  if (s == "-1") return -1;
  throw std::domain_error("sigma0 must be +1 or -1 for exact routes");
}

Sigma0Mode parse_sigma0_mode(const std::string& s) {
  if (s == "+1" || s == "1") return Sigma0Mode::Plus;
  if (s == "-1") return Sigma0Mode::Minus;
  if (s == "random") return Sigma0Mode::Random;
  throw std::domain_error("sigma0 must be +1, -1 or random");
}

// ---------------------------------------------------------------------------
// gsd-pmf

int run_gsd_pmf(const std::vector<double>& lambdas, std::int64_t tmax,
                const std::string& route, const std::string& out) {
  Sink sink(out);
  Meta meta;
  meta.add("command", "gsd-pmf");
  meta.add("horizon", tmax);
  meta.add("route", route);

  std::vector<std::string> header{"t"};
  std::vector<SeriesU> gf;
  for (const double lambda : lambdas) {
    const GsdParams p(lambda);
    gf.push_back(gsd_pmf_via_gf(p, tmax));
    if (route != "gf") header.push_back("pmf_" + fmt(lambda));
    if (route != "product") header.push_back("pmfgf_" + fmt(lambda));
    if (route == "both") header.push_back("absdiff_" + fmt(lambda));
  }

  std::vector<std::vector<std::string>> rows;
  for (std::int64_t t = 1; t <= tmax; ++t) {
    std::vector<std::string> row{std::to_string(t)};
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const GsdParams p(lambdas[i]);
      const double prod = gsd_pmf(p, t);
      const double viagf = gf[i][t];
      if (route != "gf") row.push_back(fmt(prod));
      if (route != "product") row.push_back(fmt(viagf));
      if (route == "both") row.push_back(fmt(std::abs(prod - viagf)));
    }
    rows.push_back(std::move(row));
  }
  write_csv(sink.os(), meta, header, rows);
  return 0;
}

// ---------------------------------------------------------------------------
// gsd-sample

int run_gsd_sample(double lambda, std::int64_t samples, std::uint64_t seed,
                   std::int64_t cap, const std::string& out) {
  const GsdParams p(lambda);
  const GsdSampler sampler(p);
  Xoshiro256pp rng(seed, 0);
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t censored = 0;
  double mean_capped = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const std::int64_t draw = sampler.draw_capped(rng, cap);
    mean_capped += static_cast<double>(std::min(draw, cap));
    if (draw > cap) {
      ++censored;
    } else {
      ++counts[draw];
    }
  }
  mean_capped /= static_cast<double>(samples);

  Sink sink(out);
  Meta meta;
  meta.add("command", "gsd-sample");
  meta.add("lambda", lambda);
  meta.add("samples", samples);
  meta.add("seed", static_cast<std::int64_t>(seed));
  meta.add("cap", cap);
  meta.add("censored", censored);
  meta.add("censored_expected", fmt(gsd_survival(p, cap)));
  meta.add("mean_capped", mean_capped);

  std::vector<std::vector<std::string>> rows;
  for (const auto& [t, c] : counts) {
    rows.push_back({std::to_string(t), std::to_string(c),
                    fmt(static_cast<double>(c) / samples),
                    fmt(gsd_pmf(p, t))});
  }
  write_csv(sink.os(), meta, {"t", "count", "frequency", "pmf"}, rows);
  return 0;
}

// ---------------------------------------------------------------------------
// gsd-moments

int run_gsd_moments(const std::vector<double>& lambdas,
                    const std::string& out) {
  Sink sink(out);
  Meta meta;
  meta.add("command", "gsd-moments");
  std::vector<std::vector<std::string>> rows;
  for (const double lambda : lambdas) {
    const GsdParams p(lambda);
    const GsdMoments mo = gsd_moments(p);
    const double tail =
        p.integer_order()
            ? std::numeric_limits<double>::quiet_NaN()
            : p.lambda *
                  std::exp(std::lgamma(p.m) - std::lgamma(p.m - p.lambda));
    rows.push_back({fmt(lambda), std::to_string(p.m), fmt(p.mu), fmt(mo.mean),
                    fmt(mo.b2), fmt(mo.second_moment), fmt(mo.variance),
                    fmt(tail)});
  }
  write_csv(sink.os(), meta,
            {"lambda", "m", "mu", "mean", "b2", "second_moment", "variance",
             "tail_amplitude"},
            rows);
  return 0;
}

// ---------------------------------------------------------------------------
// renewal-states

int run_renewal_states(double lambda, std::int64_t horizon, std::int64_t n_max,
                       const std::string& out) {
  const GsdParams p(lambda);
  if (horizon > 4096) throw ResourceCapError("renewal-states horizon cap is 4096");
  const SeriesU psi = gsd_pmf_via_gf(p, horizon);
  const StateProbTable table = state_probs_exact(psi, n_max, horizon);

  Sink sink(out);
  Meta meta;
  meta.add("command", "renewal-states");
  meta.add("lambda", lambda);
  meta.add("horizon", horizon);
  meta.add("n_max", n_max);

  std::vector<std::string> header{"t"};
  for (std::int64_t n = 0; n <= n_max; ++n)
    header.push_back("n" + std::to_string(n));
  header.push_back("remainder");

  std::vector<std::vector<std::string>> rows;
  for (std::int64_t t = 0; t <= horizon; ++t) {
    std::vector<std::string> row{std::to_string(t)};
    for (std::int64_t n = 0; n <= n_max; ++n)
      row.push_back(fmt(table.probs[n][t]));
    row.push_back(fmt(table.remainder[t]));
    rows.push_back(std::move(row));
  }
  write_csv(sink.os(), meta, header, rows);
  return 0;
}

// ---------------------------------------------------------------------------
// renewal-aged

int run_renewal_aged(double lambda, std::int64_t m_max, std::int64_t tau_max,
                     std::int64_t horizon, const std::string& format,
                     const std::string& out) {
  if (format != "json")
    throw std::domain_error("aged grids have three axes; only --format json");
  if (tau_max > 256 || horizon > 256)
    throw ResourceCapError("aged windows are capped at 256 x 256 per call");
  const GsdParams p(lambda);
  const SeriesU psi = gsd_pmf_via_gf(p, tau_max + horizon);
  const AgedStateProbTable table =
      aged_state_probs_exact(psi, m_max, tau_max, horizon);

  Meta meta;
  meta.add("command", "renewal-aged");
  meta.add("lambda", lambda);
  meta.add("m_max", m_max);
  meta.add("tau_max", tau_max);
  meta.add("horizon", horizon);

  json j;
  j["meta"] = meta_json(meta);
  json probs = json::array();
  for (std::int64_t m = 0; m <= m_max; ++m) {
    json per_tau = json::array();
    for (std::int64_t tau = 0; tau <= tau_max; ++tau) {
      json per_t = json::array();
      for (std::int64_t t = 0; t <= horizon; ++t)
        per_t.push_back(table.at(m, tau, t));
      per_tau.push_back(std::move(per_t));
    }
    probs.push_back(std::move(per_tau));
  }
  j["probs"] = std::move(probs);
  json rem = json::array();
  for (std::int64_t tau = 0; tau <= tau_max; ++tau) {
    json per_t = json::array();
    for (std::int64_t t = 0; t <= horizon; ++t)
      per_t.push_back(table.rem(tau, t));
    rem.push_back(std::move(per_t));
  }
  j["remainder"] = std::move(rem);

  Sink sink(out);
  sink.os() << j.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// srw-sim

int run_srw_sim(double lambda, std::int64_t horizon, std::int64_t walkers,
                std::uint64_t seed, const std::string& sigma0, int threads,
                bool histogram, const std::string& out) {
  const GsdParams p(lambda);
  WalkConfig cfg;
  cfg.horizon = horizon;
  cfg.walkers = walkers;
  cfg.seed = seed;
  cfg.sigma0 = parse_sigma0_mode(sigma0);
  cfg.threads = threads;
  cfg.histogram = histogram;
  const WalkEnsembleResult res = simulate_walk(p, cfg);

  Sink sink(out);
  Meta meta;
  meta.add("command", "srw-sim");
  meta.add("lambda", lambda);
  meta.add("horizon", horizon);
  meta.add("walkers", walkers);
  meta.add("seed", static_cast<std::int64_t>(seed));
  meta.add("sigma0", sigma0);

  if (!histogram) {
    std::vector<std::vector<std::string>> rows;
    for (std::int64_t t = 0; t <= horizon; ++t)
      rows.push_back({std::to_string(t), fmt(res.stats.mean[t]),
                      fmt(res.stats.sem_mean[t]), fmt(res.stats.msd[t]),
                      fmt(res.stats.sem_msd[t])});
    write_csv(sink.os(), meta, {"t", "mean", "sem_mean", "msd", "sem_msd"},
              rows);
    return 0;
  }

  std::vector<std::vector<std::string>> rows;
  for (std::int64_t t = 0; t <= horizon; ++t)
    for (std::int64_t X = -horizon; X <= horizon; ++X) {
      const std::uint64_t c = res.histogram[t * (2 * horizon + 1) + X + horizon];
      if (c == 0) continue;
      rows.push_back({std::to_string(t), std::to_string(X), std::to_string(c),
                      fmt(static_cast<double>(c) / walkers)});
    }
  write_csv(sink.os(), meta, {"t", "X", "count", "frequency"}, rows);
  return 0;
}

// ---------------------------------------------------------------------------
// srw-exact

int run_srw_exact(double lambda, std::int64_t horizon,
                  const std::string& sigma0, const std::string& out) {
  const GsdParams p(lambda);
  const int s0 = parse_sigma0(sigma0);
  const SeriesU mean = expected_position_exact(p, horizon, s0);
  const SeriesU msd = msd_exact(p, horizon);
  const SeriesU step = mean_step_exact(p, horizon, s0);

  Sink sink(out);
  Meta meta;
  meta.add("command", "srw-exact");
  meta.add("lambda", lambda);
  meta.add("horizon", horizon);
  meta.add("sigma0", sigma0);

  std::vector<std::vector<std::string>> rows;
  for (std::int64_t t = 0; t <= horizon; ++t)
    rows.push_back({std::to_string(t), fmt(mean[t]), fmt(msd[t]),
                    fmt(t >= 1 ? step[t] : 0.0)});
  write_csv(sink.os(), meta, {"t", "mean", "msd", "mean_step"}, rows);
  return 0;
}

// ---------------------------------------------------------------------------
// srw-propagator

int run_srw_propagator(double lambda, std::int64_t horizon,
                       const std::string& sigma0, const std::string& route,
                       int threads, const std::string& out) {
  const GsdParams p(lambda);
  const int s0 = parse_sigma0(sigma0);

  std::unique_ptr<PropagatorTable> dp, cf;
  double max_imag = 0.0;
  if (route != "cf")
    dp = std::make_unique<PropagatorTable>(propagator_dp(p, horizon, s0));
  if (route != "dp")
    cf = std::make_unique<PropagatorTable>(
        propagator_cf(p, horizon, s0, threads, &max_imag));

  Sink sink(out);
  Meta meta;
  meta.add("command", "srw-propagator");
  meta.add("lambda", lambda);
  meta.add("horizon", horizon);
  meta.add("sigma0", sigma0);
  meta.add("route", route);
  if (cf) meta.add("cf_max_imag", max_imag);

  std::vector<std::string> header{"t", "X"};
  if (dp) header.push_back("p_dp");
  if (cf) header.push_back("p_cf");
  if (dp && cf) header.push_back("absdiff");

  std::vector<std::vector<std::string>> rows;
  for (std::int64_t t = 0; t <= horizon; ++t)
    for (std::int64_t X = -t; X <= t; ++X) {
      if ((X + t) % 2 != 0) continue;  // off-parity sites carry no mass
      std::vector<std::string> row{std::to_string(t), std::to_string(X)};
      if (dp) row.push_back(fmt(dp->at(X, t)));
      if (cf) row.push_back(fmt(cf->at(X, t)));
      if (dp && cf)
        row.push_back(fmt(std::abs(dp->at(X, t) - cf->at(X, t))));
      rows.push_back(std::move(row));
    }
  write_csv(sink.os(), meta, header, rows);
  return 0;
}

// ---------------------------------------------------------------------------
// predict

int run_predict(const std::vector<double>& lambdas, std::int64_t horizon,
                const std::string& out) {
  Sink sink(out);
  Meta meta;
  meta.add("command", "predict");
  meta.add("horizon", horizon);

  std::vector<std::vector<std::string>> rows;
  for (const double lambda : lambdas) {
    const GsdParams p(lambda);
    const RegimeReport r = classify_regime(p);
    const bool integer = p.integer_order();
    const double t = static_cast<double>(horizon);
    rows.push_back(
        {fmt(lambda), regime_name(r.regime), fmt(r.msd_exponent),
         fmt(r.msd_prefactor), fmt(r.position_exponent),
         fmt(r.position_prefactor), fmt(r.plateau), fmt(r.relax_exponent),
         fmt(r.relax_prefactor),
         integer ? "nan" : fmt(predict_msd(p, t)),
         integer ? "nan" : fmt(predict_position(p, t, +1))});
  }
  write_csv(sink.os(), meta,
            {"lambda", "regime", "msd_exponent", "msd_prefactor",
             "position_exponent", "position_prefactor", "plateau",
             "relax_exponent", "relax_prefactor", "msd_at_horizon",
             "position_at_horizon"},
            rows);
  return 0;
}

// ---------------------------------------------------------------------------
// diagnose-limits

int run_diagnose_limits(int n, const std::vector<double>& eps_list,
                        std::int64_t truncation, const std::string& out) {
  Sink sink(out);
  Meta meta;
  meta.add("command", "diagnose-limits");
  meta.add("n", static_cast<std::int64_t>(n));
  meta.add("truncation", truncation);

  std::vector<std::vector<std::string>> rows;
  for (const double eps : eps_list) {
    const LimitDiagnostics d = limit_diagnostics(n, eps, truncation);
    rows.push_back({fmt(eps), fmt(d.var_plus_ratio), fmt(d.var_minus),
                    fmt(d.moment_minus), fmt(d.moment_minus_target),
                    fmt(d.moment_plus_ratio)});
  }
  write_csv(sink.os(), meta,
            {"eps", "var_plus_ratio", "var_minus", "moment_minus",
             "moment_minus_target", "moment_plus_ratio"},
            rows);
  return 0;
}

// ---------------------------------------------------------------------------
// fig1: waiting-time pmf decay with shared fractional part

int run_fig1(double mu, const std::vector<std::int64_t>& m_list,
             std::int64_t tmax, const std::string& out) {
  if (!(mu > 0.0) || mu >= 1.0)
    throw std::domain_error("fig1 needs a fractional part mu in (0, 1)");

  std::vector<double> lambdas;
  for (const std::int64_t m : m_list) {
    if (m < 1) throw std::domain_error("fig1 integer parts must be >= 1");
    lambdas.push_back(static_cast<double>(m - 1) + mu);
  }

  Sink sink(out);
  Meta meta;
  meta.add("command", "fig1");
  meta.add("mu", mu);
  meta.add("horizon", tmax);

  std::vector<std::string> header{"t"};
  for (const double lambda : lambdas) header.push_back("psi_" + fmt(lambda));
  for (const double lambda : lambdas) header.push_back("asym_" + fmt(lambda));

  std::vector<std::vector<std::string>> rows;
  for (std::int64_t t = 1; t <= tmax; ++t) {
    std::vector<std::string> row{std::to_string(t)};
    for (const double lambda : lambdas)
      row.push_back(fmt(gsd_pmf(GsdParams(lambda), t)));
    for (const double lambda : lambdas)
      row.push_back(
          fmt(gsd_tail_asymptote(GsdParams(lambda), static_cast<double>(t))));
    rows.push_back(std::move(row));
  }
  write_csv(sink.os(), meta, header, rows);
  return 0;
}

// ---------------------------------------------------------------------------
// fig2: plateau formation of the mean position

int run_fig2(const std::vector<double>& lambdas, std::int64_t horizon,
             const std::string& out) {
  Sink sink(out);
  Meta meta;
  meta.add("command", "fig2");
  meta.add("horizon", horizon);
  for (const double lambda : lambdas) {
    const GsdParams p(lambda);
    if (p.integer_order() || p.lambda < 1.0)
      throw std::domain_error("fig2 needs non-integer lambda > 1");
    meta.add("plateau_" + fmt(lambda), classify_regime(p).plateau);
  }

  std::vector<std::string> header{"t"};
  for (const double lambda : lambdas) header.push_back("x_" + fmt(lambda));
  for (const double lambda : lambdas) header.push_back("pred_" + fmt(lambda));

  std::vector<SeriesU> exact;
  for (const double lambda : lambdas)
    exact.push_back(expected_position_exact(GsdParams(lambda), horizon, +1));

  std::vector<std::vector<std::string>> rows;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    std::vector<std::string> row{std::to_string(t)};
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      row.push_back(fmt(exact[i][t]));
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      row.push_back(fmt(predict_position(GsdParams(lambdas[i]),
                                         static_cast<double>(t), +1)));
    rows.push_back(std::move(row));
  }
  write_csv(sink.os(), meta, header, rows);
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

int run_selftest(const std::string& out) {
  Sink sink(out);
  std::ostream& os = sink.os();
  int failures = 0;
  auto check = [&](bool ok, const std::string& name,
                   const std::string& detail = "") {
    os << (ok ? "[ok] " : "[FAIL] ") << name;
    if (!ok && !detail.empty()) os << " (" << detail << ")";
    os << "\n";
    failures += !ok;
  };

  {  // series engine round trip
    Xoshiro256pp rng(101, 0);
    SeriesU a(128), b(128);
    a[0] = rng.uniform() - 0.5;
    b[0] = 1.0 + rng.uniform();
    double scale = 1.0;
    for (std::size_t t = 1; t <= 128; ++t) {
      scale *= 0.7;
      a[t] = (rng.uniform() - 0.5) * scale;
      b[t] = (rng.uniform() - 0.5) * scale;
    }
    const SeriesU back = (a * b) * recip(b);
    double worst = 0.0;
    for (std::size_t t = 0; t <= 128; ++t)
      worst = std::max(worst, std::abs(back[t] - a[t]));
    check(worst <= 1e-12, "series multiply/divide round trip",
          "max dev " + fmt(worst));
  }

  {  // pmf route equivalence
    double worst = 0.0;
    for (const double lambda : {0.3, 1.5, 2.7, 3.4}) {
      const GsdParams p(lambda);
      const SeriesU gf = gsd_pmf_via_gf(p, 128);
      for (std::int64_t t = 1; t <= 128; ++t)
        worst = std::max(worst, std::abs(gsd_pmf(p, t) - gf[t]));
    }
    check(worst <= 1e-12, "pmf product route vs generating function",
          "max dev " + fmt(worst));
  }

  {  // hazard, survival, pmf consistency
    const GsdParams p(2.5);
    double surv = 1.0, worst = 0.0;
    for (std::int64_t t = 1; t <= 256; ++t) {
      worst = std::max(worst,
                       std::abs(gsd_pmf(p, t) - gsd_hazard(p, t) * surv));
      surv *= 1.0 - gsd_hazard(p, t);
      worst = std::max(worst, std::abs(gsd_survival(p, t) - surv));
    }
    check(worst <= 1e-12, "hazard chain consistency", "max dev " + fmt(worst));
  }

  {  // moments and hypergeometric values
    const double mean15 = gsd_moments(GsdParams(1.5)).mean;
    const double var25 = gsd_moments(GsdParams(2.5)).variance;
    check(mean15 == 2.0 && std::abs(var25 - 20.0 / 9.0) <= 1e-12 &&
              gsd_moments(GsdParams(2.0)).mean == 1.0,
          "closed-form moments");
    check(std::abs(hypergeo_survival_gf(GsdParams(1.5), 1.0) - 2.0) <= 1e-12 &&
              std::abs(hypergeo_survival_gf(GsdParams(1.5), 0.5) -
                       1.1715728752538097) <= 1e-12,
          "survival generating function values");
  }

  {  // renewal state probabilities
    const SeriesU psi = gsd_pmf_via_gf(GsdParams(1.5), 64);
    const StateProbTable table = state_probs_exact(psi, 64, 64);
    const SeriesU ones = state_polynomial_exact(psi, 1.0, 64);
    double worst = 0.0;
    for (std::int64_t t = 0; t <= 64; ++t) {
      double col = table.remainder[t];
      for (std::int64_t n = 0; n <= 64; ++n) col += table.probs[n][t];
      worst = std::max(worst, std::abs(col - 1.0));
      worst = std::max(worst, std::abs(ones[t] - 1.0));
    }
    check(worst <= 1e-10, "state probabilities normalize",
          "max dev " + fmt(worst));
  }

  {  // aged window: tau = 0 slice and memoryless invariance
    const SeriesU psi = gsd_pmf_via_gf(GsdParams(1.5), 48);
    const AgedStateProbTable aged = aged_state_probs_exact(psi, 24, 24, 24);
    const StateProbTable plain = state_probs_exact(psi, 24, 24);
    double worst = 0.0;
    for (std::int64_t m = 0; m <= 24; ++m)
      for (std::int64_t t = 0; t <= 24; ++t)
        worst = std::max(worst,
                         std::abs(aged.at(m, 0, t) - plain.probs[m][t]));
    check(worst <= 1e-10, "aged window tau=0 slice", "max dev " + fmt(worst));

    SeriesU geo(24);
    double mass = 0.4;
    for (std::size_t t = 1; t <= 24; ++t) {
      geo[t] = mass;
      mass *= 0.6;
    }
    const AgedStateProbTable inv = aged_state_probs_exact(geo, 12, 12, 12);
    worst = 0.0;
    for (std::int64_t m = 0; m <= 12; ++m)
      for (std::int64_t tau = 0; tau <= 12; ++tau)
        for (std::int64_t t = 0; t <= 12; ++t)
          worst = std::max(worst,
                           std::abs(inv.at(m, tau, t) - inv.at(m, 0, t)));
    check(worst <= 1e-10, "memoryless aging invariance",
          "max dev " + fmt(worst));
  }

  {  // backward recurrence marginals
    const SeriesU psi = gsd_pmf_via_gf(GsdParams(1.5), 16);
    const StateProbTable plain = state_probs_exact(psi, 2, 16);
    double worst = 0.0;
    for (std::size_t n = 0; n <= 2; ++n) {
      const SeriesUW grid = backward_recurrence_exact(psi, n, 16, 16);
      for (std::int64_t t = 0; t <= 16; ++t) {
        double col = 0.0;
        for (std::int64_t tau = 0; tau <= t; ++tau) col += grid.at(tau, t);
        worst = std::max(worst, std::abs(col - plain.probs[n][t]));
      }
    }
    check(worst <= 1e-12, "backward recurrence marginals",
          "max dev " + fmt(worst));
  }

  {  // propagator routes and series moments
    const GsdParams p(1.5);
    const PropagatorTable dp = propagator_dp(p, 32, +1);
    double max_imag = 0.0;
    const PropagatorTable cf = propagator_cf(p, 32, +1, 1, &max_imag);
    const SeriesU mean = expected_position_exact(p, 32, +1);
    const SeriesU msd = msd_exact(p, 32);
    double worst = 0.0, worst_mom = 0.0;
    for (std::int64_t t = 0; t <= 32; ++t) {
      double col = 0.0, m1 = 0.0, m2 = 0.0;
      for (std::int64_t X = -32; X <= 32; ++X) {
        worst = std::max(worst, std::abs(dp.at(X, t) - cf.at(X, t)));
        col += dp.at(X, t);
        m1 += X * dp.at(X, t);
        m2 += static_cast<double>(X) * X * dp.at(X, t);
      }
      worst = std::max(worst, std::abs(col - 1.0));
      worst_mom = std::max({worst_mom, std::abs(m1 - mean[t]),
                            std::abs(m2 - msd[t])});
    }
    check(worst <= 1e-10 && max_imag <= 1e-10,
          "propagator DP vs CF and normalization", "max dev " + fmt(worst));
    check(worst_mom <= 1e-10, "propagator moments vs series routes",
          "max dev " + fmt(worst_mom));
    check(std::abs(msd[1] - 1.0) <= 1e-13, "first-step MSD is one");
  }

  {  // deterministic oscillator
    const SeriesU mean = expected_position_exact(GsdParams(1.0), 8, +1);
    double worst = 0.0;
    for (std::int64_t t = 0; t <= 8; ++t)
      worst = std::max(worst, std::abs(mean[t] - (t % 2 ? -1.0 : 0.0)));
    check(worst <= 1e-13, "integer lambda oscillator", "max dev " + fmt(worst));
  }

  {  // Monte Carlo determinism across thread counts
    const GsdParams p(1.5);
    WalkConfig a;
    a.horizon = 32;
    a.walkers = 5000;
    a.seed = 7;
    a.threads = 1;
    WalkConfig b = a;
    b.threads = 2;
    const WalkEnsembleResult ra = simulate_walk(p, a);
    const WalkEnsembleResult rb = simulate_walk(p, b);
    bool same = true;
    for (std::int64_t t = 0; t <= 32; ++t)
      same = same && ra.stats.mean[t] == rb.stats.mean[t] &&
             ra.stats.msd[t] == rb.stats.msd[t];
    check(same, "ensemble identical across thread counts");
  }

  {  // sampler statistics
    const GsdParams p(1.5);
    Xoshiro256pp rng(13, 0);
    std::int64_t ones = 0;
    const std::int64_t n = 20000;
    for (std::int64_t i = 0; i < n; ++i) ones += gsd_sample(p, rng) == 1;
    const double dev = std::abs(static_cast<double>(ones) / n - 0.75);
    check(dev <= 4 * std::sqrt(0.75 * 0.25 / n), "sampler hazard chain",
          "dev " + fmt(dev));
  }

  {  // scaling limit residuals shrink
    const GsdParams p(0.5);
    const double r2 = scaling_limit_residual(p, 1e-2, 1.0);
    const double r3 = scaling_limit_residual(p, 1e-3, 1.0);
    check(r2 / std::sqrt(1e-2) > r3 / std::sqrt(1e-3) && r3 <= 1e-3,
          "scaling residual contraction");
  }

  {  // superdiffusive prefactor identity
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double lambda = 1.0 + (k + 0.5) / 20.0;
      const GsdParams p(lambda);
      const double lhs = -2.0 * (lambda - 1.0) /
                         ((1.0 - lambda) * gsd_moments(p).mean *
                          std::tgamma(4.0 - lambda));
      worst = std::max(
          worst, std::abs(lhs / classify_regime(p).msd_prefactor - 1.0));
    }
    check(worst <= 1e-12, "superdiffusive prefactor identity",
          "max dev " + fmt(worst));
  }

  {  // degenerate-limit closed form
    const LimitDiagnostics d = limit_diagnostics(2, 1e-3, 100000);
    const double eps = 1e-3;
    const double closed = (2 + eps) * (1 - eps) / (2 * (1 + eps));
    check(std::abs(d.var_plus_ratio - closed) <= 1e-12 &&
              std::abs(d.moment_plus_ratio - (2 - eps) / (2 * (1 + eps))) <=
                  1e-3,
          "degenerate-limit diagnostics");
  }

  {  // float formatting round trip
    bool ok = true;
    for (const double v : {0.1, 1.0 / 3.0, 1e-17, 6.02214076e23, -0.0}) {
      const std::string s = format_double(v);
      ok = ok && std::stod(s) == v;
    }
    check(ok, "float formatting round trips");
  }

  os << (failures ? "selftest: FAIL\n" : "selftest: all checks passed\n");
  return failures ? 3 : 0;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"generalized Sibuya squirrel random walk toolkit"};
  app.require_subcommand(1);

  // Shared option storage; each subcommand registers only what it uses.
  std::vector<double> lambdas;
  double lambda = 1.5;
  std::int64_t horizon = 64;
  std::int64_t walkers = 100000;
  std::uint64_t seed = 1;
  std::string sigma0 = "+1";
  std::string out;
  std::string format = "json";
  std::string route = "both";
  int threads = 1;
  bool histogram = false;
  std::int64_t n_max = 32;
  std::int64_t tau_max = 64;
  std::int64_t m_max = 64;
  std::int64_t cap = 1 << 20;
  int diag_n = 3;
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3};
  std::int64_t truncation = 10000000;
  double mu = 0.3;
  std::vector<std::int64_t> m_list{1, 2, 5, 10};

  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "output file (default: stdout)");
  };
  auto add_lambda = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "waiting-time index, > 0")
        ->capture_default_str();
  };
  auto add_lambda_list = [&](CLI::App* cmd, std::vector<double> def) {
    lambdas = std::move(def);
    cmd->add_option("--lambda-list", lambdas,
                    "comma-separated waiting-time indices")
        ->delimiter(',');
  };

  CLI::App* pmf = app.add_subcommand(
      "gsd-pmf", "waiting-time pmf by product and generating-function routes");
  add_lambda_list(pmf, {0.5, 1.5, 2.5});
  pmf->add_option("--horizon", horizon, "largest t")->capture_default_str();
  pmf->add_option("--route", route, "product, gf, or both")
      ->check(CLI::IsMember({"product", "gf", "both"}))
      ->capture_default_str();
  add_out(pmf);

  CLI::App* sample = app.add_subcommand(
      "gsd-sample", "exact waiting-time draws with a censoring cap");
  add_lambda(sample);
  sample->add_option("--walkers", walkers, "number of draws")
      ->capture_default_str();
  sample->add_option("--seed", seed, "stream seed")->capture_default_str();
  sample->add_option("--cap", cap, "censor draws above this value")
      ->capture_default_str();
  add_out(sample);

  CLI::App* moments = app.add_subcommand(
      "gsd-moments", "closed-form moments and tail amplitude");
  add_lambda_list(moments, {0.5, 1.2, 1.5, 1.8, 2.5, 3.4});
  add_out(moments);

  CLI::App* states = app.add_subcommand(
      "renewal-states", "exact arrival-count probabilities over time");
  add_lambda(states);
  states->add_option("--horizon", horizon, "largest t")->capture_default_str();
  states->add_option("--nmax", n_max, "largest arrival count reported")
      ->capture_default_str();
  add_out(states);

  CLI::App* aged = app.add_subcommand(
      "renewal-aged", "aged-window arrival counts (three-axis JSON grid)");
  add_lambda(aged);
  aged->add_option("--horizon", horizon, "window length")->capture_default_str();
  aged->add_option("--tau-max", tau_max, "largest aging span")
      ->capture_default_str();
  aged->add_option("--m-max", m_max, "largest count reported")
      ->capture_default_str();
  aged->add_option("--format", format, "json only")->capture_default_str();
  add_out(aged);

  CLI::App* sim = app.add_subcommand(
      "srw-sim", "Monte Carlo walk ensemble (deterministic per seed)");
  add_lambda(sim);
  sim->add_option("--horizon", horizon, "steps per walker")
      ->capture_default_str();
  sim->add_option("--walkers", walkers, "ensemble size")->capture_default_str();
  sim->add_option("--seed", seed, "stream seed")->capture_default_str();
  sim->add_option("--sigma0", sigma0, "+1, -1 or random")
      ->capture_default_str();
  sim->add_option("--threads", threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  sim->add_flag("--histogram", histogram, "emit position counts instead");
  add_out(sim);

  CLI::App* exact = app.add_subcommand(
      "srw-exact", "exact mean position, MSD, and mean step");
  add_lambda(exact);
  exact->add_option("--horizon", horizon, "largest t")->capture_default_str();
  exact->add_option("--sigma0", sigma0, "+1 or -1")->capture_default_str();
  add_out(exact);

  CLI::App* prop = app.add_subcommand(
      "srw-propagator", "exact position law by DP and CF routes");
  add_lambda(prop);
  prop->add_option("--horizon", horizon, "largest t (cap 1024)")
      ->capture_default_str();
  prop->add_option("--sigma0", sigma0, "+1 or -1")->capture_default_str();
  prop->add_option("--route", route, "dp, cf, or both")
      ->check(CLI::IsMember({"dp", "cf", "both"}))
      ->capture_default_str();
  prop->add_option("--threads", threads, "CF worker threads")
      ->capture_default_str();
  add_out(prop);

  CLI::App* predict = app.add_subcommand(
      "predict", "regime classification and leading asymptotics");
  add_lambda_list(predict, {0.5, 1.2, 1.5, 1.8, 2.5, 3.4});
  predict->add_option("--horizon", horizon, "evaluation time for predictions")
      ->capture_default_str();
  add_out(predict);

  CLI::App* diag = app.add_subcommand(
      "diagnose-limits", "degenerate-limit diagnostics near integer indices");
  diag->add_option("--n", diag_n, "integer boundary probed")
      ->capture_default_str();
  diag->add_option("--eps-list", eps_list, "distances from the boundary")
      ->delimiter(',');
  diag->add_option("--truncation", truncation, "support cutoff R")
      ->capture_default_str();
  add_out(diag);

  CLI::App* fig1 = app.add_subcommand(
      "fig1", "pmf decay curves sharing a fractional part");
  fig1->add_option("--mu", mu, "fractional part in (0, 1)")
      ->capture_default_str();
  fig1->add_option("--m-list", m_list, "integer parts")->delimiter(',');
  fig1->add_option("--horizon", horizon, "largest t")->capture_default_str();
  add_out(fig1);

  CLI::App* fig2 = app.add_subcommand(
      "fig2", "mean-position plateau formation for lambda > 1");
  add_lambda_list(fig2, {1.2, 1.5, 1.8});
  fig2->add_option("--horizon", horizon, "largest t")->capture_default_str();
  add_out(fig2);

  CLI::App* self = app.add_subcommand(
      "selftest", "deterministic invariant suite (exit 3 on failure)");
  add_out(self);

  // Defaults that differ per subcommand.
  auto effective_horizon = [&](CLI::App* cmd, std::int64_t def) {
    return cmd->count("--horizon") ? horizon : def;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (pmf->parsed())
      return run_gsd_pmf(lambdas, effective_horizon(pmf, 64), route, out);
    if (sample->parsed())
      return run_gsd_sample(lambda, walkers, seed, cap, out);
    if (moments->parsed()) return run_gsd_moments(lambdas, out);
    if (states->parsed())
      return run_renewal_states(lambda, effective_horizon(states, 64), n_max,
                                out);
    if (aged->parsed())
      return run_renewal_aged(lambda, m_max, tau_max,
                              effective_horizon(aged, 64), format, out);
    if (sim->parsed())
      return run_srw_sim(lambda, effective_horizon(sim, 256), walkers, seed,
                         sigma0, threads, histogram, out);
    if (exact->parsed())
      return run_srw_exact(lambda, effective_horizon(exact, 256), sigma0, out);
    if (prop->parsed())
      return run_srw_propagator(lambda, effective_horizon(prop, 256), sigma0,
                                route, threads, out);
    if (predict->parsed())
      return run_predict(lambdas, effective_horizon(predict, 10000), out);
    if (diag->parsed())
      return run_diagnose_limits(diag_n, eps_list, truncation, out);
    if (fig1->parsed()) return run_fig1(mu, m_list, effective_horizon(fig1, 128), out);
    if (fig2->parsed())
      return run_fig2(lambdas, effective_horizon(fig2, 10000), out);
    if (self->parsed()) return run_selftest(out);
  } catch (const ResourceCapError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
