#include "srw/renewal.hpp"

#include <stdexcept>

#include "srw/errors.hpp"

namespace srw {

namespace {

// Aged grids are cubic in their side lengths; refuse anything past desk scale.
constexpr std::size_t kMaxGridCells = std::size_t{1} << 25;

void require_waiting_series(const SeriesU& psi, std::size_t min_order) {
  if (psi[0] != 0.0)
    throw std::domain_error("waiting-time series needs psi_0 = 0");
  if (psi.order() < min_order)
    throw std::domain_error("waiting-time series order too small for grid");
}

}  // namespace

StateProbTable state_probs_exact(const SeriesU& psi, std::size_t n_max,
                                 std::size_t horizon) {
  require_waiting_series(psi, horizon);
  if ((n_max + 1) * (horizon + 1) > kMaxGridCells)
    throw ResourceCapError("state table exceeds cell cap");
  const SeriesU base = psi.truncated(horizon);
  const SeriesU surv = cumsum(constant_series(horizon, 1.0) - base);

  StateProbTable out;
  out.n_max = n_max;
  out.horizon = horizon;
  out.probs.reserve(n_max + 1);
  SeriesU row = surv;
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.probs.push_back(row.coeffs());
    if (n < n_max) row = row * base;
  }
  out.remainder.assign(horizon + 1, 1.0);
  for (std::size_t t = 0; t <= horizon; ++t)
    for (std::size_t n = 0; n <= n_max; ++n)
      out.remainder[t] -= out.probs[n][t];
  return out;
}

SeriesU state_polynomial_exact(const SeriesU& psi, double v,
                               std::size_t horizon) {
  require_waiting_series(psi, horizon);
  const SeriesU base = psi.truncated(horizon);
  const SeriesU one = constant_series(horizon, 1.0);
  return cumsum((one - base) * recip(one - v * base));
}

AgedStateProbTable aged_state_probs_exact(const SeriesU& psi,
                                          std::size_t m_max,
                                          std::size_t tau_max,
                                          std::size_t horizon) {
  require_waiting_series(psi, tau_max + horizon);
  if ((m_max + 1) * (tau_max + 1) * (horizon + 1) > kMaxGridCells)
    throw ResourceCapError("aged state table exceeds cell cap");

  const SeriesU psi_w = psi.truncated(tau_max);
  const SeriesU psi_u = psi.truncated(horizon);
  const SeriesU one_w = constant_series(tau_max, 1.0);
  const SeriesU one_u = constant_series(horizon, 1.0);
  const SeriesU ones_w = cumsum(one_w);
  const SeriesU ones_u = cumsum(one_u);
  const SeriesU surv_u = cumsum(one_u - psi_u);

  // u D(w, u) / (1 - psibar(w)): the first-arrival factor of an aged window.
  // The u-shift is what keeps the divided difference fully determined by
  // psi coefficients up to tau_max + horizon.
  const SeriesUW core =
      mul_w(shift_u(divided_difference(psi, tau_max, horizon)),
            recip(one_w - psi_w));

  AgedStateProbTable out;
  out.m_max = m_max;
  out.tau_max = tau_max;
  out.horizon = horizon;
  out.data.assign((m_max + 1) * (tau_max + 1) * (horizon + 1), 0.0);
  auto store = [&](std::size_t m, const SeriesUW& grid) {
    for (std::size_t tau = 0; tau <= tau_max; ++tau)
      for (std::size_t t = 0; t <= horizon; ++t)
        out.data[(m * (tau_max + 1) + tau) * (horizon + 1) + t] =
            grid.at(tau, t);
  };

  // m = 0: everything minus the paths whose first arrival falls inside the
  // window, cumulated over window length.
  store(0, SeriesUW::outer(ones_w, ones_u) - mul_u(core, ones_u));

  SeriesUW cur = mul_u(core, surv_u);
  for (std::size_t m = 1; m <= m_max; ++m) {
    store(m, cur);
    if (m < m_max) cur = mul_u(cur, psi_u);
  }

  out.remainder.assign((tau_max + 1) * (horizon + 1), 1.0);
  for (std::size_t tau = 0; tau <= tau_max; ++tau)
    for (std::size_t t = 0; t <= horizon; ++t) {
      double acc = 1.0;
      for (std::size_t m = 0; m <= m_max; ++m) acc -= out.at(m, tau, t);
      out.remainder[tau * (horizon + 1) + t] = acc;
    }
  return out;
}

SeriesUW backward_recurrence_exact(const SeriesU& psi, std::size_t n,
                                   std::size_t tau_max, std::size_t horizon) {
  require_waiting_series(psi, std::max(tau_max, horizon));
  if ((tau_max + 1) * (horizon + 1) > kMaxGridCells)
    throw ResourceCapError("backward recurrence grid exceeds cell cap");
  const SeriesU surv =
      cumsum(constant_series(tau_max, 1.0) - psi.truncated(tau_max));
  SeriesU pw = constant_series(horizon, 1.0);
  const SeriesU base = psi.truncated(horizon);
  for (std::size_t i = 0; i < n; ++i) pw = pw * base;
  return mul_u(SeriesUW::diagonal(surv, tau_max, horizon), pw);
}

}  // namespace srw
