#include "fedlab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "fedlab/rng.hpp"

namespace fedlab {

namespace {
const double kEulerMascheroni = 0.57721566490153286060651209;
}

void EpochRecord::validate() const {
  switch (type) {
    case EpochType::A:
      if (!communicated || b < 0)
        raise(ErrorCode::invalid_argument, "type A epoch must communicate");
      break;
    case EpochType::B:
      if (communicated || b < 1)
        raise(ErrorCode::invalid_argument,
              "type B epoch: server-only, b >= 1");
      break;
    case EpochType::C:
      if (!communicated || b != 0)
        raise(ErrorCode::invalid_argument,
              "type C epoch: communication only, b = 0");
      break;
  }
}

void EpochLedger::validate() const {
  if (records.empty())
    raise(ErrorCode::invalid_argument, "ledger must be non-empty");
  if (!(tau > 0.0 && tau <= 1.0))
    raise(ErrorCode::invalid_argument, "ledger tau must lie in (0,1]");
  for (const EpochRecord& rec : records) rec.validate();
}

double gamma(const EpochLedger& ledger, const CostModel& cost) {
  ledger.validate();
  double total = 0.0;
  for (const EpochRecord& rec : ledger.records) {
    total += static_cast<double>(rec.b);
    if (rec.communicated) total += cost.phi * cost.tau * cost.m;
  }
  return total;
}

double expected_epoch_time(EpochType type, long long b, const CostModel& cost) {
  double tm = cost.tau * cost.m;
  switch (type) {
    case EpochType::A:
      if (tm < 1.0)
        raise(ErrorCode::invalid_argument, "type A needs tau*m >= 1");
      return 2.0 * b + std::log(tm) + cost.phi * tm;
    case EpochType::B:
      return 2.0 * b;
    case EpochType::C:
      if (tm < 1.0)
        raise(ErrorCode::invalid_argument, "type C needs tau*m >= 1");
      return cost.phi * tm;
  }
  raise(ErrorCode::internal, "unreachable");
}

EpochLedger make_fedlrgd_ledger(long long r, long long s, long long S,
                                long long m) {
  if (r < 1 || S < 1 || s < 0 || m < 0)
    raise(ErrorCode::invalid_argument, "fedlrgd ledger: bad sizes");
  EpochLedger ledger;
  ledger.m = m;
  ledger.tau = 1.0;
  ledger.records.push_back({EpochType::B, r * r, false});
  ledger.records.push_back({EpochType::A, r * s, true});
  for (long long t = 0; t < r - 1; ++t)
    ledger.records.push_back({EpochType::C, 0, true});
  ledger.records.push_back({EpochType::B, r * S, false});
  return ledger;
}

EpochLedger make_fedave_ledger(long long T, long long b, long long m,
                               double tau) {
  if (T < 1 || b < 1) raise(ErrorCode::invalid_argument, "fedave ledger: bad sizes");
  EpochLedger ledger;
  ledger.m = m;
  ledger.tau = tau;
  for (long long t = 0; t < T; ++t)
    ledger.records.push_back({EpochType::A, b, true});
  return ledger;
}

double erlang_cdf(double y, int b) {
  if (b < 1) raise(ErrorCode::invalid_argument, "erlang_cdf: b >= 1");
  if (y <= 0.0) return 0.0;
  double term = 1.0, series = 1.0;
  for (int k = 1; k < b; ++k) {
    term *= y / k;
    series += term;
  }
  double v = 1.0 - std::exp(-y) * series;
  return std::clamp(v, 0.0, 1.0);
}

double erlang_quantile(double p, int b) {
  if (b < 1) raise(ErrorCode::invalid_argument, "erlang_quantile: b >= 1");
  if (!(p >= 0.0 && p < 1.0))
    raise(ErrorCode::invalid_argument, "erlang_quantile: p in [0,1)");
  if (p == 0.0) return 0.0;
  double q = 1.0 / (1.0 - p);
  double lo = 0.0, hi = b + 40.0 * (std::log(q) + 1.0);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (erlang_cdf(mid, b) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Prop2Bounds prop2_bounds(long long q, int b) {
  if (q < 2 || b < 1) raise(ErrorCode::invalid_argument, "prop2_bounds: q>=2, b>=1");
  Prop2Bounds out;
  out.applicable = (q - 1) * static_cast<long long>(b) >= 55;
  out.lower = 0.5 * std::log(static_cast<double>(q - 1)) +
              0.5 * std::log(static_cast<double>(b));
  out.upper = 2.0 * std::log(static_cast<double>(q - 1)) +
              2.0 * b * std::log(2.0 * b);
  return out;
}

McEstimate mc_max_erlang_mean(long long k, int b, long long trials,
                              uint64_t seed) {
  if (k < 1 || trials < 1)
    raise(ErrorCode::invalid_argument, "mc_max_erlang_mean: k,trials >= 1");
  Rng rng(seed, streams::monte_carlo);
  double sum = 0.0, sumsq = 0.0;
  for (long long t = 0; t < trials; ++t) {
    // If U ~ Uniform(0,1) then F^{-1}(U^{1/k}) is distributed as the
    // max of k independent Erlang(b,1) draws.
    double u = rng.uniform();
    double p = std::exp(std::log(u) / static_cast<double>(k));
    p = std::min(p, 1.0 - 1e-16);
    double y = b + erlang_quantile(p, b);
    sum += y;
    sumsq += y * y;
  }
  McEstimate est;
  est.mean = sum / trials;
  double var = std::max(0.0, sumsq / trials - est.mean * est.mean);
  est.std_error = std::sqrt(var / trials);
  return est;
}

double max_erlang_mean_evt(long long k, int b) {
  double x = erlang_quantile(1.0 - 1.0 / static_cast<double>(k), b);
  double aux = 0.0, term = 1.0;
  for (int j = 0; j < b; ++j) {
    aux += term;
    term *= (b - 1 - j) / x;
  }
  return b + x + kEulerMascheroni * aux;
}

std::vector<double> viete_depressed_cubic(double p_coef, double q_coef) {
  double disc = -4.0 * p_coef * p_coef * p_coef - 27.0 * q_coef * q_coef;
  if (!(disc > 0.0))
    raise(ErrorCode::complex_roots,
          "viete_depressed_cubic: discriminant not positive");
  double mcoef = 2.0 * std::sqrt(-p_coef / 3.0);
  double arg = 3.0 * q_coef / (p_coef * mcoef);
  arg = std::clamp(arg, -1.0, 1.0);
  double phase = std::acos(arg) / 3.0;
  std::vector<double> roots(3);
  for (int t = 0; t < 3; ++t)
    roots[t] = mcoef * std::cos(phase - 2.0943951023931953 * t);
  std::sort(roots.begin(), roots.end());
  return roots;
}

double lemma3_h(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    raise(ErrorCode::domain_error, "lemma3_h: t in [0,1]");
  return std::sin(std::asin(1.0 - t * t) / 3.0 + 2.0943951023931953);
}

bool lemma3_check(double t) {
  double h = lemma3_h(t);
  return std::abs(h - 0.5 - t / std::sqrt(6.0)) <= 5.0 * t * t / 9.0 + 1e-15;
}

namespace {
// h(t) - 1/2 without cancellation: with delta = 2 asin(t/sqrt(2)),
// h(t) = sin(5 pi/6 - delta/3) and
// h(t) - 1/2 = -2 cos(5 pi/6 - delta/6) sin(delta/6).
double h_minus_half(double t) {
  double delta = 2.0 * std::asin(t / std::sqrt(2.0));
  double five_pi_six = 2.6179938779914944;
  return -2.0 * std::cos(five_pi_six - delta / 6.0) * std::sin(delta / 6.0);
}
}  // namespace

FedAveOptimum fedave_optimal_b(double m, double eps_ratio, double phi,
                               double tau, double C) {
  if (!(m >= 1.0) || !(eps_ratio > 0.0 && eps_ratio <= 1.0) || !(tau > 0.0) ||
      !(C > 0.0))
    raise(ErrorCode::invalid_argument, "fedave_optimal_b: bad parameters");
  if (phi < 40.0 / (std::pow(C, 0.25) * tau))
    raise(ErrorCode::phi_too_small,
          "fedave_optimal_b: phi below 40/(C^{1/4} tau)");

  double c1 = 1.0 / (2.0 * m * eps_ratio);
  double c2 = m / std::sqrt(eps_ratio);
  double c3 = phi * tau * m;

  double t2 = 54.0 * c2 / (c1 * c3 * c3);
  if (t2 > 1.0)
    raise(ErrorCode::internal, "fedave_optimal_b: arcsine argument escaped");
  double t = std::sqrt(t2);

  FedAveOptimum out;
  out.b_star = (c3 / 3.0) * h_minus_half(t);

  // stationarity residual and uniqueness sign scan of
  // s(b) = 2 c1 b^3 + c1 c3 b^2 - c2 c3
  auto cubic = [&](double b) { return 2.0 * c1 * b * b * b + c1 * c3 * b * b - c2 * c3; };
  if (std::abs(cubic(out.b_star)) > 1e-9 * std::abs(c2 * c3))
    raise(ErrorCode::internal, "fedave_optimal_b: stationarity residual too large");
  int sign_changes = 0;
  double prev = cubic(out.b_star * 1e-6);
  for (int i = 1; i <= 60; ++i) {
    double b = out.b_star * 1e-6 * std::pow(1e12, i / 60.0);
    double cur = cubic(b);
    if ((prev < 0) != (cur < 0)) ++sign_changes;
    prev = cur;
  }
  if (sign_changes != 1)
    raise(ErrorCode::internal, "fedave_optimal_b: stationary point not unique");

  double c1b = c1 * out.b_star;
  out.T_star = c1b + std::sqrt(c1b * c1b +
                               (c2 / out.b_star) * (c2 / out.b_star));
  out.gamma_estimate =
      (c1 * out.b_star + c2 / out.b_star) * (out.b_star + c3);

  double quarter = std::pow(eps_ratio, 0.25);
  out.b_lower = 0.5 * m * quarter;
  out.b_upper = 2.0 * m * quarter;
  double scale = phi * tau * m * std::pow(eps_ratio, -0.75);
  out.gamma_lower = 0.75 * scale;
  out.gamma_upper = 8.0 * scale;
  return out;
}

std::vector<SweepRow> proposition1_sweep(const std::vector<SweepPoint>& grid) {
  std::vector<SweepRow> rows;
  for (const SweepPoint& pt : grid) {
    if (pt.phi < 40.0)
      raise(ErrorCode::config_error, "sweep: phi below the calculator gate");
    if (pt.s > 10.0 * pt.phi * pt.m)
      raise(ErrorCode::config_error, "sweep: s grows faster than phi*m");
    SweepRow row;
    row.point = pt;
    row.gamma_fedlrgd =
        pt.r * pt.r + pt.r * pt.s + pt.r * pt.S + pt.phi * pt.m * pt.r;
    row.gamma_fedave_plus = pt.phi * pt.m * std::pow(pt.p / pt.eps, 0.75);
    row.ratio = row.gamma_fedlrgd / row.gamma_fedave_plus;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepPoint> default_sweep_grid(int points) {
  if (points < 1) raise(ErrorCode::invalid_argument, "sweep: points >= 1");
  std::vector<SweepPoint> grid;
  for (int j = 0; j < points; ++j) {
    SweepPoint pt;
    pt.m = 1000.0 * std::pow(4.0, j);
    pt.s = pt.m;
    double n = pt.m * pt.s;
    pt.eps = 1.0 / std::sqrt(n);
    pt.p = pt.m;
    pt.phi = 40.0;
    pt.r = std::ceil(std::pow(pt.p / pt.eps, 0.125));
    pt.S = std::ceil(std::log(pt.p / pt.eps));
    grid.push_back(pt);
  }
  return grid;
}

}  // namespace fedlab
