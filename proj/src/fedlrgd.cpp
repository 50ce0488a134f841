#include "fedlab/fedlrgd.hpp"

#include <cmath>

namespace fedlab {

namespace {

std::vector<Vec> draw_thetas(int r, int p, Rng& rng) {
  std::vector<Vec> out;
  double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (int k = 0; k < r; ++k) {
    Vec th(p);
    for (double& v : th) v = rng.gaussian() * scale;
    out.push_back(std::move(th));
  }
  return out;
}

// Deterministic pairwise reduction over [lo, hi).
Vec pairwise_sum(const std::vector<Vec>& items, std::size_t lo, std::size_t hi,
                 int dim) {
  if (hi - lo == 0) return Vec(dim, 0.0);
  if (hi - lo == 1) return items[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  Vec left = pairwise_sum(items, lo, mid, dim);
  Vec right = pairwise_sum(items, mid, hi, dim);
  for (int i = 0; i < dim; ++i) left[i] += right[i];
  return left;
}

}  // namespace

ServerPrecomp server_precompute(const LossModel& model, const Dataset& data,
                                const FedLRGDConfig& config) {
  int r = config.r;
  int p = model.p();
  if (static_cast<int>(data.server.size()) != r)
    raise(ErrorCode::invalid_argument,
          "server_precompute: server must hold exactly r samples");

  Rng rng(config.seed, streams::theta_draws);
  const int max_attempts = 6;  // initial draw + 5 retries
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    ServerPrecomp pre;
    pre.redraws = attempt;
    pre.thetas = draw_thetas(r, p, rng);
    bool ok = true;
    for (int i = 0; i < p && ok; ++i) {
      Matrix G(r, r);
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k)
          G(j, k) = model.partial(i, data.server[j], pre.thetas[k]);
      try {
        InvertResult inv = invert(G, config.singular_tol);
        pre.max_condition = std::max(pre.max_condition, inv.condition_estimate);
        pre.g_inv.push_back(std::move(inv.inverse));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::singular_matrix) throw;
        ok = false;
      }
    }
    if (ok) return pre;
  }
  raise(ErrorCode::singular_matrix,
        "server_precompute: singular sample matrix after 5 redraws");
}

std::vector<Vec> client_weights(const LossModel& model,
                                const std::vector<Vec>& block,
                                const ServerPrecomp& precomp) {
  int p = model.p();
  int r = static_cast<int>(precomp.thetas.size());
  std::vector<Vec> v(p, Vec(r, 0.0));
  for (int i = 0; i < p; ++i) {
    Vec rowsum(r, 0.0);
    for (const Vec& x : block)
      for (int k = 0; k < r; ++k)
        rowsum[k] += model.partial(i, x, precomp.thetas[k]);
    const Matrix& inv = precomp.g_inv[i];
    for (int k = 0; k < r; ++k) {
      double acc = 0.0;
      for (int j = 0; j < r; ++j) acc += rowsum[j] * inv(j, k);
      v[i][k] = acc;
    }
  }
  return v;
}

std::vector<Vec> aggregate_weights(const WeightTensor& weights, int p, int r) {
  std::vector<Vec> agg(p, Vec(r, 0.0));
  for (int i = 0; i < p; ++i) {
    std::vector<Vec> per_client;
    per_client.reserve(weights.v[i].size());
    for (const Vec& w : weights.v[i]) per_client.push_back(w);
    agg[i] = pairwise_sum(per_client, 0, per_client.size(), r);
  }
  return agg;
}

Vec approx_gradient(const LossModel& model, const std::vector<Vec>& server,
                    const Vec& theta, const std::vector<Vec>& agg_weights,
                    std::size_t n_total) {
  int p = model.p();
  int r = static_cast<int>(server.size());
  Vec g(p, 0.0);
  for (int k = 0; k < r; ++k) {
    Vec gk = model.grad(server[k], theta);
    for (int i = 0; i < p; ++i) {
      double w = agg_weights.empty() ? 0.0 : agg_weights[i][k];
      g[i] += gk[i] * (1.0 + w);
    }
  }
  for (double& v : g) v /= static_cast<double>(n_total);
  return g;
}

std::vector<Vec> inexact_gd(const Vec& theta0, const GradOracle& oracle,
                            double L1, int S) {
  if (S < 1 || L1 <= 0)
    raise(ErrorCode::invalid_argument, "inexact_gd: need S >= 1, L1 > 0");
  std::vector<Vec> traj{theta0};
  Vec theta = theta0;
  for (int t = 0; t < S; ++t) {
    Vec g = oracle(theta);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] -= g[i] / L1;
      if (!std::isfinite(theta[i]))
        raise(ErrorCode::divergence, "inexact_gd: non-finite iterate");
    }
    traj.push_back(theta);
  }
  return traj;
}

long long choose_iterations(double kappa, double numerator, double eps) {
  if (!(kappa > 1.0))
    raise(ErrorCode::invalid_condition, "choose_iterations: kappa > 1");
  if (!(eps > 0.0) || !(numerator >= eps))
    raise(ErrorCode::invalid_argument,
          "choose_iterations: need eps > 0, numerator >= eps");
  double S = std::ceil(std::log(numerator / eps) /
                       std::log(kappa / (kappa - 1.0)));
  return std::max(1LL, static_cast<long long>(S));
}

long long choose_rank_theoretical(int d, double eta, double alpha, double L2,
                                  double kappa, double mu, double B, int p,
                                  double eps, double F0_gap) {
  if (!(eta > (2.0 * alpha + 2.0) * d))
    raise(ErrorCode::invalid_condition,
          "choose_rank_theoretical: need eta > (2 alpha + 2) d");
  double slack = 9.0 * std::pow(B + 3.0, 4.0) * p / (2.0 * mu);
  if (!(eps <= slack * 0.25) || !(eps > 0.0))
    raise(ErrorCode::invalid_condition,
          "choose_rank_theoretical: eps exceeds 9(B+3)^4 p / (8 mu)");

  double log_branch1 = 1.0 + 0.5 * std::log(static_cast<double>(d)) +
                       d * std::log(2.0) +
                       d * std::log(eta + static_cast<double>(d));

  double log_inner =
      d * std::log(L2) + d * std::log(eta) + eta * (d + 1.0) +
      0.5 * eta * std::log(static_cast<double>(d)) +
      eta * d * std::log(2.0 * eta + 2.0 * d) -
      eta * d * std::log(eta - 1.0);
  double log_ratio =
      std::log(kappa * (F0_gap + slack) / ((kappa - 1.0) * eps));
  double log_branch2 =
      (log_inner + 0.5 * d * log_ratio) / (eta - (2.0 * alpha + 2.0) * d);

  double log_r = std::max(log_branch1, log_branch2);
  if (log_r > std::log(9e17))
    raise(ErrorCode::too_large, "choose_rank_theoretical: rank overflows");
  return static_cast<long long>(std::ceil(std::exp(log_r) - 1e-12));
}

FedLRGDRun run_fedlrgd(const LossModel& model, const Dataset& data,
                       const FedLRGDConfig& config) {
  data.validate();
  FedLRGDRun run;
  int p = model.p();
  run.precomp = server_precompute(model, data, config);

  WeightTensor weights;
  weights.v.assign(p, {});
  for (const auto& block : data.clients) {
    std::vector<Vec> v = client_weights(model, block, run.precomp);
    for (int i = 0; i < p; ++i) weights.v[i].push_back(std::move(v[i]));
  }
  run.agg_weights = data.clients.empty()
                        ? std::vector<Vec>()
                        : aggregate_weights(weights, p, config.r);

  Vec theta0 = config.theta0.empty() ? Vec(p, 0.0) : config.theta0;
  GradOracle oracle = [&](const Vec& th) {
    return approx_gradient(model, data.server, th, run.agg_weights, data.n());
  };
  run.trajectory = inexact_gd(theta0, oracle, config.L1, config.S);
  run.theta_star = run.trajectory.back();

  for (const Vec& th : run.trajectory)
    run.risk_trace.push_back(empirical_risk(model, data, th));
  for (int t = 0; t < config.S; ++t) {
    Vec approx = oracle(run.trajectory[t]);
    Vec exact = full_gradient(model, data, run.trajectory[t]);
    double e = 0.0;
    for (int i = 0; i < p; ++i)
      e += (approx[i] - exact[i]) * (approx[i] - exact[i]);
    run.grad_error_sq.push_back(e);
  }

  run.ledger = make_fedlrgd_ledger(config.r, data.s(), config.S,
                                   static_cast<long long>(data.m()));
  // Communicating epochs: the weight-shipping epochs each carry exactly
  // p doubles per client.
  for (const EpochRecord& rec : run.ledger.records)
    if (rec.communicated)
      run.message_doubles_per_client.push_back(static_cast<std::size_t>(p));
  return run;
}

double reference_f_star(const LossModel& model, const Dataset& data,
                        double L1, long long max_steps) {
  Vec theta(model.p(), 0.0);
  for (long long t = 0; t < max_steps; ++t) {
    Vec g = full_gradient(model, data, theta);
    double norm = 0.0;
    for (double v : g) norm += v * v;
    if (std::sqrt(norm) < 1e-10) break;
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= g[i] / L1;
  }
  return empirical_risk(model, data, theta);
}

}  // namespace fedlab
