#include "fedlab/fedave.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fedlab {

namespace {
double step_size(const FedAveConfig& config, long long global_step) {
  switch (config.schedule) {
    case StepSchedule::inverse_time:
      return config.step_c / static_cast<double>(global_step + 1);
    case StepSchedule::constant:
      return config.step_c;
  }
  raise(ErrorCode::internal, "unreachable");
}
}  // namespace

Vec local_sgd_epoch(const LossModel& model, const std::vector<Vec>& block,
                    const Vec& theta_in, long long b,
                    const FedAveConfig& config, long long start_step,
                    Rng& rng) {
  if (b < 1) raise(ErrorCode::invalid_argument, "local_sgd_epoch: b >= 1");
  if (block.empty())
    raise(ErrorCode::invalid_argument, "local_sgd_epoch: empty client block");
  Vec theta = theta_in;
  for (long long t = 0; t < b; ++t) {
    const Vec& x = block[rng.below(block.size())];
    Vec g = model.grad(x, theta);
    double step = step_size(config, start_step + t);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] -= step * g[i];
      if (!std::isfinite(theta[i]))
        raise(ErrorCode::divergence, "local_sgd_epoch: non-finite iterate");
    }
  }
  return theta;
}

FedAveRun run_fedave(const LossModel& model, const Dataset& data,
                     const FedAveConfig& config) {
  data.validate();
  if (data.m() < 1)
    raise(ErrorCode::invalid_argument, "run_fedave: needs at least 1 client");
  if (!(config.tau > 0.0 && config.tau <= 1.0))
    raise(ErrorCode::invalid_argument, "run_fedave: tau in (0,1]");
  std::size_t m = data.m();
  std::size_t active = static_cast<std::size_t>(
      std::ceil(config.tau * static_cast<double>(m)));
  active = std::clamp<std::size_t>(active, 1, m);

  FedAveRun run;
  Vec theta = config.theta0.empty() ? Vec(model.p(), 0.0) : config.theta0;
  run.risk_trace.push_back(empirical_risk(model, data, theta));

  Rng pick_rng(config.seed, streams::client_sampling);
  for (long long epoch = 0; epoch < config.T; ++epoch) {
    // sample `active` distinct clients (partial Fisher-Yates)
    std::vector<std::size_t> ids(m);
    std::iota(ids.begin(), ids.end(), 0);
    for (std::size_t i = 0; i < active; ++i) {
      std::size_t j = i + pick_rng.below(m - i);
      std::swap(ids[i], ids[j]);
    }
    ids.resize(active);
    std::sort(ids.begin(), ids.end());
    run.active_clients.push_back(ids);

    Vec avg(model.p(), 0.0);
    for (std::size_t c : ids) {
      // one stream per (epoch, client): reproducible under parallelism
      Rng sgd_rng(config.seed,
                  streams::sgd_sampling + 97 * (epoch + 1) + 1315423911ull * (c + 1));
      Vec out = local_sgd_epoch(model, data.clients[c], theta, config.b,
                                config, epoch * config.b, sgd_rng);
      for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += out[i];
    }
    for (double& v : avg) v /= static_cast<double>(active);
    theta = std::move(avg);
    run.risk_trace.push_back(empirical_risk(model, data, theta));
  }
  run.theta_final = theta;
  run.ledger = make_fedave_ledger(config.T, config.b,
                                  static_cast<long long>(m), config.tau);
  return run;
}

double estimate_sigma2(const LossModel& model, const Dataset& data,
                       const std::vector<Vec>& theta_sample) {
  double worst = 0.0;
  for (const Vec& theta : theta_sample) {
    for (const auto& block : data.clients) {
      if (block.empty()) continue;
      std::vector<Vec> grads;
      Vec mean(model.p(), 0.0);
      for (const Vec& x : block) {
        grads.push_back(model.grad(x, theta));
        for (int i = 0; i < model.p(); ++i) mean[i] += grads.back()[i];
      }
      for (double& v : mean) v /= static_cast<double>(block.size());
      double var = 0.0;
      for (const Vec& g : grads)
        for (int i = 0; i < model.p(); ++i)
          var += (g[i] - mean[i]) * (g[i] - mean[i]);
      var /= static_cast<double>(block.size());
      worst = std::max(worst, var);
    }
  }
  return worst;
}

}  // namespace fedlab
