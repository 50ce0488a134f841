#pragma once
#include <cstdint>
#include <vector>

#include "fedlab/oracle.hpp"
#include "fedlab/problem.hpp"

namespace fedlab {

enum class StepSchedule { inverse_time, constant };

struct FedAveConfig {
  long long b = 1;   // local gradient steps per active client per epoch
  long long T = 1;   // epochs
  double tau = 1.0;  // active fraction; ceil(tau*m) clients per epoch
  StepSchedule schedule = StepSchedule::inverse_time;
  double step_c = 1.0;  // inverse_time: c/(t+1); constant: c
  uint64_t seed = 0;
  Vec theta0;  // empty = origin
};

// b single-sample SGD steps on one client block; start_step feeds the
// global step index into the schedule; sampling uses the provided rng.
Vec local_sgd_epoch(const LossModel& model, const std::vector<Vec>& block,
                    const Vec& theta_in, long long b,
                    const FedAveConfig& config, long long start_step,
                    Rng& rng);

struct FedAveRun {
  Vec theta_final;
  std::vector<double> risk_trace;  // F(theta) after each epoch, T+1 values
  EpochLedger ledger;
  std::vector<std::vector<std::size_t>> active_clients;  // per epoch
};

FedAveRun run_fedave(const LossModel& model, const Dataset& data,
                     const FedAveConfig& config);

// Max over sampled thetas and clients of the single-sample stochastic
// gradient variance around the client mean gradient.
double estimate_sigma2(const LossModel& model, const Dataset& data,
                       const std::vector<Vec>& theta_sample);

}  // namespace fedlab
