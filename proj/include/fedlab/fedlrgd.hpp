#pragma once
#include <cstdint>
#include <vector>

#include "fedlab/numerics.hpp"
#include "fedlab/oracle.hpp"
#include "fedlab/problem.hpp"

namespace fedlab {

struct FedLRGDConfig {
  int r = 1;             // approximate rank; server must hold r samples
  int S = 1;             // inexact GD iterations
  double L1 = 1.0;       // step size is 1/L1
  uint64_t seed = 0;     // parameter-vector draws
  double singular_tol = 1e-12;
  Vec theta0;            // empty = origin
};

struct ServerPrecomp {
  std::vector<Vec> thetas;      // r parameter vectors
  std::vector<Matrix> g_inv;    // p inverses, r x r
  double max_condition = 0.0;
  int redraws = 0;
};

// v[i][c][k]: coordinate i, client c, server-sample weight k.
struct WeightTensor {
  std::vector<std::vector<Vec>> v;
};

ServerPrecomp server_precompute(const LossModel& model, const Dataset& data,
                                const FedLRGDConfig& config);

// One client's weight vectors for all coordinates (p x r).
std::vector<Vec> client_weights(const LossModel& model,
                                const std::vector<Vec>& block,
                                const ServerPrecomp& precomp);

// Sum of per-client weights, client-index ascending pairwise reduction.
std::vector<Vec> aggregate_weights(const WeightTensor& weights, int p, int r);

Vec approx_gradient(const LossModel& model, const std::vector<Vec>& server,
                    const Vec& theta, const std::vector<Vec>& agg_weights,
                    std::size_t n_total);

using GradOracle = std::function<Vec(const Vec&)>;
std::vector<Vec> inexact_gd(const Vec& theta0, const GradOracle& oracle,
                            double L1, int S);

// ceil(log(numerator/eps) / log(kappa/(kappa-1))), at least 1.
long long choose_iterations(double kappa, double numerator, double eps);

// Theoretical rank selector; evaluated in log space.
long long choose_rank_theoretical(int d, double eta, double alpha, double L2,
                                  double kappa, double mu, double B, int p,
                                  double eps, double F0_gap);

struct FedLRGDRun {
  Vec theta_star;
  std::vector<Vec> trajectory;       // S+1 iterates
  std::vector<double> risk_trace;    // F(theta^{(gamma)})
  std::vector<double> grad_error_sq; // per-step ||approx - exact||^2
  EpochLedger ledger;
  // per communicating epoch, message doubles per client (structural check)
  std::vector<std::size_t> message_doubles_per_client;
  ServerPrecomp precomp;
  std::vector<Vec> agg_weights;
};

FedLRGDRun run_fedlrgd(const LossModel& model, const Dataset& data,
                       const FedLRGDConfig& config);

// Reference minimum via exact full-gradient descent (up to max_steps or
// gradient norm below 1e-10).
double reference_f_star(const LossModel& model, const Dataset& data,
                        double L1, long long max_steps = 100000);

}  // namespace fedlab
