#pragma once
#include <cstdint>
#include <vector>

#include "fedlab/errors.hpp"

namespace fedlab {

enum class EpochType { A, B, C };

// b is per-active-client for type A, server-side for type B, zero for C.
struct EpochRecord {
  EpochType type;
  long long b = 0;
  bool communicated = false;

  void validate() const;
};

struct EpochLedger {
  std::vector<EpochRecord> records;
  long long m = 0;
  double tau = 1.0;

  void validate() const;
};

struct CostModel {
  double phi = 1.0;  // communication / single-gradient time ratio
  double tau = 1.0;
  long long m = 0;
};

double gamma(const EpochLedger& ledger, const CostModel& cost);
double expected_epoch_time(EpochType type, long long b, const CostModel& cost);

// Canonical ledger shapes (shared by the simulators and the calculators).
EpochLedger make_fedlrgd_ledger(long long r, long long s, long long S,
                                long long m);
EpochLedger make_fedave_ledger(long long T, long long b, long long m,
                               double tau);

double erlang_cdf(double y, int b);
double erlang_quantile(double p, int b);

struct Prop2Bounds {
  double lower = 0.0;
  double upper = 0.0;
  bool applicable = false;
};
Prop2Bounds prop2_bounds(long long q, int b);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
// Monte Carlo estimate of b + E[max of k Erlang(b,1)], sampled exactly
// through the quantile function of the max.
McEstimate mc_max_erlang_mean(long long k, int b, long long trials,
                              uint64_t seed);

// Extreme-value approximation b + F^{-1}(1-1/k) + gamma_em * a(F^{-1}(1-1/k))
// with a() the von Mises auxiliary function of the Erlang CDF.
double max_erlang_mean_evt(long long k, int b);

// Roots of a^3 + p*a + q = 0, all real and distinct (throws otherwise).
std::vector<double> viete_depressed_cubic(double p_coef, double q_coef);

double lemma3_h(double t);
bool lemma3_check(double t);

struct FedAveOptimum {
  double b_star = 0.0;
  double T_star = 0.0;
  double gamma_estimate = 0.0;
  double b_lower = 0.0, b_upper = 0.0;
  double gamma_lower = 0.0, gamma_upper = 0.0;
};
// eps_ratio is the accuracy-to-constant ratio (epsilon/(C p) knob); the
// scale constant C only enters the phi >= 40/(C^{1/4} tau) gate.
FedAveOptimum fedave_optimal_b(double m, double eps_ratio, double phi,
                               double tau, double C = 1.0);

struct SweepPoint {
  double m, s, p, eps, phi;
  double r, S;
};
struct SweepRow {
  SweepPoint point;
  double gamma_fedlrgd = 0.0;
  double gamma_fedave_plus = 0.0;
  double ratio = 0.0;
};
std::vector<SweepRow> proposition1_sweep(const std::vector<SweepPoint>& grid);
std::vector<SweepPoint> default_sweep_grid(int points = 6);

}  // namespace fedlab
