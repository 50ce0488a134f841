#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fedlab/errors.hpp"
#include "fedlab/rng.hpp"

namespace fedlab {

using Vec = std::vector<double>;

struct Dataset {
  int d = 0;                              // point dimension
  std::vector<Vec> server;                // r points in [0,1]^d
  std::vector<std::vector<Vec>> clients;  // m blocks of s points each

  std::size_t r() const { return server.size(); }
  std::size_t m() const { return clients.size(); }
  std::size_t s() const { return clients.empty() ? 0 : clients[0].size(); }
  std::size_t n() const { return r() + m() * s(); }

  void validate() const;
};

Dataset generate_dataset(int d, int m, int s, int r, uint64_t seed);
void save_dataset_csv(const Dataset& ds, const std::string& csv_path);
void save_dataset_header(const Dataset& ds, uint64_t seed,
                         const std::string& json_path);
Dataset load_dataset(const std::string& csv_path,
                     const std::string& json_path);

struct ModelConstants {
  // Negative means "not declared".
  double L1 = -1.0;
  double mu = -1.0;
  double eta = -1.0;
  double L2 = -1.0;
  double B = -1.0;
  bool has_L1() const { return L1 > 0; }
  bool has_mu() const { return mu > 0; }
};

class LossModel {
 public:
  virtual ~LossModel() = default;
  virtual int p() const = 0;              // parameter dimension
  virtual int data_dim() const = 0;       // dimension of data points
  virtual double eval(const Vec& x, const Vec& theta) const = 0;
  virtual Vec grad(const Vec& x, const Vec& theta) const = 0;
  virtual double partial(int i, const Vec& x, const Vec& theta) const {
    return grad(x, theta)[i];
  }
  virtual const ModelConstants& constants() const { return constants_; }

 protected:
  ModelConstants constants_;
};

// Cross-entropy on soft labels plus an l2 penalty.  Data points are the
// concatenation (features, label) with features in [0,1]^{d-1} and the
// label in [0,1]; the parameter lives in R^{d-1}.
class SoftLabelLogistic : public LossModel {
 public:
  SoftLabelLogistic(int d, double mu);
  int p() const override { return d_ - 1; }
  int data_dim() const override { return d_; }
  double eval(const Vec& x, const Vec& theta) const override;
  Vec grad(const Vec& x, const Vec& theta) const override;
  double mu() const { return mu_; }

 private:
  int d_;
  double mu_;
};

ModelConstants logistic_constants(int d, double mu);

// f(x; theta) = 0.5 ||theta||^2, independent of x.
class QuadraticModel : public LossModel {
 public:
  QuadraticModel(int p, int d);
  int p() const override { return p_; }
  int data_dim() const override { return d_; }
  double eval(const Vec& x, const Vec& theta) const override;
  Vec grad(const Vec& x, const Vec& theta) const override;

 private:
  int p_;
  int d_;
};

// f(x; theta) = 0.5||theta||^2 + sum_w phi_w(x) * Psi_w(theta) with
// phi_w distinct monomials and Psi_w(theta) = amp_w cos(b_w . theta + c_w).
// Every coordinate partial then has the exact finite rank r0 =
// 1 + (#terms) as a bivariate function of (x, theta); amplitudes are
// sized so the model stays strongly convex.
class SeparableModel : public LossModel {
 public:
  SeparableModel(int rank, int d, int p, uint64_t seed);
  int p() const override { return p_; }
  int data_dim() const override { return d_; }
  double eval(const Vec& x, const Vec& theta) const override;
  Vec grad(const Vec& x, const Vec& theta) const override;
  int rank() const { return rank_; }

 private:
  double phi(std::size_t w, const Vec& x) const;
  int rank_;
  int d_;
  int p_;
  std::vector<std::vector<int>> exponents_;  // monomial per term
  std::vector<Vec> b_;
  Vec amp_;
  Vec c_;
};

double empirical_risk(const LossModel& model, const Dataset& data,
                      const Vec& theta);
Vec full_gradient(const LossModel& model, const Dataset& data,
                  const Vec& theta);

// Max observed ||grad f(x;th1)-grad f(x;th2)|| / ||th1-th2|| over random
// pairs; throws assumption_violation when it exceeds the declared L1.
double check_smoothness_in_theta(const LossModel& model, int sample_count,
                                 Rng& rng);
// Min observed (f(th1)-f(th2)-grad(th2).(th1-th2)) / (0.5||th1-th2||^2);
// throws assumption_violation when it drops below the declared mu.
double check_strong_convexity(const LossModel& model, int sample_count,
                              Rng& rng);

inline bool is_epsilon_approximate(double F_value, double F_star, double eps) {
  if (eps <= 0) raise(ErrorCode::invalid_argument, "eps must be positive");
  return F_value - F_star <= eps;
}

}  // namespace fedlab
