#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "fedlab/numerics.hpp"
#include "fedlab/problem.hpp"

namespace fedlab {

struct ProbeConfig {
  int k = 2;                    // sample / perturbation count
  double eps_w = 0.005;         // non-trivial weight threshold
  double energy_fraction = 0.9;
  uint64_t seed = 0;
  int subsample = 0;            // 0 = off; otherwise cap coordinate count
};

// Smallest J with sum of the J largest sigma_i^2 >= fraction * ||A||_F^2.
std::size_t approximate_rank(const Matrix& A, double fraction);

struct GradientTensor {
  // slices[q](i, j) = partial_q f(x_i; theta_j)
  std::vector<Matrix> slices;
  std::vector<Vec> thetas;
};

GradientTensor build_gradient_tensor(const LossModel& model,
                                     const std::vector<Vec>& points,
                                     const Vec& theta_star, uint64_t seed);

std::map<std::size_t, std::size_t> rank_histogram(const GradientTensor& tensor,
                                                  const Vec& theta_star,
                                                  const ProbeConfig& config);

// Two-layer logistic-activation network on (features, label) points;
// parameter count stays small (hidden*(in+1) + hidden + 1).
class TinyMlp : public LossModel {
 public:
  TinyMlp(int in_dim, int hidden, uint64_t seed);
  int p() const override { return p_; }
  int data_dim() const override { return in_dim_ + 1; }
  double eval(const Vec& x, const Vec& theta) const override;
  Vec grad(const Vec& x, const Vec& theta) const override;
  Vec initial_theta() const { return theta_init_; }

 private:
  double forward(const Vec& x, const Vec& theta, Vec* hidden_out) const;
  int in_dim_;
  int hidden_;
  int p_;
  Vec theta_init_;
};

// Two clipped Gaussian blobs with labels; points are (features, label).
std::vector<Vec> synthetic_blobs(int count, int in_dim, uint64_t seed);

// Plain full-gradient descent over a point list.
Vec train_gd(const LossModel& model, const std::vector<Vec>& points,
             const Vec& theta0, double step, int iterations);

}  // namespace fedlab
