#include "fedlab/rank_probe.hpp"

#include <algorithm>
#include <cmath>

namespace fedlab {

std::size_t approximate_rank(const Matrix& A, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    raise(ErrorCode::invalid_argument, "approximate_rank: fraction in (0,1]");
  std::vector<double> sig = singular_values(A);
  double total = 0.0;
  for (double s : sig) total += s * s;
  if (total == 0.0) raise(ErrorCode::zero_matrix, "approximate_rank: zero matrix");
  double acc = 0.0;
  for (std::size_t j = 0; j < sig.size(); ++j) {
    acc += sig[j] * sig[j];
    if (acc >= fraction * total - 1e-12 * total) return j + 1;
  }
  return sig.size();
}

GradientTensor build_gradient_tensor(const LossModel& model,
                                     const std::vector<Vec>& points,
                                     const Vec& theta_star, uint64_t seed) {
  if (points.empty())
    raise(ErrorCode::invalid_argument, "build_gradient_tensor: no points");
  std::size_t k = points.size();
  int p = model.p();
  double l1 = 0.0;
  for (double v : theta_star) l1 += std::abs(v);
  double scale = l1 / static_cast<double>(p);

  Rng rng(seed, streams::probe);
  GradientTensor tensor;
  for (std::size_t j = 0; j < k; ++j) {
    Vec th(theta_star);
    for (double& v : th) v += scale * rng.gaussian();
    tensor.thetas.push_back(std::move(th));
  }
  tensor.slices.assign(p, Matrix(k, k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      Vec g = model.grad(points[i], tensor.thetas[j]);
      for (int q = 0; q < p; ++q) tensor.slices[q](i, j) = g[q];
    }
  return tensor;
}

std::map<std::size_t, std::size_t> rank_histogram(const GradientTensor& tensor,
                                                  const Vec& theta_star,
                                                  const ProbeConfig& config) {
  std::vector<std::size_t> selected;
  for (std::size_t q = 0; q < theta_star.size(); ++q)
    if (std::abs(theta_star[q]) >= config.eps_w) selected.push_back(q);
  if (selected.empty())
    raise(ErrorCode::empty_selection, "rank_histogram: no non-trivial weights");
  if (config.subsample > 0 &&
      selected.size() > static_cast<std::size_t>(config.subsample)) {
    Rng rng(config.seed, streams::probe + 1);
    std::vector<std::size_t> keep;
    for (int t = 0; t < config.subsample; ++t)
      keep.push_back(selected[rng.below(selected.size())]);
    selected = std::move(keep);
  }
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t q : selected)
    hist[approximate_rank(tensor.slices[q], config.energy_fraction)] += 1;
  return hist;
}

namespace {
double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t))
                : std::exp(t) / (1.0 + std::exp(t));
}
}  // namespace

TinyMlp::TinyMlp(int in_dim, int hidden, uint64_t seed)
    : in_dim_(in_dim), hidden_(hidden) {
  p_ = hidden_ * (in_dim_ + 1) + hidden_ + 1;
  if (p_ > 200) raise(ErrorCode::too_large, "TinyMlp: parameter budget is 200");
  Rng rng(seed, streams::model_init);
  theta_init_.resize(p_);
  for (double& v : theta_init_) v = 0.5 * rng.gaussian();
}

// theta layout: [W1 (hidden x in), b1 (hidden), w2 (hidden), b2]
double TinyMlp::forward(const Vec& x, const Vec& theta, Vec* hidden_out) const {
  Vec h(hidden_);
  for (int j = 0; j < hidden_; ++j) {
    double t = theta[hidden_ * in_dim_ + j];
    for (int i = 0; i < in_dim_; ++i) t += theta[j * in_dim_ + i] * x[i];
    h[j] = sigmoid(t);
  }
  int off = hidden_ * (in_dim_ + 1);
  double out = theta[off + hidden_];
  for (int j = 0; j < hidden_; ++j) out += theta[off + j] * h[j];
  if (hidden_out) *hidden_out = std::move(h);
  return out;
}

double TinyMlp::eval(const Vec& x, const Vec& theta) const {
  double z = x[in_dim_];
  double t = forward(x, theta, nullptr);
  double softplus = t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  return softplus - z * t;  // cross entropy with soft label z
}

Vec TinyMlp::grad(const Vec& x, const Vec& theta) const {
  Vec h;
  double t = forward(x, theta, &h);
  double z = x[in_dim_];
  double delta = sigmoid(t) - z;  // d loss / d output
  Vec g(p_, 0.0);
  int off = hidden_ * (in_dim_ + 1);
  g[off + hidden_] = delta;
  for (int j = 0; j < hidden_; ++j) {
    g[off + j] = delta * h[j];
    double dh = delta * theta[off + j] * h[j] * (1.0 - h[j]);
    g[hidden_ * in_dim_ + j] = dh;
    for (int i = 0; i < in_dim_; ++i) g[j * in_dim_ + i] = dh * x[i];
  }
  return g;
}

std::vector<Vec> synthetic_blobs(int count, int in_dim, uint64_t seed) {
  Rng rng(seed, streams::dataset);
  std::vector<Vec> points;
  for (int t = 0; t < count; ++t) {
    int label = t % 2;
    double center = label == 0 ? 0.3 : 0.7;
    Vec x(in_dim + 1);
    for (int i = 0; i < in_dim; ++i)
      x[i] = std::clamp(center + 0.12 * rng.gaussian(), 0.0, 1.0);
    x[in_dim] = static_cast<double>(label);
    points.push_back(std::move(x));
  }
  return points;
}

Vec train_gd(const LossModel& model, const std::vector<Vec>& points,
             const Vec& theta0, double step, int iterations) {
  Vec theta = theta0;
  for (int it = 0; it < iterations; ++it) {
    Vec g(model.p(), 0.0);
    for (const Vec& x : points) {
      Vec gi = model.grad(x, theta);
      for (int i = 0; i < model.p(); ++i) g[i] += gi[i];
    }
    for (int i = 0; i < model.p(); ++i)
      theta[i] -= step * g[i] / static_cast<double>(points.size());
  }
  return theta;
}

}  // namespace fedlab
