#include "fedlab/problem.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fedlab {

void Dataset::validate() const {
  if (d < 1) raise(ErrorCode::invalid_argument, "dataset: d must be >= 1");
  if (server.empty())
    raise(ErrorCode::invalid_argument, "dataset: server needs >= 1 point");
  auto check_point = [&](const Vec& x) {
    if (static_cast<int>(x.size()) != d)
      raise(ErrorCode::invalid_argument, "dataset: point dimension mismatch");
    for (double v : x)
      if (!(v >= 0.0 && v <= 1.0))
        raise(ErrorCode::invalid_argument,
              "dataset: coordinate outside [0,1]");
  };
  for (const Vec& x : server) check_point(x);
  std::size_t s0 = s();
  for (const auto& block : clients) {
    if (block.size() != s0)
      raise(ErrorCode::invalid_argument, "dataset: ragged client blocks");
    for (const Vec& x : block) check_point(x);
  }
}

Dataset generate_dataset(int d, int m, int s, int r, uint64_t seed) {
  if (d < 1 || r < 1 || m < 0 || (m > 0 && s < 1))
    raise(ErrorCode::invalid_argument, "generate_dataset: bad sizes");
  Rng rng(seed, streams::dataset);
  Dataset ds;
  ds.d = d;
  auto draw = [&] {
    Vec x(d);
    for (double& v : x) v = rng.uniform();
    return x;
  };
  for (int i = 0; i < r; ++i) ds.server.push_back(draw());
  ds.clients.resize(m);
  for (int c = 0; c < m; ++c)
    for (int j = 0; j < s; ++j) ds.clients[c].push_back(draw());
  return ds;
}

void save_dataset_csv(const Dataset& ds, const std::string& csv_path) {
  std::ofstream out(csv_path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + csv_path);
  out.precision(17);
  auto row = [&](int block, const Vec& x) {
    out << block;
    for (double v : x) out << ',' << v;
    out << '\n';
  };
  for (const Vec& x : ds.server) row(0, x);
  for (std::size_t c = 0; c < ds.clients.size(); ++c)
    for (const Vec& x : ds.clients[c]) row(static_cast<int>(c) + 1, x);
}

void save_dataset_header(const Dataset& ds, uint64_t seed,
                         const std::string& json_path) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["d"] = ds.d;
  j["m"] = ds.m();
  j["s"] = ds.s();
  j["r"] = ds.r();
  j["seed"] = seed;
  std::ofstream out(json_path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + json_path);
  out << j.dump(2) << '\n';
}

Dataset load_dataset(const std::string& csv_path,
                     const std::string& json_path) {
  std::ifstream hdr(json_path);
  if (!hdr) raise(ErrorCode::io_error, "cannot read " + json_path);
  nlohmann::json j;
  hdr >> j;
  Dataset ds;
  ds.d = j.at("d").get<int>();
  std::size_t m = j.at("m").get<std::size_t>();
  std::size_t s = j.at("s").get<std::size_t>();
  std::size_t r = j.at("r").get<std::size_t>();
  ds.clients.resize(m);

  std::ifstream in(csv_path);
  if (!in) raise(ErrorCode::io_error, "cannot read " + csv_path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    int block = std::stoi(cell);
    Vec x;
    while (std::getline(ss, cell, ',')) x.push_back(std::stod(cell));
    if (block == 0)
      ds.server.push_back(std::move(x));
    else if (block >= 1 && static_cast<std::size_t>(block) <= m)
      ds.clients[block - 1].push_back(std::move(x));
    else
      raise(ErrorCode::io_error, "dataset csv: bad block id");
  }
  if (ds.r() != r || ds.s() != s)
    raise(ErrorCode::io_error, "dataset csv does not match header");
  ds.validate();
  return ds;
}

namespace {
// log(1 + e^t), overflow-safe
double softplus(double t) {
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}
double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t))
                : std::exp(t) / (1.0 + std::exp(t));
}
}  // namespace

SoftLabelLogistic::SoftLabelLogistic(int d, double mu) : d_(d), mu_(mu) {
  if (d < 2 || mu < 0)
    raise(ErrorCode::invalid_argument, "SoftLabelLogistic: need d>=2, mu>=0");
  constants_ = logistic_constants(d, mu > 0 ? mu : 1e-12);
  if (mu == 0) constants_.mu = -1.0;
}

double SoftLabelLogistic::eval(const Vec& x, const Vec& theta) const {
  double t = 0.0;
  for (int i = 0; i < d_ - 1; ++i) t += theta[i] * x[i];
  double z = x[d_ - 1];
  double reg = 0.0;
  for (int i = 0; i < d_ - 1; ++i) reg += theta[i] * theta[i];
  return z * softplus(-t) + (1.0 - z) * softplus(t) + 0.5 * mu_ * reg;
}

Vec SoftLabelLogistic::grad(const Vec& x, const Vec& theta) const {
  double t = 0.0;
  for (int i = 0; i < d_ - 1; ++i) t += theta[i] * x[i];
  double z = x[d_ - 1];
  double coef = (1.0 - z) * sigmoid(t) - z * sigmoid(-t);
  Vec g(d_ - 1);
  for (int i = 0; i < d_ - 1; ++i) g[i] = coef * x[i] + mu_ * theta[i];
  return g;
}

ModelConstants logistic_constants(int d, double mu) {
  if (d < 2 || mu <= 0)
    raise(ErrorCode::invalid_argument, "logistic_constants: need d>=2, mu>0");
  ModelConstants c;
  c.L1 = (d - 1) / 2.0 + mu;
  c.mu = mu;
  c.eta = 2.0;
  c.L2 = 1.0;
  return c;
}

QuadraticModel::QuadraticModel(int p, int d) : p_(p), d_(d) {
  constants_.L1 = 1.0;
  constants_.mu = 1.0;
}

double QuadraticModel::eval(const Vec&, const Vec& theta) const {
  double s = 0.0;
  for (double v : theta) s += v * v;
  return 0.5 * s;
}

Vec QuadraticModel::grad(const Vec&, const Vec& theta) const { return theta; }

SeparableModel::SeparableModel(int rank, int d, int p, uint64_t seed)
    : rank_(rank), d_(d), p_(p) {
  if (rank < 1 || d < 1 || p < 1)
    raise(ErrorCode::invalid_argument, "SeparableModel: bad sizes");
  Rng rng(seed, streams::model_init);
  int terms = rank - 1;
  double hessian_budget = 0.5;  // keeps 1 - sum amp ||b||^2 >= 0.5
  for (int w = 0; w < terms; ++w) {
    // Distinct monomials: term w uses total degree w+1 spread over coords.
    std::vector<int> e(d_, 0);
    int deg = w + 1;
    for (int t = 0; t < deg; ++t) e[t % d_] += 1;
    exponents_.push_back(e);
    Vec b(p_);
    double norm2 = 0.0;
    for (double& v : b) {
      double mag = rng.uniform(0.3, 1.0);
      v = rng.uniform() < 0.5 ? -mag : mag;
      norm2 += v * v;
    }
    b_.push_back(b);
    amp_.push_back(hessian_budget / (terms * norm2));
    c_.push_back(rng.uniform(0.0, 6.28));
  }
  double spent = 0.0;
  for (int w = 0; w < terms; ++w) {
    double n2 = 0.0;
    for (double v : b_[w]) n2 += v * v;
    spent += amp_[w] * n2;
  }
  constants_.mu = 1.0 - spent;
  constants_.L1 = 1.0 + spent;
}

double SeparableModel::phi(std::size_t w, const Vec& x) const {
  double v = 1.0;
  for (int i = 0; i < d_; ++i)
    for (int t = 0; t < exponents_[w][i]; ++t) v *= x[i];
  return v;
}

double SeparableModel::eval(const Vec& x, const Vec& theta) const {
  double s = 0.0;
  for (double v : theta) s += v * v;
  double f = 0.5 * s;
  for (std::size_t w = 0; w < b_.size(); ++w) {
    double dot = c_[w];
    for (int i = 0; i < p_; ++i) dot += b_[w][i] * theta[i];
    f += phi(w, x) * amp_[w] * std::cos(dot);
  }
  return f;
}

Vec SeparableModel::grad(const Vec& x, const Vec& theta) const {
  Vec g(theta);
  for (std::size_t w = 0; w < b_.size(); ++w) {
    double dot = c_[w];
    for (int i = 0; i < p_; ++i) dot += b_[w][i] * theta[i];
    double factor = -phi(w, x) * amp_[w] * std::sin(dot);
    for (int i = 0; i < p_; ++i) g[i] += factor * b_[w][i];
  }
  return g;
}

double empirical_risk(const LossModel& model, const Dataset& data,
                      const Vec& theta) {
  double total = 0.0;
  for (const Vec& x : data.server) total += model.eval(x, theta);
  for (const auto& block : data.clients) {
    double part = 0.0;
    for (const Vec& x : block) part += model.eval(x, theta);
    total += part;
  }
  return total / static_cast<double>(data.n());
}

Vec full_gradient(const LossModel& model, const Dataset& data,
                  const Vec& theta) {
  Vec total(model.p(), 0.0);
  auto add = [&](const Vec& x) {
    Vec g = model.grad(x, theta);
    for (int i = 0; i < model.p(); ++i) total[i] += g[i];
  };
  for (const Vec& x : data.server) add(x);
  for (const auto& block : data.clients)
    for (const Vec& x : block) add(x);
  for (double& v : total) v /= static_cast<double>(data.n());
  return total;
}

namespace {
Vec random_theta(int p, Rng& rng) {
  Vec t(p);
  for (double& v : t) v = rng.gaussian();
  return t;
}
Vec random_point(int d, Rng& rng) {
  Vec x(d);
  for (double& v : x) v = rng.uniform();
  return x;
}
}  // namespace

double check_smoothness_in_theta(const LossModel& model, int sample_count,
                                 Rng& rng) {
  if (!model.constants().has_L1())
    raise(ErrorCode::invalid_argument, "model does not declare L1");
  double worst = 0.0;
  for (int t = 0; t < sample_count; ++t) {
    Vec x = random_point(model.data_dim(), rng);
    Vec t1 = random_theta(model.p(), rng);
    Vec t2 = random_theta(model.p(), rng);
    Vec g1 = model.grad(x, t1), g2 = model.grad(x, t2);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < model.p(); ++i) {
      num += (g1[i] - g2[i]) * (g1[i] - g2[i]);
      den += (t1[i] - t2[i]) * (t1[i] - t2[i]);
    }
    if (den == 0.0) continue;
    double ratio = std::sqrt(num / den);
    if (ratio > worst) worst = ratio;
    if (ratio > model.constants().L1 * (1.0 + 1e-6)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "smoothness violated: ratio %.9g > L1 %.9g at pair %d",
                    ratio, model.constants().L1, t);
      raise(ErrorCode::assumption_violation, buf);
    }
  }
  return worst;
}

double check_strong_convexity(const LossModel& model, int sample_count,
                              Rng& rng) {
  if (!model.constants().has_mu())
    raise(ErrorCode::invalid_argument, "model does not declare mu");
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < sample_count; ++t) {
    Vec x = random_point(model.data_dim(), rng);
    Vec t1 = random_theta(model.p(), rng);
    Vec t2 = random_theta(model.p(), rng);
    Vec g2 = model.grad(x, t2);
    double lin = 0.0, dist2 = 0.0;
    for (int i = 0; i < model.p(); ++i) {
      lin += g2[i] * (t1[i] - t2[i]);
      dist2 += (t1[i] - t2[i]) * (t1[i] - t2[i]);
    }
    if (dist2 == 0.0) continue;
    double gap = model.eval(x, t1) - model.eval(x, t2) - lin;
    double ratio = gap / (0.5 * dist2);
    if (ratio < worst) worst = ratio;
    if (ratio < model.constants().mu * (1.0 - 1e-6)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "strong convexity violated: ratio %.9g < mu %.9g at pair %d",
                    ratio, model.constants().mu, t);
      raise(ErrorCode::assumption_violation, buf);
    }
  }
  return worst;
}

}  // namespace fedlab
