#include "fedlab/covering.hpp"

#include <algorithm>
#include <cmath>

namespace fedlab {

namespace {

double l1_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double log_volumetric_bound(int d, int q) {
  double lb = 0.0;
  for (int i = 2; i <= d; ++i) lb += std::log(static_cast<double>(i));
  lb += d * std::log(static_cast<double>(q) + 1.0);
  return lb;
}

}  // namespace

L1Net build_l1_net(int d, int q) {
  if (d < 1 || q < 1) raise(ErrorCode::invalid_argument, "build_l1_net: d,q >= 1");
  if (log_volumetric_bound(d, q) > std::log(1e15))
    raise(ErrorCode::too_large, "build_l1_net: d!(q+1)^d too large");
  // Cubic cells of half-width h have l1-radius d*h; need d*h <= 1/q.
  long long nc = static_cast<long long>(std::ceil(q * d / 2.0));
  double cells = std::pow(static_cast<double>(nc), d);
  if (cells > 2e6) raise(ErrorCode::too_large, "build_l1_net: lattice too large");

  L1Net net;
  net.d = d;
  net.q = q;
  std::vector<long long> idx(d, 0);
  for (;;) {
    Vec z(d);
    for (int i = 0; i < d; ++i) z[i] = (2.0 * idx[i] + 1.0) / (2.0 * nc);
    net.centers.push_back(z);
    int i = 0;
    while (i < d && ++idx[i] == nc) idx[i++] = 0;
    if (i == d) break;
  }

  // Greedy pruning: drop a center when another single center provably
  // covers its whole cell.  The worst point of the cube around z for a
  // ball at z' is a corner, so max l1-distance is l1(z, z') + d*h; the
  // test is exact and never breaks the covering property.
  double h = 1.0 / (2.0 * nc);
  double radius = net.radius() + 1e-12;
  std::vector<bool> alive(net.centers.size(), true);
  for (std::size_t j = 0; j < net.centers.size(); ++j) {
    for (std::size_t k = 0; k < net.centers.size(); ++k) {
      if (k == j || !alive[k]) continue;
      if (l1_dist(net.centers[j], net.centers[k]) + d * h <= radius) {
        alive[j] = false;
        break;
      }
    }
  }
  std::vector<Vec> kept;
  for (std::size_t j = 0; j < net.centers.size(); ++j)
    if (alive[j]) kept.push_back(net.centers[j]);
  net.centers = std::move(kept);

  if (std::log(static_cast<double>(net.centers.size())) >
      log_volumetric_bound(d, q) + 1e-12)
    raise(ErrorCode::internal, "build_l1_net: volumetric bound exceeded");
  return net;
}

std::size_t assign_cell(const L1Net& net, const Vec& x) {
  double radius = net.radius() + 1e-12;
  for (std::size_t j = 0; j < net.centers.size(); ++j)
    if (l1_dist(x, net.centers[j]) <= radius) return j;
  raise(ErrorCode::internal, "assign_cell: point not covered");
}

double BivariateFn::derivative(const MultiIndex& s, const Vec& x,
                               const Vec& theta) const {
  if (s.order() == 0) return g(x, theta);
  if (partial_x) return partial_x(s, x, theta);
  auto f = [&](const Vec& y) { return g(y, theta); };
  return finite_diff_partial(f, x, s, 1e-4);
}

double PiecewisePoly::eval(const Vec& x) const {
  std::size_t cell = assign_cell(net, x);
  const Vec& z = net.centers[cell];
  double v = 0.0;
  for (std::size_t t = 0; t < index_set.size(); ++t)
    v += coeff[cell][t] * index_set[t].power(x, z);
  return v;
}

PiecewisePoly taylor_piecewise(const BivariateFn& g, const Vec& theta,
                               const L1Net& net, int l) {
  PiecewisePoly poly;
  poly.net = net;
  poly.l = l;
  poly.index_set = enumerate_multi_indices(net.d, l);
  poly.coeff.resize(net.centers.size());
  for (std::size_t c = 0; c < net.centers.size(); ++c) {
    const Vec& z = net.centers[c];
    poly.coeff[c].reserve(poly.index_set.size());
    for (const MultiIndex& s : poly.index_set)
      poly.coeff[c].push_back(g.derivative(s, z, theta) / s.factorial());
  }
  return poly;
}

double uniform_error_bound(double L2, int l, int q, double eta) {
  if (L2 <= 0 || q <= 0 || eta <= 0)
    raise(ErrorCode::invalid_argument, "uniform_error_bound: need positives");
  if (l != static_cast<int>(std::ceil(eta)) - 1)
    raise(ErrorCode::inconsistent_params,
          "uniform_error_bound: l must equal ceil(eta)-1");
  double lfac = 1.0;
  for (int i = 2; i <= l; ++i) lfac *= i;
  return L2 / (lfac * std::pow(static_cast<double>(q), eta));
}

LatentMatrix build_latent_matrix(const BivariateFn& g,
                                 const std::vector<Vec>& y_points,
                                 const std::vector<Vec>& theta_points) {
  LatentMatrix out;
  out.y_points = y_points;
  out.theta_points = theta_points;
  out.M = Matrix(y_points.size(), theta_points.size());
  for (std::size_t i = 0; i < y_points.size(); ++i)
    for (std::size_t j = 0; j < theta_points.size(); ++j)
      out.M(i, j) = g.g(y_points[i], theta_points[j]);
  return out;
}

Theorem1Result theorem1_check(const LatentMatrix& lm, std::size_t r,
                              double eta, double L2, int d) {
  int l = static_cast<int>(std::ceil(eta)) - 1;
  double threshold =
      std::exp(1.0) * std::sqrt(static_cast<double>(d)) *
      std::pow(2.0, d) * std::pow(static_cast<double>(l + d), d);
  if (static_cast<double>(r) < threshold)
    raise(ErrorCode::not_applicable, "theorem1_check: r below threshold");
  if (r > std::min(lm.M.rows, lm.M.cols))
    raise(ErrorCode::invalid_argument, "theorem1_check: r exceeds matrix size");

  Matrix Mr = rank_r_truncation(lm.M, r);
  double err2 = 0.0;
  for (std::size_t i = 0; i < lm.M.a.size(); ++i) {
    double dvi = lm.M.a[i] - Mr.a[i];
    err2 += dvi * dvi;
  }
  Theorem1Result res;
  res.lhs = err2 / (static_cast<double>(lm.M.rows) * lm.M.cols);
  double lfac = 1.0;
  for (int i = 2; i <= l; ++i) lfac *= i;
  res.rhs = L2 * L2 * std::exp(2.0 * eta / d) *
            std::pow(static_cast<double>(d), eta / d) *
            std::pow(4.0, eta) * std::pow(static_cast<double>(l + d), 2 * eta) /
            (lfac * lfac) * std::pow(1.0 / static_cast<double>(r), 2 * eta / d);
  res.pass = res.lhs <= res.rhs;
  return res;
}

namespace {

double sum_of(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

const double kPi = 3.14159265358979323846;

}  // namespace

std::vector<HolderFn> holder_suite(int d, double eta) {
  if (eta != 1.0 && eta != 2.0)
    raise(ErrorCode::invalid_argument, "holder_suite: eta must be 1 or 2");
  std::vector<HolderFn> suite;

  HolderFn constant;
  constant.name = "constant";
  constant.d = d;
  constant.eta = eta;
  constant.L2 = 0.05;
  constant.fn.g = [](const Vec&, const Vec& th) {
    return 0.25 + 0.1 * std::sin(sum_of(th));
  };
  constant.fn.partial_x = [](const MultiIndex&, const Vec&, const Vec&) {
    return 0.0;
  };
  suite.push_back(constant);

  HolderFn linear;
  linear.name = "linear";
  linear.d = d;
  linear.eta = eta;
  linear.L2 = 0.7;
  linear.fn.g = [](const Vec& x, const Vec& th) {
    double v = 0.1 * sum_of(th);
    for (std::size_t i = 0; i < x.size(); ++i) v += 0.7 / (i + 1.0) * x[i];
    return v;
  };
  linear.fn.partial_x = [](const MultiIndex& s, const Vec&, const Vec&) {
    if (s.order() != 1) return 0.0;
    for (std::size_t i = 0; i < s.s.size(); ++i)
      if (s.s[i] == 1) return 0.7 / (i + 1.0);
    return 0.0;
  };
  suite.push_back(linear);

  HolderFn sine;
  sine.name = "sine-sum";
  sine.d = d;
  sine.eta = eta;
  sine.L2 = eta == 1.0 ? kPi : kPi * kPi;
  sine.fn.g = [](const Vec& x, const Vec& th) {
    return std::sin(kPi * sum_of(x) + sum_of(th));
  };
  sine.fn.partial_x = [](const MultiIndex& s, const Vec& x, const Vec& th) {
    if (s.order() == 1) return kPi * std::cos(kPi * sum_of(x) + sum_of(th));
    raise(ErrorCode::unsupported, "sine-sum: partial order > 1");
  };
  suite.push_back(sine);

  HolderFn prod;
  prod.name = "sin-product";
  prod.d = d;
  prod.eta = eta;
  prod.L2 = eta == 1.0 ? kPi : kPi * kPi;
  prod.fn.g = [](const Vec& x, const Vec& th) {
    double v = 1.0;
    double shift = 0.2 * sum_of(th);
    for (double xi : x) v *= std::sin(kPi * xi + shift);
    return v;
  };
  prod.fn.partial_x = [](const MultiIndex& s, const Vec& x, const Vec& th) {
    if (s.order() != 1)
      raise(ErrorCode::unsupported, "sin-product: partial order > 1");
    double shift = 0.2 * sum_of(th);
    double v = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      v *= s.s[i] == 1 ? kPi * std::cos(kPi * x[i] + shift)
                       : std::sin(kPi * x[i] + shift);
    return v;
  };
  suite.push_back(prod);

  if (eta == 1.0) {
    HolderFn abscos;
    abscos.name = "abs-cos";
    abscos.d = d;
    abscos.eta = 1.0;
    abscos.L2 = kPi;
    abscos.fn.g = [](const Vec& x, const Vec& th) {
      return std::abs(std::cos(kPi * (sum_of(x) + sum_of(th))));
    };
    suite.push_back(abscos);
  }
  return suite;
}

std::vector<Vec> dense_grid(const L1Net& net) {
  std::vector<Vec> grid;
  int d = net.d;
  long long per_dim = static_cast<long long>(
      std::ceil(std::pow(1e4 * d, 1.0 / d)));
  per_dim = std::min<long long>(per_dim, 10001);
  std::vector<long long> idx(d, 0);
  for (;;) {
    Vec x(d);
    for (int i = 0; i < d; ++i)
      x[i] = per_dim == 1 ? 0.5
                          : static_cast<double>(idx[i]) / (per_dim - 1);
    grid.push_back(x);
    int i = 0;
    while (i < d && ++idx[i] == per_dim) idx[i++] = 0;
    if (i == d) break;
  }
  for (const Vec& z : net.centers) grid.push_back(z);
  // face midpoints around every center, clamped to the cube
  double h = 0.5 / std::ceil(net.q * d / 2.0);
  for (const Vec& z : net.centers)
    for (int i = 0; i < d; ++i)
      for (double sgn : {-1.0, 1.0}) {
        Vec x = z;
        x[i] = std::clamp(x[i] + sgn * h, 0.0, 1.0);
        grid.push_back(x);
      }
  return grid;
}

double sup_error(const PiecewisePoly& poly, const BivariateFn& g,
                 const Vec& theta, const std::vector<Vec>& grid) {
  double worst = 0.0;
  for (const Vec& x : grid)
    worst = std::max(worst, std::abs(poly.eval(x) - g.g(x, theta)));
  return worst;
}

}  // namespace fedlab
