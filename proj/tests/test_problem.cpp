#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fedlab/problem.hpp"

using namespace fedlab;

namespace {

double naive_risk(const LossModel& model, const Dataset& data,
                  const Vec& theta) {
  double sum = 0.0;
  for (const auto& x : data.server) sum += model.eval(x, theta);
  for (const auto& block : data.clients)
    for (const auto& x : block) sum += model.eval(x, theta);
  return sum / static_cast<double>(data.n());
}

Vec fd_gradient(const LossModel& model, const Vec& x, const Vec& theta,
                double h = 1e-6) {
  Vec g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    Vec hi = theta, lo = theta;
    hi[i] += h;
    lo[i] -= h;
    g[i] = (model.eval(x, hi) - model.eval(x, lo)) / (2 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("dataset generation shape, range, determinism") {
  Dataset ds = generate_dataset(3, 5, 4, 7, 42);
  CHECK(ds.d == 3);
  CHECK(ds.r() == 7);
  CHECK(ds.m() == 5);
  CHECK(ds.s() == 4);
  CHECK(ds.n() == 7 + 20);
  ds.validate();
  for (const auto& x : ds.server) {
    REQUIRE(x.size() == 3);
    for (double v : x) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  Dataset again = generate_dataset(3, 5, 4, 7, 42);
  CHECK(again.server == ds.server);
  CHECK(again.clients == ds.clients);
  Dataset other = generate_dataset(3, 5, 4, 7, 43);
  CHECK(other.server != ds.server);
}

TEST_CASE("dataset csv/json round trip") {
  Dataset ds = generate_dataset(2, 3, 2, 4, 7);
  std::string csv = "/tmp/fedlab_test_ds.csv";
  std::string json = "/tmp/fedlab_test_ds.json";
  save_dataset_csv(ds, csv);
  save_dataset_header(ds, 7, json);
  Dataset back = load_dataset(csv, json);
  CHECK(back.d == ds.d);
  REQUIRE(back.r() == ds.r());
  REQUIRE(back.m() == ds.m());
  REQUIRE(back.s() == ds.s());
  for (std::size_t j = 0; j < ds.r(); ++j)
    for (int i = 0; i < ds.d; ++i)
      CHECK(back.server[j][i] == doctest::Approx(ds.server[j][i]).epsilon(1e-15));
  for (std::size_t c = 0; c < ds.m(); ++c)
    for (std::size_t j = 0; j < ds.s(); ++j)
      for (int i = 0; i < ds.d; ++i)
        CHECK(back.clients[c][j][i] ==
              doctest::Approx(ds.clients[c][j][i]).epsilon(1e-15));
}

TEST_CASE("empirical risk equals the flat average") {
  Dataset ds = generate_dataset(3, 6, 5, 4, 11);
  SoftLabelLogistic model(3, 0.5);
  Vec theta = {0.3, -0.7};
  CHECK(empirical_risk(model, ds, theta) ==
        doctest::Approx(naive_risk(model, ds, theta)).epsilon(1e-12));

  SeparableModel sep(2, 3, 2, 5);
  CHECK(empirical_risk(sep, ds, theta) ==
        doctest::Approx(naive_risk(sep, ds, theta)).epsilon(1e-12));
}

TEST_CASE("logistic loss closed-form values") {
  // At theta = 0 every point costs log 2 (no penalty).
  SoftLabelLogistic model(3, 0.5);
  Vec x = {0.2, 0.9, 0.35};
  CHECK(model.eval(x, {0.0, 0.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  // z = 1, theta.y = 1, mu = 0.1, ||theta||^2 = 1:
  // f = log(1 + e^{-1}) + 0.05.
  SoftLabelLogistic small(2, 0.1);
  CHECK(small.eval({1.0, 1.0}, {1.0}) ==
        doctest::Approx(std::log(1.0 + std::exp(-1.0)) + 0.05).epsilon(1e-14));

  // Gradient at the origin is (1/2 - z) * y.
  Vec g = model.grad(x, {0.0, 0.0});
  CHECK(g[0] == doctest::Approx((0.5 - 0.35) * 0.2).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx((0.5 - 0.35) * 0.9).epsilon(1e-14));
}

TEST_CASE("analytic gradients match finite differences") {
  Rng rng(99, 1);
  SoftLabelLogistic logistic(4, 0.3);
  SeparableModel sep(3, 2, 4, 17);
  for (int trial = 0; trial < 20; ++trial) {
    Vec xl(4), th3(3), xs(2), th4(4);
    for (auto* v : {&xl}) for (double& e : *v) e = rng.uniform();
    for (double& e : th3) e = rng.uniform(-1.5, 1.5);
    for (double& e : xs) e = rng.uniform();
    for (double& e : th4) e = rng.uniform(-1.5, 1.5);
    Vec ga = logistic.grad(xl, th3), gf = fd_gradient(logistic, xl, th3);
    for (int i = 0; i < 3; ++i) CHECK(ga[i] == doctest::Approx(gf[i]).epsilon(1e-5));
    Vec sa = sep.grad(xs, th4), sf = fd_gradient(sep, xs, th4);
    for (int i = 0; i < 4; ++i) CHECK(sa[i] == doctest::Approx(sf[i]).epsilon(1e-5));
  }
}

TEST_CASE("losses are convex along random segments") {
  Rng rng(5, 2);
  SoftLabelLogistic model(3, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    Vec x = {rng.uniform(), rng.uniform(), rng.uniform()};
    Vec a = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Vec b = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    double lam = rng.uniform();
    Vec mid = {lam * a[0] + (1 - lam) * b[0], lam * a[1] + (1 - lam) * b[1]};
    CHECK(model.eval(x, mid) <=
          lam * model.eval(x, a) + (1 - lam) * model.eval(x, b) + 1e-12);
  }
}

TEST_CASE("declared logistic constants") {
  ModelConstants c = logistic_constants(785, 0.1);
  CHECK(c.L1 == doctest::Approx(392.1).epsilon(1e-12));
  CHECK(c.mu == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(c.eta == doctest::Approx(2.0));
  CHECK(c.L2 == doctest::Approx(1.0));
  SoftLabelLogistic model(785, 0.1);
  CHECK(model.constants().L1 == doctest::Approx(392.1).epsilon(1e-12));
}

TEST_CASE("smoothness and convexity checkers accept honest constants") {
  SoftLabelLogistic model(3, 0.5);
  Rng rng(123, 3);
  double slope = check_smoothness_in_theta(model, 200, rng);
  CHECK(slope <= model.constants().L1 + 1e-9);
  Rng rng2(124, 3);
  double curv = check_strong_convexity(model, 200, rng2);
  CHECK(curv >= model.constants().mu - 1e-9);

  SeparableModel sep(2, 2, 3, 9);
  Rng rng3(125, 3);
  CHECK_NOTHROW(check_smoothness_in_theta(sep, 200, rng3));
  Rng rng4(126, 3);
  CHECK_NOTHROW(check_strong_convexity(sep, 200, rng4));
}

namespace {
// honest logistic dynamics with deliberately misdeclared constants
class Misdeclared : public SoftLabelLogistic {
 public:
  Misdeclared(double L1, double mu) : SoftLabelLogistic(3, 0.5) {
    constants_.L1 = L1;
    constants_.mu = mu;
  }
};
}  // namespace

TEST_CASE("checkers reject misdeclared constants") {
  Misdeclared bad_smooth(1e-6, 0.5);  // true L1 = 1.5
  Rng rng(7, 4);
  CHECK_THROWS_AS(check_smoothness_in_theta(bad_smooth, 200, rng), Error);
  try {
    Rng r2(7, 4);
    check_smoothness_in_theta(bad_smooth, 200, r2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::assumption_violation);
  }

  Misdeclared bad_convex(1.5, 100.0);  // true mu = 0.5
  Rng rng2(8, 4);
  CHECK_THROWS_AS(check_strong_convexity(bad_convex, 200, rng2), Error);
}

TEST_CASE("epsilon-approximate boundary semantics") {
  CHECK(is_epsilon_approximate(1.001, 1.0, 1e-3));
  CHECK_FALSE(is_epsilon_approximate(1.0011, 1.0, 1e-3));
  CHECK(is_epsilon_approximate(1.0, 1.0, 1e-12));
  CHECK_THROWS_AS(is_epsilon_approximate(1.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(is_epsilon_approximate(1.0, 1.0, -1.0), Error);
}

TEST_CASE("quadratic model ignores the data point") {
  QuadraticModel model(2, 3);
  Vec theta = {3.0, -4.0};
  CHECK(model.eval({0.1, 0.2, 0.3}, theta) == doctest::Approx(12.5));
  CHECK(model.eval({0.9, 0.9, 0.9}, theta) == doctest::Approx(12.5));
  Vec g = model.grad({0.5, 0.5, 0.5}, theta);
  CHECK(g[0] == doctest::Approx(3.0));
  CHECK(g[1] == doctest::Approx(-4.0));
}

TEST_CASE("separable model declares its latent rank") {
  for (int r0 = 1; r0 <= 3; ++r0) {
    SeparableModel sep(r0, 2, 3, 100 + r0);
    CHECK(sep.rank() == r0);
    CHECK(sep.constants().has_mu());
    CHECK(sep.constants().mu > 0.4);  // curvature budget keeps mu near 1/2
    CHECK(sep.constants().has_L1());
  }
}
