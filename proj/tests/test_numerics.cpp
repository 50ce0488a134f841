#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fedlab/numerics.hpp"
#include "fedlab/rng.hpp"

using namespace fedlab;

namespace {
Matrix from(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}
}  // namespace

TEST_CASE("singular values of simple matrices") {
  auto s1 = singular_values(from({{3, 0}, {0, 1}}));
  CHECK(s1[0] == doctest::Approx(3.0));
  CHECK(s1[1] == doctest::Approx(1.0));

  auto s2 = singular_values(from({{0, 1}, {1, 0}}));
  CHECK(s2[0] == doctest::Approx(1.0));
  CHECK(s2[1] == doctest::Approx(1.0));

  // rank-1: spectrum {2, 0}, sigma1 = Frobenius norm
  auto s3 = singular_values(from({{1, 1}, {1, 1}}));
  CHECK(s3[0] == doctest::Approx(2.0));
  CHECK(s3[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("singular value energy identity on random 5x5") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix A(5, 5);
    for (double& v : A.a) v = rng.gaussian();
    auto sig = singular_values(A);
    double energy = 0.0;
    for (double s : sig) energy += s * s;
    double fro = A.frobenius_norm();
    CHECK(energy == doctest::Approx(fro * fro).epsilon(1e-9));
    for (std::size_t i = 1; i < sig.size(); ++i) CHECK(sig[i - 1] >= sig[i]);
  }
}

TEST_CASE("svd reconstructs the matrix") {
  Rng rng(77);
  Matrix A(6, 4);
  for (double& v : A.a) v = rng.gaussian();
  SvdResult s = svd(A);
  Matrix rec(A.rows, A.cols);
  for (std::size_t t = 0; t < s.sigma.size(); ++t)
    for (std::size_t i = 0; i < A.rows; ++i)
      for (std::size_t j = 0; j < A.cols; ++j)
        rec(i, j) += s.u(i, t) * s.sigma[t] * s.v(j, t);
  for (std::size_t i = 0; i < A.a.size(); ++i)
    CHECK(rec.a[i] == doctest::Approx(A.a[i]).epsilon(1e-9));
}

TEST_CASE("rank truncation basics") {
  Matrix d31 = from({{3, 0}, {0, 1}});
  Matrix t1 = rank_r_truncation(d31, 1);
  CHECK(t1(0, 0) == doctest::Approx(3.0));
  CHECK(t1(1, 1) == doctest::Approx(0.0).epsilon(1e-12));

  // full rank keeps everything
  Rng rng(5);
  Matrix A(4, 4);
  for (double& v : A.a) v = rng.gaussian();
  Matrix full = rank_r_truncation(A, 4);
  for (std::size_t i = 0; i < A.a.size(); ++i)
    CHECK(full.a[i] == doctest::Approx(A.a[i]).epsilon(1e-10));

  // already rank 1
  Matrix ones = from({{1, 1}, {1, 1}});
  Matrix t2 = rank_r_truncation(ones, 1);
  for (double v : t2.a) CHECK(v == doctest::Approx(1.0));

  CHECK_THROWS_AS(rank_r_truncation(ones, 0), Error);
  CHECK_THROWS_AS(rank_r_truncation(ones, 3), Error);
}

TEST_CASE("truncation error non-increasing in r and beats random competitors") {
  Rng rng(11);
  Matrix A(6, 6);
  for (double& v : A.a) v = rng.gaussian();
  double prev = 1e300;
  for (std::size_t r = 1; r <= 6; ++r) {
    Matrix Mr = rank_r_truncation(A, r);
    double err = 0.0;
    for (std::size_t i = 0; i < A.a.size(); ++i)
      err += (A.a[i] - Mr.a[i]) * (A.a[i] - Mr.a[i]);
    CHECK(err <= prev + 1e-12);
    prev = err;

    // random rank-r competitor B = X Y
    for (int trial = 0; trial < 5; ++trial) {
      Matrix X(6, r), Y(r, 6);
      for (double& v : X.a) v = rng.gaussian();
      for (double& v : Y.a) v = rng.gaussian();
      Matrix B = X * Y;
      double comp = 0.0;
      for (std::size_t i = 0; i < A.a.size(); ++i)
        comp += (A.a[i] - B.a[i]) * (A.a[i] - B.a[i]);
      CHECK(err <= comp + 1e-9);
    }
  }
}

TEST_CASE("inversion") {
  auto [inv_id, cond_id] = invert(Matrix::identity(3));
  CHECK(cond_id == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(inv_id(i, i) == doctest::Approx(1.0));

  auto [inv_d, cond_d] = invert(from({{2, 0}, {0, 4}}));
  CHECK(inv_d(0, 0) == doctest::Approx(0.5));
  CHECK(inv_d(1, 1) == doctest::Approx(0.25));
  CHECK(cond_d == doctest::Approx(2.0));

  CHECK_THROWS_AS(invert(from({{1, 1}, {1, 1}})), Error);
  try {
    invert(from({{1, 1}, {1, 1}}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_matrix);
  }
}

TEST_CASE("invert round trip and residual bound") {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix A(4, 4);
    for (double& v : A.a) v = rng.gaussian();
    auto [inv, cond] = invert(A);
    if (cond >= 1e6) continue;
    Matrix prod = A * inv;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-8 * cond);
    auto [back, cond2] = invert(inv);
    for (std::size_t i = 0; i < A.a.size(); ++i)
      CHECK(back.a[i] ==
            doctest::Approx(A.a[i]).epsilon(1e-7));
  }
}

TEST_CASE("multi-index enumeration is graded-lex with binomial count") {
  auto idx = enumerate_multi_indices(2, 1);
  REQUIRE(idx.size() == 3);
  CHECK(idx[0].s == std::vector<int>{0, 0});
  CHECK(idx[1].s == std::vector<int>{1, 0});
  CHECK(idx[2].s == std::vector<int>{0, 1});

  CHECK(enumerate_multi_indices(1, 3).size() == 4);
  CHECK(enumerate_multi_indices(3, 2).size() == 10);

  for (int d = 1; d <= 6; ++d)
    for (int l = 0; l <= 5; ++l)
      CHECK(enumerate_multi_indices(d, l).size() == binomial(l + d, d));

  // no duplicates, all |s| <= l
  auto big = enumerate_multi_indices(4, 3);
  for (std::size_t i = 0; i < big.size(); ++i) {
    CHECK(big[i].order() <= 3);
    for (std::size_t j = i + 1; j < big.size(); ++j)
      CHECK(big[i].s != big[j].s);
  }
}

TEST_CASE("finite differences") {
  ScalarField sq = [](const std::vector<double>& x) { return x[0] * x[0]; };
  CHECK(finite_diff_partial(sq, {0.5}, MultiIndex{{2}}, 1e-3) ==
        doctest::Approx(2.0).epsilon(1e-5));

  ScalarField c = [](const std::vector<double>&) { return 4.2; };
  CHECK(finite_diff_partial(c, {0.1, 0.2}, MultiIndex{{1, 1}}, 1e-3) ==
        doctest::Approx(0.0).epsilon(1e-9));

  ScalarField xy = [](const std::vector<double>& x) { return x[0] * x[1]; };
  CHECK(finite_diff_partial(xy, {0.3, 0.7}, MultiIndex{{1, 1}}, 1e-3) ==
        doctest::Approx(1.0).epsilon(1e-5));

  CHECK_THROWS_AS(finite_diff_partial(sq, {0.5}, MultiIndex{{5}}, 1e-3), Error);
}

TEST_CASE("counter rng reproducibility and stream isolation") {
  Rng a(42, 1), b(42, 1), c(42, 2);
  for (int i = 0; i < 100; ++i) {
    uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
  }
  Rng u(7);
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    mean += v;
  }
  CHECK(mean / 10000 == doctest::Approx(0.5).epsilon(0.02));
}
