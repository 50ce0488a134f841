#pragma once
#include <cstddef>
#include <functional>
#include <vector>

#include "fedlab/errors.hpp"

namespace fedlab {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }

  static Matrix identity(std::size_t n);
  Matrix transposed() const;
  Matrix operator*(const Matrix& other) const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;
};

struct SvdResult {
  Matrix u;                    // rows x k
  std::vector<double> sigma;   // k descending
  Matrix v;                    // cols x k
};

// One-sided Jacobi; deterministic, tolerance on off-diagonal mass.
SvdResult svd(const Matrix& A, double tol = 1e-12);
std::vector<double> singular_values(const Matrix& A);
Matrix rank_r_truncation(const Matrix& A, std::size_t r);

struct InvertResult {
  Matrix inverse;
  double condition_estimate;  // sigma_max / sigma_min
};

// Gauss-Jordan with partial pivoting; throws singular_matrix when
// sigma_min < singular_tol * sigma_max.
InvertResult invert(const Matrix& A, double singular_tol = 1e-12);

struct MultiIndex {
  std::vector<int> s;

  int order() const;              // |s| = sum s_i
  double factorial() const;       // prod s_i!  (overflow-checked)
  // prod (x_i - z_i)^{s_i}
  double power(const std::vector<double>& x, const std::vector<double>& z) const;
};

// Graded-lexicographic: ascending total degree; within a degree,
// lexicographically descending on the leading coordinate.
std::vector<MultiIndex> enumerate_multi_indices(int d, int l);

unsigned long long binomial(unsigned long long n, unsigned long long k);

using ScalarField = std::function<double(const std::vector<double>&)>;

// Central differences, nested per coordinate; |s| <= 4.
double finite_diff_partial(const ScalarField& f, const std::vector<double>& x,
                           const MultiIndex& s, double h);

}  // namespace fedlab
