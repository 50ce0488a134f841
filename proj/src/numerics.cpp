#include "fedlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fedlab {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols != other.rows)
    raise(ErrorCode::invalid_argument, "matrix product shape mismatch");
  Matrix out(rows, other.cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) {
      double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < other.cols; ++j)
        out(i, j) += aik * other(k, j);
    }
  return out;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

bool Matrix::all_finite() const {
  return std::all_of(a.begin(), a.end(),
                     [](double v) { return std::isfinite(v); });
}

SvdResult svd(const Matrix& A, double tol) {
  if (!A.all_finite())
    raise(ErrorCode::invalid_argument, "svd: non-finite entries");
  bool transposed = A.rows < A.cols;
  Matrix B = transposed ? A.transposed() : A;  // rows >= cols
  std::size_t n = B.rows, k = B.cols;
  Matrix V = Matrix::identity(k);

  auto col_dot = [&](std::size_t p, std::size_t q) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += B(i, p) * B(i, q);
    return s;
  };

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        double app = col_dot(p, p);
        double aqq = col_dot(q, q);
        double apq = col_dot(p, q);
        if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0)
          continue;
        rotated = true;
        double zeta = (aqq - app) / (2.0 * apq);
        double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          double bp = B(i, p), bq = B(i, q);
          B(i, p) = c * bp - s * bq;
          B(i, q) = s * bp + c * bq;
        }
        for (std::size_t i = 0; i < k; ++i) {
          double vp = V(i, p), vq = V(i, q);
          V(i, p) = c * vp - s * vq;
          V(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sig(k, 0.0);
  Matrix U(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += B(i, j) * B(i, j);
    norm = std::sqrt(norm);
    sig[j] = norm;
    if (norm > 0.0)
      for (std::size_t i = 0; i < n; ++i) U(i, j) = B(i, j) / norm;
  }

  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  SvdResult out;
  out.sigma.resize(k);
  out.u = Matrix(n, k);
  out.v = Matrix(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    out.sigma[j] = sig[perm[j]];
    for (std::size_t i = 0; i < n; ++i) out.u(i, j) = U(i, perm[j]);
    for (std::size_t i = 0; i < k; ++i) out.v(i, j) = V(i, perm[j]);
  }
  if (transposed) std::swap(out.u, out.v);
  return out;
}

std::vector<double> singular_values(const Matrix& A) { return svd(A).sigma; }

Matrix rank_r_truncation(const Matrix& A, std::size_t r) {
  std::size_t kmin = std::min(A.rows, A.cols);
  if (r < 1 || r > kmin)
    raise(ErrorCode::invalid_argument, "rank_r_truncation: r out of range");
  SvdResult s = svd(A);
  Matrix out(A.rows, A.cols);
  for (std::size_t t = 0; t < r; ++t) {
    double sg = s.sigma[t];
    if (sg == 0.0) break;
    for (std::size_t i = 0; i < A.rows; ++i) {
      double ui = s.u(i, t) * sg;
      if (ui == 0.0) continue;
      for (std::size_t j = 0; j < A.cols; ++j) out(i, j) += ui * s.v(j, t);
    }
  }
  return out;
}

InvertResult invert(const Matrix& A, double singular_tol) {
  if (A.rows != A.cols) raise(ErrorCode::invalid_argument, "invert: not square");
  std::size_t n = A.rows;
  std::vector<double> sig = singular_values(A);
  double smax = sig.front(), smin = sig.back();
  if (smax == 0.0 || smin < singular_tol * smax)
    raise(ErrorCode::singular_matrix,
          "invert: matrix numerically singular (sigma_min/sigma_max too small)");

  Matrix work = A;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(work(i, col)) > std::abs(work(piv, col))) piv = i;
    if (work(piv, col) == 0.0)
      raise(ErrorCode::singular_matrix, "invert: zero pivot");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(piv, j), work(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    double d = work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      double f = work(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(i, j) -= f * work(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return {std::move(inv), smax / smin};
}

int MultiIndex::order() const {
  int t = 0;
  for (int v : s) t += v;
  return t;
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int v : s)
    for (int i = 2; i <= v; ++i) {
      f *= i;
      if (!std::isfinite(f))
        raise(ErrorCode::too_large, "multi-index factorial overflow");
    }
  return f;
}

double MultiIndex::power(const std::vector<double>& x,
                         const std::vector<double>& z) const {
  double p = 1.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int t = 0; t < s[i]; ++t) p *= x[i] - z[i];
  return p;
}

namespace {
void compositions(int d, int remaining, std::vector<int>& cur,
                  std::vector<MultiIndex>& out) {
  if (d == 1) {
    cur.push_back(remaining);
    out.push_back(MultiIndex{cur});
    cur.pop_back();
    return;
  }
  for (int first = remaining; first >= 0; --first) {
    cur.push_back(first);
    compositions(d - 1, remaining - first, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int d, int l) {
  if (d < 1 || l < 0)
    raise(ErrorCode::invalid_argument, "enumerate_multi_indices: bad d or l");
  std::vector<MultiIndex> out;
  std::vector<int> cur;
  for (int deg = 0; deg <= l; ++deg) compositions(d, deg, cur, out);
  return out;
}

unsigned long long binomial(unsigned long long n, unsigned long long k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (unsigned long long i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact: each prefix is itself a binomial
    if (r > static_cast<unsigned __int128>(~0ull))
      raise(ErrorCode::too_large, "binomial overflow");
  }
  return static_cast<unsigned long long>(r);
}

double finite_diff_partial(const ScalarField& f, const std::vector<double>& x,
                           const MultiIndex& s, double h) {
  if (s.order() > 4)
    raise(ErrorCode::unsupported, "finite_diff_partial: |s| > 4");
  if (s.order() == 0) return f(x);
  std::size_t i = 0;
  while (s.s[i] == 0) ++i;
  MultiIndex lower = s;
  lower.s[i] -= 1;
  std::vector<double> xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (finite_diff_partial(f, xp, lower, h) -
          finite_diff_partial(f, xm, lower, h)) /
         (2.0 * h);
}

}  // namespace fedlab
