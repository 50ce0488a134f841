#pragma once
#include <functional>
#include <string>
#include <vector>

#include "fedlab/numerics.hpp"
#include "fedlab/problem.hpp"

namespace fedlab {

struct L1Net {
  int d = 0;
  int q = 0;  // covering radius is 1/q
  std::vector<Vec> centers;

  double radius() const { return 1.0 / q; }
};

// Scaled lattice whose cells have l1-radius <= 1/q, then greedy removal
// of redundant centers; the count must respect d!(q+1)^d.
L1Net build_l1_net(int d, int q);

// Smallest center index (0-based) within l1-distance 1/q of x.
std::size_t assign_cell(const L1Net& net, const Vec& x);

// A bivariate map g(x; theta) with an analytic partial-derivative oracle
// in x.  theta is treated as an opaque fixed parameter vector.
struct BivariateFn {
  std::function<double(const Vec& x, const Vec& theta)> g;
  // partial in x of multi-index s; empty => central finite differences
  std::function<double(const MultiIndex& s, const Vec& x, const Vec& theta)>
      partial_x;

  double derivative(const MultiIndex& s, const Vec& x, const Vec& theta) const;
};

struct PiecewisePoly {
  L1Net net;
  int l = 0;
  std::vector<MultiIndex> index_set;       // |s| <= l, graded-lex
  std::vector<std::vector<double>> coeff;  // per cell, per index

  double eval(const Vec& x) const;
};

PiecewisePoly taylor_piecewise(const BivariateFn& g, const Vec& theta,
                               const L1Net& net, int l);

// L2 / (l! q^eta); requires l = ceil(eta) - 1.
double uniform_error_bound(double L2, int l, int q, double eta);

struct LatentMatrix {
  Matrix M;
  std::vector<Vec> y_points;
  std::vector<Vec> theta_points;
};

LatentMatrix build_latent_matrix(const BivariateFn& g,
                                 const std::vector<Vec>& y_points,
                                 const std::vector<Vec>& theta_points);

struct Theorem1Result {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// Low-rank tail bound check; throws not_applicable when r is below the
// admissibility threshold e sqrt(d) 2^d (l+d)^d.
Theorem1Result theorem1_check(const LatentMatrix& M, std::size_t r, double eta,
                              double L2, int d);

// Registered test functions with certified smoothness constants.
struct HolderFn {
  std::string name;
  int d = 1;
  double eta = 1.0;
  double L2 = 1.0;
  BivariateFn fn;
};

std::vector<HolderFn> holder_suite(int d, double eta);

// Deterministic dense evaluation grid: ~10^4 * d points plus the net's
// centers and cell-boundary midpoints.
std::vector<Vec> dense_grid(const L1Net& net);

double sup_error(const PiecewisePoly& poly, const BivariateFn& g,
                 const Vec& theta, const std::vector<Vec>& grid);

}  // namespace fedlab
