#pragma once

// Numerical checks of the projective-mapping properties: Q(x) symmetric PSD,
// null(Q(x)) equal to the span of the normal cone, and the quadratic bound
// dist(x + Q(x) d, X) <= rho ||d||^2.

#include "cdap/core.hpp"
#include "cdap/rng.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace cdap::testing {

struct Check {
  bool ok = true;
  std::string detail;
};

inline Matrix q_matrix(const ProjectiveSet& set, const Vector& x) {
  return set.apply_q_columns(x, Matrix::Identity(set.dim(), set.dim()));
}

inline Index numerical_rank(const Matrix& A, double rel = 1e-8) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) r += s(i) > rel * s(0);
  return r;
}

inline std::string show(const Vector& x) {
  std::ostringstream o;
  o.precision(6);
  o << '[';
  for (Index i = 0; i < x.size(); ++i) o << (i ? ", " : "") << x(i);
  o << ']';
  return o.str();
}

inline Check check_q_psd(const ProjectiveSet& set, const Vector& x) {
  const Matrix Q = q_matrix(set, x);
  const double scale = std::max(1.0, Q.norm());
  Check c;
  if ((Q - Q.transpose()).norm() > 1e-12 * scale) {
    c.ok = false;
    c.detail = "Q not symmetric at x = " + show(x);
    return c;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(0.5 * (Q + Q.transpose())), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0);
  if (lmin < -1e-10 * Q.norm()) {
    c.ok = false;
    c.detail = "Q has eigenvalue " + std::to_string(lmin) + " at x = " + show(x);
  }
  return c;
}

inline Check check_null_space(const ProjectiveSet& set, const Vector& x) {
  Check c;
  const auto gens = set.normal_generators(x);
  if (!gens) return c;
  const Matrix Q = q_matrix(set, x);
  for (const Vector& g : *gens) {
    const double r = (Q * g).norm() / std::max(1e-300, g.norm());
    if (r > 1e-10) {
      c.ok = false;
      c.detail = "||Q g|| = " + std::to_string(r) + " for a normal generator at x = " + show(x);
      return c;
    }
  }
  Matrix G(set.dim(), Index(gens->size()));
  for (std::size_t j = 0; j < gens->size(); ++j) G.col(Index(j)) = (*gens)[j];
  const Index span = numerical_rank(G);
  const Index rank_q = numerical_rank(Q);
  if (rank_q != set.dim() - span) {
    c.ok = false;
    c.detail = "rank Q = " + std::to_string(rank_q) + " but n - dim span N = " +
               std::to_string(set.dim() - span) + " at x = " + show(x);
  }
  return c;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]) / n, my += std::log(y[i]) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

/// dist(x + Q(x)(t d), X) <= rho t^2 for t in {1e-1, ..., 1e-4}, and the
/// log-log slope of the distances is at least `min_slope` whenever two or
/// more of them exceed 1e-13.
inline Check check_distance_bound(const ProjectiveSet& set, const Vector& x, Rng& rng,
                                  double min_slope = 1.9) {
  Check c;
  const Vector d = rng.normal_vector(set.dim()).normalized();
  std::vector<double> ts, dists;
  for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const Vector y = x + set.apply_q_unchecked(x, t * d);
    const double dist = set.distance(y);
    if (dist > set.rho_test * t * t) {
      c.ok = false;
      c.detail = "dist " + std::to_string(dist) + " > rho t^2 at t = " + std::to_string(t) + ", x = " + show(x);
      return c;
    }
    if (dist > 1e-13) {
      ts.push_back(t);
      dists.push_back(dist);
    }
  }
  if (ts.size() < 2) return c;
  const double slope = loglog_slope(ts, dists);
  if (slope < min_slope) {
    c.ok = false;
    c.detail = "distance slope " + std::to_string(slope) + " at x = " + show(x);
  }
  return c;
}

}  // namespace cdap::testing
