#pragma once

// Euclidean projections onto the catalog sets, written as free functions over
// Eigen expressions. Matrix kernels take and return dense matrices; the set
// classes in sets.hpp handle flattening.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cdap {

template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// (M + M^T) / 2
template <class Derived>
MatrixX<typename Derived::Scalar> symmetrize(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.transpose()) / typename Derived::Scalar(2);
}

template <class Derived, class DerivedL, class DerivedU>
VectorX<typename Derived::Scalar> project_box(const Eigen::MatrixBase<Derived>& z,
                                              const Eigen::MatrixBase<DerivedL>& lower,
                                              const Eigen::MatrixBase<DerivedU>& upper) {
  return z.cwiseMax(lower).cwiseMin(upper);
}

template <class Derived>
VectorX<typename Derived::Scalar> project_orthant(const Eigen::MatrixBase<Derived>& z) {
  return z.cwiseMax(typename Derived::Scalar(0));
}

template <class Derived>
VectorX<typename Derived::Scalar> project_l2_ball(const Eigen::MatrixBase<Derived>& z,
                                                  typename Derived::Scalar radius) {
  const auto nrm = z.norm();
  if (nrm <= radius) return z;
  return z * (radius / nrm);
}

/// Threshold theta with sum_i max(v_i - theta, 0) = radius, for v >= 0 sorted
/// internally. Sort-and-threshold, O(n log n).
template <class Derived>
typename Derived::Scalar simplex_threshold(const Eigen::MatrixBase<Derived>& v,
                                           typename Derived::Scalar radius) {
  using Scalar = typename Derived::Scalar;
  std::vector<Scalar> sorted(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) sorted[static_cast<std::size_t>(i)] = v(i);
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());
  Scalar cumsum = 0;
  Scalar theta = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const Scalar t = (cumsum - radius) / Scalar(k + 1);
    if (sorted[k] - t > Scalar(0)) theta = t;
  }
  return theta;
}

template <class Derived>
VectorX<typename Derived::Scalar> project_simplex(const Eigen::MatrixBase<Derived>& z,
                                                  typename Derived::Scalar radius = 1) {
  VectorX<typename Derived::Scalar> v = z;
  const auto theta = simplex_threshold(v, radius);
  return (v.array() - theta).cwiseMax(typename Derived::Scalar(0)).matrix();
}

template <class Derived>
VectorX<typename Derived::Scalar> project_l1_ball(const Eigen::MatrixBase<Derived>& z,
                                                  typename Derived::Scalar radius = 1) {
  using Scalar = typename Derived::Scalar;
  if (z.template lpNorm<1>() <= radius) return z;
  VectorX<Scalar> mag = z.cwiseAbs();
  const Scalar theta = simplex_threshold(mag, radius);
  VectorX<Scalar> out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const Scalar s = std::max(mag(i) - theta, Scalar(0));
    out(i) = z(i) < 0 ? -s : s;
  }
  return out;
}

/// Keep the `count` entries of largest magnitude; ties go to the lower index.
template <class Derived>
VectorX<typename Derived::Scalar> project_l0_ball(const Eigen::MatrixBase<Derived>& z,
                                                  Eigen::Index count) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = z.size();
  if (count >= n) return z;
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(z(a)) > std::abs(z(b));
  });
  VectorX<Scalar> out = VectorX<Scalar>::Zero(n);
  for (Eigen::Index k = 0; k < count; ++k) out(order[k]) = z(order[k]);
  return out;
}

/// sum_i |x_i|^q
template <class Derived>
typename Derived::Scalar lq_power(const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar q) {
  using Scalar = typename Derived::Scalar;
  Scalar s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar a = std::abs(x(i));
    if (a > Scalar(0)) s += std::pow(a, q);
  }
  return s;
}

/// Eigenvalue map of a symmetric matrix: V f(Lambda) V^T, with the input
/// symmetrized first. `f` receives the eigenvalues in ascending order.
template <class Derived, class Fn>
MatrixX<typename Derived::Scalar> spectral_map(const Eigen::MatrixBase<Derived>& m, Fn&& f) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(symmetrize(m));
  VectorX<Scalar> lambda = eig.eigenvalues();
  f(lambda);
  const auto& V = eig.eigenvectors();
  return V * lambda.asDiagonal() * V.transpose();
}

template <class Derived>
MatrixX<typename Derived::Scalar> project_psd(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return spectral_map(m, [](VectorX<Scalar>& lambda) { lambda = lambda.cwiseMax(Scalar(0)); });
}

/// {0 <= X <= I}: clamp eigenvalues to [0, 1].
template <class Derived>
MatrixX<typename Derived::Scalar> project_psd_spectral(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return spectral_map(m, [](VectorX<Scalar>& lambda) {
    lambda = lambda.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
  });
}

namespace detail {

// Zero all but the `keep` largest scores; stable order breaks ties by index.
template <class Scalar>
void keep_largest(VectorX<Scalar>& values, const VectorX<Scalar>& score, Eigen::Index keep) {
  std::vector<Eigen::Index> order(values.size());
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return score(a) > score(b); });
  for (std::size_t k = static_cast<std::size_t>(keep); k < order.size(); ++k) values(order[k]) = 0;
}

}  // namespace detail

/// Symmetric matrices of rank <= r: keep the r eigenvalues of largest magnitude.
template <class Derived>
MatrixX<typename Derived::Scalar> project_sym_low_rank(const Eigen::MatrixBase<Derived>& m,
                                                       Eigen::Index rank) {
  using Scalar = typename Derived::Scalar;
  return spectral_map(m, [rank](VectorX<Scalar>& lambda) {
    const VectorX<Scalar> score = lambda.cwiseAbs();
    detail::keep_largest(lambda, score, rank);
  });
}

/// PSD matrices of rank <= r: clamp negatives, then keep the r largest.
template <class Derived>
MatrixX<typename Derived::Scalar> project_low_rank_psd(const Eigen::MatrixBase<Derived>& m,
                                                       Eigen::Index rank) {
  using Scalar = typename Derived::Scalar;
  return spectral_map(m, [rank](VectorX<Scalar>& lambda) {
    lambda = lambda.cwiseMax(Scalar(0));
    const VectorX<Scalar> score = lambda;
    detail::keep_largest(lambda, score, rank);
  });
}

/// Best rank-r approximation (Eckart-Young). Singular values come out in
/// decreasing order, so ties at the cut keep the first r.
template <class Derived>
MatrixX<typename Derived::Scalar> project_low_rank(const Eigen::MatrixBase<Derived>& m,
                                                   Eigen::Index rank) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = std::min(m.rows(), m.cols());
  if (rank >= k) return m;
  Eigen::BDCSVD<MatrixX<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU().leftCols(rank) *
         svd.singularValues().head(rank).asDiagonal() *
         svd.matrixV().leftCols(rank).transpose();
}

/// {||X||_2 <= 1}: clamp singular values at one.
template <class Derived>
MatrixX<typename Derived::Scalar> project_spectral_ball(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::BDCSVD<MatrixX<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorX<Scalar> s = svd.singularValues().cwiseMin(Scalar(1));
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace cdap
