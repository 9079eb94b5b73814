#pragma once

#include "cdap/solver.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace cdap {

struct ProblemMeta {
  std::string family;
  std::vector<std::pair<std::string, double>> dims;  // in declaration order
  std::uint64_t seed = 0;
  std::string rng;
};

struct ProblemInstance {
  ConstraintSystem cs;
  std::shared_ptr<const ProjectiveSet> set;
  Vector x0;
  Vector x_ref;
  ProblemMeta meta;
  AffineProjector affine_projector;  // empty when Pi_M has no closed form
};

/// Sparse correlation matrix completion: X PSD, diag(X) = 1 and X_ij = 0 on
/// the zero pattern of a random sparse Gram matrix.
ProblemInstance gen_correlation(Index n, double density, std::uint64_t seed);

/// <H_i, X> = b_i over n x m matrices of rank at most r.
ProblemInstance gen_lowrank_affine(Index n, Index m, Index p, Index r, std::uint64_t seed);

/// x^T H_i x = b_i over the nonnegative orthant.
ProblemInstance gen_qp_orthant(Index n, Index p, std::uint64_t seed);

/// H^T x = b over the l_q ball.
ProblemInstance gen_lq_affine(Index n, Index p, double q, std::uint64_t seed);

/// x1 + x2 = 1 over R^2_+, started at (2, 0).
ProblemInstance gen_toy_orthant_affine();

}  // namespace cdap
