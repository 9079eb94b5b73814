#pragma once

#include "cdap/core.hpp"

#include <memory>
#include <string>

namespace cdap {

enum class SetKind {
  Box,
  Orthant,
  L2Ball,
  L1Ball,
  Simplex,
  L0Ball,
  LqBall,
  SpectralBall,
  PsdCone,
  PsdSpectral,
  LowRankVariety,
  SymLowRank,
  LowRankPsd,
};

const char* to_string(SetKind kind);
SetKind set_kind_from_string(const std::string& name);

/// Catalog entry: a kind plus its parameters. Unused fields are ignored.
struct SetSpec {
  SetKind kind = SetKind::Orthant;
  Index n = 0;         // vector kinds: ambient dimension
  Index rows = 0;      // matrix kinds: m
  Index cols = 0;      // matrix kinds: q (or s); equals rows for square kinds
  Index rank = 0;      // low-rank kinds: r
  Index count = 0;     // L0Ball: u
  double radius = 1;   // L2Ball: u
  double q = 0.5;      // LqBall exponent
  Vector lower;        // Box
  Vector upper;        // Box
  double rho_test = 10.0;

  /// Throws ErrorCode::Configuration on invalid parameters.
  void validate() const;
};

std::shared_ptr<const ProjectiveSet> make_set(const SetSpec& spec);

// ---------------------------------------------------------------------------
// Vector sets

class BoxSet final : public ProjectiveSet {
 public:
  BoxSet(Vector lower, Vector upper);
  Index dim() const override { return lower_.size(); }
  std::string name() const override { return "Box"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;

  /// q_i(s) = (s - l_i)(u_i - s), clamped at zero outside [l_i, u_i].
  Vector weights(const Vector& x) const;

 private:
  Vector lower_, upper_;
};

class OrthantSet final : public ProjectiveSet {
 public:
  explicit OrthantSet(Index n) : n_(n) {}
  Index dim() const override { return n_; }
  std::string name() const override { return "Orthant"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;

 private:
  Index n_;
};

class L2BallSet final : public ProjectiveSet {
 public:
  L2BallSet(Index n, double radius) : n_(n), radius_(radius) {}
  Index dim() const override { return n_; }
  std::string name() const override { return "L2Ball"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;

 private:
  Index n_;
  double radius_;
};

class L1BallSet final : public ProjectiveSet {
 public:
  explicit L1BallSet(Index n) : n_(n) {}
  Index dim() const override { return n_; }
  std::string name() const override { return "L1Ball"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;

 private:
  Index n_;
};

class SimplexSet final : public ProjectiveSet {
 public:
  explicit SimplexSet(Index n) : n_(n) {}
  Index dim() const override { return n_; }
  std::string name() const override { return "Simplex"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;

 private:
  Index n_;
};

/// {||x||_0 <= u} with Q(x) = Diag(x^2). No normal-cone oracle.
class L0BallSet final : public ProjectiveSet {
 public:
  L0BallSet(Index n, Index count) : n_(n), count_(count) {}
  Index dim() const override { return n_; }
  std::string name() const override { return "L0Ball"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;

 private:
  Index n_;
  Index count_;
};

/// Outcome of the reweighted l_q-ball projection.
struct LqProjectionResult {
  Vector point;
  double error = 0.0;  // last fixed-point step length
  int iterations = 0;
  bool converged = true;
};

/// Projection onto {||x||_q^q <= 1}, 0 < q <= 1, by a damped reweighted
/// l1 fixed point. Each sweep soft-thresholds z with weights
/// q (|y_i| + eps_t)^(q-1), choosing the threshold by bisection so that the
/// image lands on the boundary. Stops once the sweep moves less than `tol`
/// with eps_t at its floor.
LqProjectionResult project_lq_ball(const Vector& z, double q, double tol, int max_iters = 200);

class LqBallSet final : public ProjectiveSet {
 public:
  LqBallSet(Index n, double q) : n_(n), q_(q) {}
  Index dim() const override { return n_; }
  std::string name() const override { return "LqBall"; }
  double q() const { return q_; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;
  double distance(const Vector& y) const override;
  bool exact_projection() const override { return false; }

 private:
  Index n_;
  double q_;
};

// ---------------------------------------------------------------------------
// Matrix sets (row-major flattening)

/// Base for sets of m x q matrices.
class MatrixSet : public ProjectiveSet {
 public:
  MatrixSet(Index rows, Index cols) : rows_(rows), cols_(cols) {}
  Index dim() const override { return rows_ * cols_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  Matrix unflatten(const Vector& x) const;
  Vector flatten(const Matrix& m) const;

 protected:
  Index rows_, cols_;
};

/// {X in R^{m x s} : ||X||_2 <= 1}; Q(X)[Y] = Y - X Sym(X^T Y).
class SpectralBallSet final : public MatrixSet {
 public:
  SpectralBallSet(Index rows, Index cols) : MatrixSet(rows, cols) {}
  std::string name() const override { return "SpectralBall"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;
};

/// Shared machinery for subsets of the symmetric matrices. The ambient space
/// is all of R^{s x s}, so every skew-symmetric direction is normal; Q(X)
/// acts on Sym(Y) only.
class SymmetricMatrixSet : public MatrixSet {
 public:
  explicit SymmetricMatrixSet(Index s) : MatrixSet(s, s) {}
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;

 protected:
  /// Scale used by membership tolerances: max(1, ||X||_F).
  static double scale(const Matrix& X);
  /// Orthonormal bases whose symmetric products U S U^T span the normal
  /// directions inside the symmetric subspace.
  virtual std::vector<Matrix> normal_bases(const Matrix& X) const = 0;
};

/// PSD cone; Q(X)[Y] = (X S + S X) / 2 with S = Sym(Y).
class PsdConeSet final : public SymmetricMatrixSet {
 public:
  explicit PsdConeSet(Index s) : SymmetricMatrixSet(s) {}
  std::string name() const override { return "PsdCone"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  Matrix apply_q_columns(const Vector& x, const Matrix& V) const override;
  std::optional<Matrix> structured_gram(const Vector& x, const SparseMatrix& J) const override;

 protected:
  std::vector<Matrix> normal_bases(const Matrix& X) const override;
};

/// {0 <= X <= I}; Q(X)[Y] = (X S (I - X) + (I - X) S X) / 2 with S = Sym(Y).
class PsdSpectralSet final : public SymmetricMatrixSet {
 public:
  explicit PsdSpectralSet(Index s) : SymmetricMatrixSet(s) {}
  std::string name() const override { return "PsdSpectral"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;

  /// The one-sided operator Sym(X (I - X) S). Kept for comparison: its null
  /// space is too large when X has eigenvalues at both 0 and 1.
  Vector apply_q_one_sided(const Vector& x, const Vector& v) const;

 protected:
  std::vector<Matrix> normal_bases(const Matrix& X) const override;
};

/// {X in R^{m x q} : rank X <= r}; Q(X)[D] = (X X^T D + D X^T X) / 2.
class LowRankVarietySet final : public MatrixSet {
 public:
  LowRankVarietySet(Index rows, Index cols, Index rank) : MatrixSet(rows, cols), rank_(rank) {}
  std::string name() const override { return "LowRankVariety"; }
  Index rank() const { return rank_; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  Matrix apply_q_columns(const Vector& x, const Matrix& V) const override;
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;

 private:
  Index rank_;
};

/// Symmetric matrices of rank <= r; Q(X)[D] = (S X^2 + X^2 S) / 2, S = Sym(D).
class SymLowRankSet final : public SymmetricMatrixSet {
 public:
  SymLowRankSet(Index s, Index rank) : SymmetricMatrixSet(s), rank_(rank) {}
  std::string name() const override { return "SymLowRank"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;

 protected:
  std::vector<Matrix> normal_bases(const Matrix& X) const override;

 private:
  Index rank_;
};

/// PSD matrices of rank <= r; Q(X)[D] = (S X + X S) / 2, S = Sym(D).
class LowRankPsdSet final : public SymmetricMatrixSet {
 public:
  LowRankPsdSet(Index s, Index rank) : SymmetricMatrixSet(s), rank_(rank) {}
  std::string name() const override { return "LowRankPsd"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;

 protected:
  std::vector<Matrix> normal_bases(const Matrix& X) const override;

 private:
  Index rank_;
};

}  // namespace cdap
