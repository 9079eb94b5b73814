#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdap {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double>;

enum class ErrorCode {
  Configuration,
  Precondition,
  Unsupported,
  LinearSolveFailure,
  StalledInnerSolve,
  DomainViolation,
  Diverged,
  DegenerateInstance,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Smooth equality constraints c: R^n -> R^p with Jacobian columns grad c_i.
///
/// `jacobian` returns the n x p matrix [grad c_1, ..., grad c_p]. Problems with
/// very sparse gradients may also supply `sparse_jacobian`; the solver then
/// avoids forming the dense matrix.
struct ConstraintSystem {
  Index n = 0;
  Index p = 0;
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jacobian;
  std::function<SparseMatrix(const Vector&)> sparse_jacobian;

  bool has_sparse_jacobian() const { return static_cast<bool>(sparse_jacobian); }
};

/// grad c(x) * y, using the sparse Jacobian when one is available.
Vector jacobian_apply(const ConstraintSystem& cs, const Vector& x, const Vector& y);

/// Result of a (possibly inexact) projection onto a closed set.
struct Projection {
  Vector point;
  double error = 0.0;     // achieved-error estimate; 0 for exact projections
  bool converged = true;  // false when an inner solver hit its cap
};

/// A closed set X with a cheap projection and a projective mapping Q.
///
/// Points are flat vectors; matrix-valued sets store their iterates row-major
/// and reshape internally. Q(x) must be symmetric positive semidefinite with
/// null space equal to the span of the normal cone at x.
class ProjectiveSet {
 public:
  virtual ~ProjectiveSet() = default;

  virtual Index dim() const = 0;
  virtual std::string name() const = 0;

  virtual Projection project(const Vector& z, double tol) const = 0;
  virtual bool contains(const Vector& x, double tol) const = 0;

  /// Q(x) v. Throws ErrorCode::Precondition when x is not in X.
  Vector apply_q(const Vector& x, const Vector& v, double tol = 1e-8) const;

  /// Q(x) v without the membership check.
  virtual Vector apply_q_unchecked(const Vector& x, const Vector& v) const = 0;

  /// Q(x) applied to every column of V. Sets override this when Q(x) has
  /// per-point setup that can be shared across columns.
  virtual Matrix apply_q_columns(const Vector& x, const Matrix& V) const;

  /// Spanning vectors of range(N_X(x)); std::nullopt when the set has no
  /// closed-form oracle.
  virtual std::optional<std::vector<Vector>> normal_generators(const Vector& x) const;

  /// grad c^T Q(x) grad c assembled directly from a sparse Jacobian. Sets with
  /// exploitable structure return a matrix; others return std::nullopt.
  virtual std::optional<Matrix> structured_gram(const Vector& x, const SparseMatrix& J) const;

  /// dist(y, X), or an upper bound on it for sets with inexact projections.
  virtual double distance(const Vector& y) const;

  virtual bool exact_projection() const { return true; }

  /// Constant used by the quadratic distance-bound property tests.
  double rho_test = 10.0;
};

enum class TauRule { MinTOne, Squared };

const char* to_string(TauRule rule);
TauRule tau_rule_from_string(const std::string& name);

struct SolverConfig {
  double kappa = 0.5;
  double eta_max = 1.0;
  double alpha = 0.7;
  int max_linesearch = 10;
  TauRule tau_rule = TauRule::MinTOne;
  double tol = 1e-10;
  int max_iters = 5000;
  double proj_tol_scale = 1.0;
  double proj_base_tol = 1e-12;
  double membership_tol = 1e-8;

  /// Throws ErrorCode::Configuration when a parameter is out of range.
  void validate() const;

  double tau(double t) const;

  /// Tolerance requested from inexact projections at residual ||c(x_k)||.
  double projection_tolerance(double residual) const;
};

enum class StepType {
  None,
  Dissolving,
  ProjectedGradient,
  Alternating,
  Bregman,
};

const char* to_string(StepType step);

enum class Status {
  Converged,
  MaxIters,
  LinearSolveFailure,
  StalledLineSearch,
  DomainViolation,
  Diverged,
};

const char* to_string(Status status);

/// One row per iterate x_k. The step fields describe the move from x_k to
/// x_{k+1}; the last row has step == StepType::None.
struct IterateRecord {
  int k = 0;
  double residual = 0.0;
  StepType step = StepType::None;
  int ls_depth = 0;
  double eta = 0.0;
  double sigma_min_g = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
  double step_norm = 0.0;
  bool stalled = false;  // line search hit its cap
  bool clamped = false;  // Bregman iterate clamped off the boundary
};

struct IterateTrace {
  std::vector<IterateRecord> records;
  Status status = Status::MaxIters;

  int iterations() const {
    return records.empty() ? 0 : records.back().k;
  }
  double final_residual() const {
    return records.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : records.back().residual;
  }
  std::vector<double> residuals() const;
};

enum class GramPath { Auto, Dense, Sparse };

/// Inner matrix of the constraint dissolving mapping at x.
struct GramSystem {
  Matrix G;    // grad c^T Q grad c, symmetrized
  Matrix QJ;   // Q(x) grad c(x); empty on the sparse path
  Vector c;
};

GramSystem assemble_gram(const ConstraintSystem& cs, const ProjectiveSet& set,
                         const Vector& x, GramPath path = GramPath::Auto,
                         double membership_tol = 1e-8);

/// Smallest eigenvalue of a symmetric PSD matrix, clamped at zero.
double sigma_min_symmetric(const Matrix& G);

}  // namespace cdap
