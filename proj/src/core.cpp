#include "cdap/core.hpp"

#include <cmath>
#include <sstream>

namespace cdap {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Configuration: return "ConfigurationError";
    case ErrorCode::Precondition: return "PreconditionError";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::StalledInnerSolve: return "StalledInnerSolve";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::DegenerateInstance: return "DegenerateInstance";
  }
  return "Unknown";
}

Vector jacobian_apply(const ConstraintSystem& cs, const Vector& x, const Vector& y) {
  if (cs.has_sparse_jacobian()) return cs.sparse_jacobian(x) * y;
  return cs.jacobian(x) * y;
}

Vector ProjectiveSet::apply_q(const Vector& x, const Vector& v, double tol) const {
  if (x.size() != dim() || v.size() != dim())
    throw Error(ErrorCode::Configuration, name() + ": dimension mismatch in apply_q");
  if (!contains(x, tol))
    throw Error(ErrorCode::Precondition, name() + ": apply_q called at a point outside the set");
  return apply_q_unchecked(x, v);
}

Matrix ProjectiveSet::apply_q_columns(const Vector& x, const Matrix& V) const {
  Matrix out(V.rows(), V.cols());
  for (Index j = 0; j < V.cols(); ++j) out.col(j) = apply_q_unchecked(x, V.col(j));
  return out;
}

std::optional<std::vector<Vector>> ProjectiveSet::normal_generators(const Vector&) const {
  return std::nullopt;
}

std::optional<Matrix> ProjectiveSet::structured_gram(const Vector&, const SparseMatrix&) const {
  return std::nullopt;
}

double ProjectiveSet::distance(const Vector& y) const {
  return (y - project(y, 0.0).point).norm();
}

const char* to_string(TauRule rule) {
  switch (rule) {
    case TauRule::MinTOne: return "min_t_1";
    case TauRule::Squared: return "t_squared";
  }
  return "unknown";
}

TauRule tau_rule_from_string(const std::string& name) {
  if (name == "min_t_1") return TauRule::MinTOne;
  if (name == "t_squared") return TauRule::Squared;
  throw Error(ErrorCode::Configuration, "unknown tau_rule '" + name + "' (expected min_t_1 or t_squared)");
}

void SolverConfig::validate() const {
  std::ostringstream bad;
  if (!(kappa > 0.0 && kappa < 1.0)) bad << "kappa must lie in (0,1); ";
  if (!(alpha > 0.0 && alpha < 1.0)) bad << "alpha must lie in (0,1); ";
  if (!(eta_max > 0.0)) bad << "eta_max must be positive; ";
  if (!(tol > 0.0)) bad << "tol must be positive; ";
  if (max_linesearch < 0) bad << "max_linesearch must be nonnegative; ";
  if (max_iters < 0) bad << "max_iters must be nonnegative; ";
  if (!(proj_tol_scale >= 0.0)) bad << "proj_tol_scale must be nonnegative; ";
  if (!(proj_base_tol >= 0.0)) bad << "proj_base_tol must be nonnegative; ";
  if (!(membership_tol > 0.0)) bad << "membership_tol must be positive; ";
  const std::string msg = bad.str();
  if (!msg.empty()) throw Error(ErrorCode::Configuration, "invalid solver config: " + msg);
}

double SolverConfig::tau(double t) const {
  switch (tau_rule) {
    case TauRule::MinTOne: return std::min(t, 1.0);
    case TauRule::Squared: return t * t;
  }
  return std::min(t, 1.0);
}

double SolverConfig::projection_tolerance(double residual) const {
  return std::min(proj_base_tol, proj_tol_scale * residual * residual);
}

const char* to_string(StepType step) {
  switch (step) {
    case StepType::None: return "none";
    case StepType::Dissolving: return "dissolving";
    case StepType::ProjectedGradient: return "projected_gradient";
    case StepType::Alternating: return "alternating";
    case StepType::Bregman: return "bregman";
  }
  return "unknown";
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Converged: return "Converged";
    case Status::MaxIters: return "MaxIters";
    case Status::LinearSolveFailure: return "LinearSolveFailure";
    case Status::StalledLineSearch: return "StalledLineSearch";
    case Status::DomainViolation: return "DomainViolation";
    case Status::Diverged: return "Diverged";
  }
  return "Unknown";
}

std::vector<double> IterateTrace::residuals() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.residual);
  return out;
}

GramSystem assemble_gram(const ConstraintSystem& cs, const ProjectiveSet& set,
                         const Vector& x, GramPath path, double membership_tol) {
  if (cs.n != set.dim() || x.size() != cs.n)
    throw Error(ErrorCode::Configuration,
                "dimension mismatch: constraints act on R^" + std::to_string(cs.n) + ", set " +
                    set.name() + " on R^" + std::to_string(set.dim()));
  if (!set.contains(x, membership_tol))
    throw Error(ErrorCode::Precondition, set.name() + ": assemble_gram needs x in X");

  GramSystem out;
  out.c = cs.eval(x);
  if (path == GramPath::Auto) path = cs.has_sparse_jacobian() ? GramPath::Sparse : GramPath::Dense;

  if (path == GramPath::Sparse) {
    if (!cs.has_sparse_jacobian())
      throw Error(ErrorCode::Configuration, "sparse Gram path requested without a sparse Jacobian");
    const SparseMatrix J = cs.sparse_jacobian(x);
    if (auto G = set.structured_gram(x, J)) {
      out.G = std::move(*G);
    } else {
      // Column by column; never stores Q grad c.
      out.G.resize(cs.p, cs.p);
      for (Index j = 0; j < cs.p; ++j) {
        const Vector qj = set.apply_q_unchecked(x, Vector(J.col(j)));
        out.G.col(j) = J.transpose() * qj;
      }
    }
  } else {
    const Matrix J = cs.has_sparse_jacobian() ? Matrix(cs.sparse_jacobian(x)) : cs.jacobian(x);
    if (J.rows() != cs.n || J.cols() != cs.p)
      throw Error(ErrorCode::Configuration, "jacobian has the wrong shape");
    out.QJ = set.apply_q_columns(x, J);
    out.G = J.transpose() * out.QJ;
  }
  out.G = (0.5 * (out.G + out.G.transpose())).eval();
  return out;
}

double sigma_min_symmetric(const Matrix& G) {
  if (G.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues()(0));
}

}  // namespace cdap
