#pragma once

#include "cdap/solver.hpp"

#include <memory>
#include <string>

namespace cdap {

enum class KernelKind { Entropy, FermiDirac };

const char* to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// Separable Legendre kernel whose inverse Hessian extends continuously to
/// the closure of its domain and vanishes exactly on the normal directions.
///
///   Entropy     phi(x) = sum x_i log x_i - x_i            on R^n_+
///   FermiDirac  phi(x) = sum x_i log x_i + (1-x_i) log(1-x_i)  on [0,1]^n
class BregmanKernel {
 public:
  BregmanKernel(KernelKind kind, Index n);

  static BregmanKernel entropy(Index n) { return {KernelKind::Entropy, n}; }
  static BregmanKernel fermi_dirac(Index n) { return {KernelKind::FermiDirac, n}; }

  KernelKind kind() const { return kind_; }
  Index dim() const { return n_; }
  std::string name() const { return to_string(kind_); }

  double phi(const Vector& x) const;
  Vector grad_phi(const Vector& x) const;
  Vector inv_grad_phi(const Vector& g) const;
  /// Diagonal of W_phi(x); W_phi(x) = Diag(x) or Diag(x (1 - x)).
  Vector w_phi(const Vector& x) const;
  /// D_phi(y, x) = phi(y) - phi(x) - <grad phi(x), y - x>.
  double divergence(const Vector& y, const Vector& x) const;

  bool interior(const Vector& x) const;
  /// The closed set this kernel serves (orthant or unit box).
  const std::shared_ptr<const ProjectiveSet>& domain_set() const { return domain_; }

 private:
  KernelKind kind_;
  Index n_;
  std::shared_ptr<const ProjectiveSet> domain_;
};

/// The domain set with Q replaced by W_phi, so the dissolving machinery can
/// be reused unchanged.
class WPhiSet final : public ProjectiveSet {
 public:
  explicit WPhiSet(BregmanKernel kernel) : kernel_(std::move(kernel)) {}
  Index dim() const override { return kernel_.dim(); }
  std::string name() const override { return "WPhi[" + kernel_.name() + "]"; }
  Projection project(const Vector& z, double tol) const override;
  bool contains(const Vector& x, double tol) const override;
  Vector apply_q_unchecked(const Vector& x, const Vector& v) const override;
  std::optional<std::vector<Vector>> normal_generators(const Vector& x) const override;

 private:
  BregmanKernel kernel_;
};

struct BregmanStep {
  Vector point;
  Vector d_vec;
  double residual_before = 0.0;
  double sigma_min_g = std::numeric_limits<double>::quiet_NaN();
  bool clamped = false;  // some coordinate was pushed off the boundary
};

/// x+ = (grad phi)^{-1}(grad phi(x) - d(x)), with d computed using Q = W_phi.
/// Throws ErrorCode::DomainViolation unless x is interior.
BregmanStep bregman_step(const ConstraintSystem& cs, const BregmanKernel& kernel,
                         const Vector& x, const SolverConfig& cfg);

/// Iterates bregman_step. Status is DomainViolation for a non-interior start
/// and Diverged if the residual grows 1e6-fold.
SolveResult solve_bregman(const ConstraintSystem& cs, const BregmanKernel& kernel,
                          const Vector& x0, const SolverConfig& cfg);

/// Moves coordinates within `margin` of the boundary inward by `margin`.
Vector push_to_interior(const BregmanKernel& kernel, const Vector& x, double margin = 1e-8);

}  // namespace cdap
