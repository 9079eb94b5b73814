#pragma once

#include "cdap/core.hpp"

#include <functional>
#include <string>

namespace cdap {

/// Closed-form Euclidean projection onto M = {c = 0}, when one exists.
using AffineProjector = std::function<Vector(const Vector&)>;

/// One evaluation of the constraint dissolving mapping at x.
struct StepReport {
  Vector d_vec;   // grad c(x) y, with (G + tau I) y = c(x)
  Vector q_step;  // Q(x) d_vec
  Vector trial;   // A(x) = x - q_step before projection; Pi_X(A(x)) after ap_step
  double residual_before = 0.0;
  double residual_after = std::numeric_limits<double>::quiet_NaN();
  double tau_used = 0.0;
  double sigma_min_g = std::numeric_limits<double>::quiet_NaN();
  double projection_error = 0.0;
  bool projection_converged = true;
};

/// Residuals at or below this are treated as exactly feasible by the steps.
inline constexpr double kFeasibleResidual = 1e-14;

/// d(x), Q(x) d(x) and A(x). Throws ErrorCode::LinearSolveFailure when
/// G + tau I cannot be factored even with a small ridge.
StepReport dissolving_direction(const ConstraintSystem& cs, const ProjectiveSet& set,
                                const Vector& x, const SolverConfig& cfg,
                                GramPath path = GramPath::Auto);

/// Pi_X(A(x)) with the inexact-projection budget, plus the residual there.
StepReport ap_step_report(const ConstraintSystem& cs, const ProjectiveSet& set,
                          const Vector& x, const SolverConfig& cfg);

Vector ap_step(const ConstraintSystem& cs, const ProjectiveSet& set, const Vector& x,
               const SolverConfig& cfg);

struct LineSearchResult {
  Vector point;
  int depth = 0;      // accepted j
  double eta = 0.0;   // eta_max * alpha^j
  double residual = 0.0;
  bool stalled = false;
};

/// Projected-gradient step on 0.5 ||c||^2 with backtracking until
/// 0.5 ||c(x+)||^2 <= 0.5 ||c(x)||^2 - ||x+ - x||^2 / (4 eta).
LineSearchResult pg_step(const ConstraintSystem& cs, const ProjectiveSet& set, const Vector& x,
                         const SolverConfig& cfg);

struct SolveResult {
  Vector x;
  IterateTrace trace;
};

/// Dissolving steps, falling back to projected gradient when the trial step
/// fails to cut the residual by the factor (1 - kappa).
SolveResult solve_aphl(const ConstraintSystem& cs, const ProjectiveSet& set, const Vector& x0,
                       const SolverConfig& cfg);

/// The undamped scheme x_{k+1} = Pi_X(A(x_k)); local method.
SolveResult solve_plain_ap(const ConstraintSystem& cs, const ProjectiveSet& set,
                           const Vector& x0, const SolverConfig& cfg);

/// Classical alternating projections x_{k+1} = Pi_M(Pi_X(x_k)). The residual
/// is measured at y_k = Pi_X(x_k), which is also the returned point.
SolveResult solve_apm(const ConstraintSystem& cs, const ProjectiveSet& set,
                      const AffineProjector& project_m, const Vector& x0,
                      const SolverConfig& cfg);

struct NondegeneracyReport {
  double sigma_xq = 0.0;  // sigma_min(grad c^T Q grad c)
  double sigma_xc = 0.0;  // sigma_min(grad c)
  bool warning = false;   // sigma_xq < 1e-10 ||G||
  std::string message;
};

NondegeneracyReport nondegeneracy_report(const ConstraintSystem& cs, const ProjectiveSet& set,
                                         const Vector& x);

struct DistanceBoundsReport {
  bool lower_ok = false;  // ||c(y)|| / M <= dist(y, M)
  bool upper_ok = false;  // dist(y, M) <= 2 ||c(y)|| / sigma
  double residual = 0.0;
  double distance = 0.0;
  double lipschitz = 0.0;    // ||grad c||_2 at Pi_M(y)
  double sigma_min = 0.0;    // sigma_min(grad c) at Pi_M(y)
};

/// Empirical check of the two-sided bound between ||c(y)|| and dist(y, M).
DistanceBoundsReport distance_bounds_check(const ConstraintSystem& cs, const Vector& y,
                                           const AffineProjector& project_m);

}  // namespace cdap
