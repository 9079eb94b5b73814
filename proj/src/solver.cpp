#include "cdap/solver.hpp"

#include <chrono>
#include <cmath>

namespace cdap {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Exact eigenvalues are affordable for small Gram matrices; above this size
// the smallest eigenvalue is estimated by inverse iteration.
constexpr Index kExactSigmaLimit = 200;

double sigma_min_estimate(const Matrix& G, const Eigen::LLT<Matrix>& shifted) {
  if (G.rows() <= kExactSigmaLimit) return sigma_min_symmetric(G);
  Vector v = Vector::LinSpaced(G.rows(), 1.0, 2.0);
  v.normalize();
  for (int it = 0; it < 30; ++it) {
    v = shifted.solve(v);
    const double nrm = v.norm();
    if (!(nrm > 0) || !std::isfinite(nrm)) break;
    v /= nrm;
  }
  return std::max(0.0, v.dot(G * v));
}

}  // namespace

StepReport dissolving_direction(const ConstraintSystem& cs, const ProjectiveSet& set,
                                const Vector& x, const SolverConfig& cfg, GramPath path) {
  GramSystem gs = assemble_gram(cs, set, x, path, cfg.membership_tol);
  StepReport out;
  out.residual_before = gs.c.norm();
  if (out.residual_before == 0.0) {
    out.d_vec = Vector::Zero(x.size());
    out.q_step = Vector::Zero(x.size());
    out.trial = x;
    out.sigma_min_g = sigma_min_symmetric(gs.G);
    return out;
  }

  const Index p = gs.G.rows();
  out.tau_used = cfg.tau(out.residual_before);
  Matrix K = gs.G;
  K.diagonal().array() += out.tau_used;
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success) {
    const double trace = gs.G.trace();
    const double ridge = 1e-14 * (trace > 0 ? trace / double(p) : 1.0);
    K.diagonal().array() += ridge;
    llt.compute(K);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::LinearSolveFailure,
                  "Cholesky of G + tau I failed after ridge retry (p = " + std::to_string(p) + ")");
  }
  const Vector y = llt.solve(gs.c);
  out.sigma_min_g = sigma_min_estimate(gs.G, llt);

  out.d_vec = jacobian_apply(cs, x, y);
  out.q_step = gs.QJ.size() > 0 ? Vector(gs.QJ * y) : set.apply_q_unchecked(x, out.d_vec);
  out.trial = x - out.q_step;
  return out;
}

StepReport ap_step_report(const ConstraintSystem& cs, const ProjectiveSet& set, const Vector& x,
                          const SolverConfig& cfg) {
  const Vector c = cs.eval(x);
  const double res = c.norm();
  if (res <= kFeasibleResidual) {
    if (!set.contains(x, cfg.membership_tol))
      throw Error(ErrorCode::Precondition, set.name() + ": ap_step needs x in X");
    StepReport out;
    out.d_vec = Vector::Zero(x.size());
    out.q_step = Vector::Zero(x.size());
    out.trial = x;
    out.residual_before = res;
    out.residual_after = res;
    return out;
  }
  StepReport out = dissolving_direction(cs, set, x, cfg);
  const Projection proj = set.project(out.trial, cfg.projection_tolerance(res));
  out.trial = proj.point;
  out.projection_error = proj.error;
  out.projection_converged = proj.converged;
  out.residual_after = cs.eval(out.trial).norm();
  return out;
}

Vector ap_step(const ConstraintSystem& cs, const ProjectiveSet& set, const Vector& x,
               const SolverConfig& cfg) {
  return ap_step_report(cs, set, x, cfg).trial;
}

LineSearchResult pg_step(const ConstraintSystem& cs, const ProjectiveSet& set, const Vector& x,
                         const SolverConfig& cfg) {
  const Vector c = cs.eval(x);
  const double half_sq = 0.5 * c.squaredNorm();
  const Vector grad = jacobian_apply(cs, x, c);
  const double proj_tol = cfg.projection_tolerance(c.norm());

  LineSearchResult out;
  double eta = cfg.eta_max;
  for (int j = 0; j <= cfg.max_linesearch; ++j, eta *= cfg.alpha) {
    Vector cand = set.project(x - eta * grad, proj_tol).point;
    const double res = cs.eval(cand).norm();
    out.point = std::move(cand);
    out.depth = j;
    out.eta = eta;
    out.residual = res;
    const double move = (out.point - x).squaredNorm();
    if (0.5 * res * res <= half_sq - move / (4.0 * eta)) return out;
  }
  out.stalled = true;
  return out;
}

namespace {

// Shared driver for the dissolving-step methods.
template <class Step>
SolveResult run_loop(const ConstraintSystem& cs, const ProjectiveSet& set, const Vector& x0,
                     const SolverConfig& cfg, Step&& step) {
  cfg.validate();
  if (x0.size() != cs.n || set.dim() != cs.n)
    throw Error(ErrorCode::Configuration, "dimension mismatch between problem and set");
  if (!set.contains(x0, cfg.membership_tol))
    throw Error(ErrorCode::Precondition, set.name() + ": starting point must lie in X");

  const auto start = Clock::now();
  SolveResult out;
  out.x = x0;
  const double initial = cs.eval(x0).norm();
  for (int k = 0;; ++k) {
    IterateRecord rec;
    rec.k = k;
    rec.residual = cs.eval(out.x).norm();
    if (rec.residual <= cfg.tol) {
      out.trace.status = Status::Converged;
    } else if (!std::isfinite(rec.residual) || rec.residual > 1e6 * std::max(initial, cfg.tol)) {
      out.trace.status = Status::Diverged;
    } else if (k >= cfg.max_iters) {
      out.trace.status = Status::MaxIters;
    } else {
      try {
        Vector next = step(out.x, rec);
        rec.step_norm = (next - out.x).norm();
        rec.wall_ms = elapsed_ms(start);
        out.trace.records.push_back(rec);
        if (rec.step_norm == 0.0) {
          // A zero move repeats forever; stop rather than spin to max_iters.
          out.trace.status = Status::StalledLineSearch;
          IterateRecord last;
          last.k = k + 1;
          last.residual = rec.residual;
          last.wall_ms = elapsed_ms(start);
          out.trace.records.push_back(last);
          return out;
        }
        out.x = std::move(next);
        continue;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LinearSolveFailure) throw;
        out.trace.status = Status::LinearSolveFailure;
      }
    }
    rec.wall_ms = elapsed_ms(start);
    out.trace.records.push_back(rec);
    return out;
  }
}

}  // namespace

SolveResult solve_aphl(const ConstraintSystem& cs, const ProjectiveSet& set, const Vector& x0,
                       const SolverConfig& cfg) {
  return run_loop(cs, set, x0, cfg, [&](const Vector& x, IterateRecord& rec) -> Vector {
    StepReport trial = ap_step_report(cs, set, x, cfg);
    rec.sigma_min_g = trial.sigma_min_g;
    if (trial.residual_after < (1.0 - cfg.kappa) * rec.residual) {
      rec.step = StepType::Dissolving;
      return std::move(trial.trial);
    }
    LineSearchResult pg = pg_step(cs, set, x, cfg);
    rec.step = StepType::ProjectedGradient;
    rec.ls_depth = pg.depth;
    rec.eta = pg.eta;
    rec.stalled = pg.stalled;
    return std::move(pg.point);
  });
}

SolveResult solve_plain_ap(const ConstraintSystem& cs, const ProjectiveSet& set,
                           const Vector& x0, const SolverConfig& cfg) {
  return run_loop(cs, set, x0, cfg, [&](const Vector& x, IterateRecord& rec) -> Vector {
    StepReport trial = ap_step_report(cs, set, x, cfg);
    rec.sigma_min_g = trial.sigma_min_g;
    rec.step = StepType::Dissolving;
    return std::move(trial.trial);
  });
}

SolveResult solve_apm(const ConstraintSystem& cs, const ProjectiveSet& set,
                      const AffineProjector& project_m, const Vector& x0,
                      const SolverConfig& cfg) {
  cfg.validate();
  if (!project_m)
    throw Error(ErrorCode::Unsupported, "alternating projections need a closed-form projection onto M");
  if (x0.size() != cs.n || set.dim() != cs.n)
    throw Error(ErrorCode::Configuration, "dimension mismatch between problem and set");

  const auto start = Clock::now();
  SolveResult out;
  Vector x = x0;
  double proj_tol = cfg.proj_base_tol;
  for (int k = 0;; ++k) {
    Vector y = set.project(x, proj_tol).point;
    IterateRecord rec;
    rec.k = k;
    rec.residual = cs.eval(y).norm();
    proj_tol = cfg.projection_tolerance(rec.residual);
    const bool done = rec.residual <= cfg.tol || k >= cfg.max_iters;
    if (done) {
      out.trace.status = rec.residual <= cfg.tol ? Status::Converged : Status::MaxIters;
      rec.wall_ms = elapsed_ms(start);
      out.trace.records.push_back(rec);
      out.x = std::move(y);
      return out;
    }
    Vector next = project_m(y);
    rec.step = StepType::Alternating;
    rec.step_norm = (next - x).norm();
    rec.wall_ms = elapsed_ms(start);
    out.trace.records.push_back(rec);
    x = std::move(next);
  }
}

NondegeneracyReport nondegeneracy_report(const ConstraintSystem& cs, const ProjectiveSet& set,
                                         const Vector& x) {
  const GramSystem gs = assemble_gram(cs, set, x);
  NondegeneracyReport out;
  out.sigma_xq = sigma_min_symmetric(gs.G);
  Matrix JtJ;
  if (cs.has_sparse_jacobian()) {
    const SparseMatrix J = cs.sparse_jacobian(x);
    JtJ = Matrix(SparseMatrix(J.transpose() * J));
  } else {
    const Matrix J = cs.jacobian(x);
    JtJ = J.transpose() * J;
  }
  out.sigma_xc = std::sqrt(sigma_min_symmetric(JtJ));
  const double gnorm = gs.G.size() ? gs.G.norm() : 0.0;
  if (out.sigma_xq < 1e-10 * gnorm || gnorm == 0.0) {
    out.warning = true;
    out.message = "sigma_min(grad c^T Q grad c) is negligible; nondegeneracy likely fails at x";
  }
  return out;
}

DistanceBoundsReport distance_bounds_check(const ConstraintSystem& cs, const Vector& y,
                                           const AffineProjector& project_m) {
  if (!project_m)
    throw Error(ErrorCode::Unsupported, "distance bounds need a closed-form projection onto M");
  DistanceBoundsReport out;
  const Vector xm = project_m(y);
  out.residual = cs.eval(y).norm();
  out.distance = (y - xm).norm();
  Matrix JtJ;
  if (cs.has_sparse_jacobian()) {
    const SparseMatrix J = cs.sparse_jacobian(xm);
    JtJ = Matrix(SparseMatrix(J.transpose() * J));
  } else {
    const Matrix J = cs.jacobian(xm);
    JtJ = J.transpose() * J;
  }
  if (JtJ.size() == 0) {
    out.lower_ok = out.upper_ok = true;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(JtJ, Eigen::EigenvaluesOnly);
  out.sigma_min = std::sqrt(std::max(0.0, eig.eigenvalues()(0)));
  out.lipschitz = std::sqrt(std::max(0.0, eig.eigenvalues()(JtJ.rows() - 1)));
  const double slack = 1e-12 * std::max(1.0, out.residual);
  out.lower_ok = out.residual / out.lipschitz <= out.distance * (1 + 1e-9) + slack;
  out.upper_ok = out.sigma_min > 0 && out.distance <= 2.0 * out.residual / out.sigma_min + slack;
  return out;
}

}  // namespace cdap
