#include "cdap/bregman.hpp"

#include "cdap/sets.hpp"

#include <chrono>
#include <cmath>

namespace cdap {

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Entropy: return "entropy";
    case KernelKind::FermiDirac: return "fermi_dirac";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "entropy") return KernelKind::Entropy;
  if (name == "fermi_dirac") return KernelKind::FermiDirac;
  throw Error(ErrorCode::Configuration, "unknown kernel '" + name + "' (expected entropy or fermi_dirac)");
}

namespace {

double xlogx(double v) { return v > 0 ? v * std::log(v) : 0.0; }

double sigmoid(double g) {
  if (g >= 0) return 1.0 / (1.0 + std::exp(-g));
  const double e = std::exp(g);
  return e / (1.0 + e);
}

constexpr double kFloor = 1e-300;

}  // namespace

BregmanKernel::BregmanKernel(KernelKind kind, Index n) : kind_(kind), n_(n) {
  if (n <= 0) throw Error(ErrorCode::Configuration, "kernel dimension must be positive");
  if (kind == KernelKind::Entropy)
    domain_ = std::make_shared<OrthantSet>(n);
  else
    domain_ = std::make_shared<BoxSet>(Vector::Zero(n), Vector::Ones(n));
}

double BregmanKernel::phi(const Vector& x) const {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (kind_ == KernelKind::Entropy)
      s += xlogx(x(i)) - x(i);
    else
      s += xlogx(x(i)) + xlogx(1.0 - x(i));
  }
  return s;
}

Vector BregmanKernel::grad_phi(const Vector& x) const {
  if (kind_ == KernelKind::Entropy) return x.array().log().matrix();
  return (x.array().log() - (1.0 - x.array()).log()).matrix();
}

Vector BregmanKernel::inv_grad_phi(const Vector& g) const {
  if (kind_ == KernelKind::Entropy) return g.array().exp().matrix();
  return g.unaryExpr([](double v) { return sigmoid(v); });
}

Vector BregmanKernel::w_phi(const Vector& x) const {
  if (kind_ == KernelKind::Entropy) return x.cwiseMax(0.0);
  return (x.array() * (1.0 - x.array())).cwiseMax(0.0).matrix();
}

double BregmanKernel::divergence(const Vector& y, const Vector& x) const {
  return phi(y) - phi(x) - grad_phi(x).dot(y - x);
}

bool BregmanKernel::interior(const Vector& x) const {
  if (x.size() != n_ || !x.allFinite()) return false;
  if (kind_ == KernelKind::Entropy) return (x.array() > 0).all();
  return (x.array() > 0).all() && (x.array() < 1).all();
}

Vector push_to_interior(const BregmanKernel& kernel, const Vector& x, double margin) {
  Vector out = x.cwiseMax(margin);
  if (kernel.kind() == KernelKind::FermiDirac) out = out.cwiseMin(1.0 - margin);
  return out;
}

Projection WPhiSet::project(const Vector& z, double tol) const {
  return kernel_.domain_set()->project(z, tol);
}

bool WPhiSet::contains(const Vector& x, double tol) const {
  return kernel_.domain_set()->contains(x, tol);
}

Vector WPhiSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  return kernel_.w_phi(x).cwiseProduct(v);
}

std::optional<std::vector<Vector>> WPhiSet::normal_generators(const Vector& x) const {
  return kernel_.domain_set()->normal_generators(x);
}

BregmanStep bregman_step(const ConstraintSystem& cs, const BregmanKernel& kernel,
                         const Vector& x, const SolverConfig& cfg) {
  if (!kernel.interior(x))
    throw Error(ErrorCode::DomainViolation, kernel.name() + " kernel needs a strictly interior point");
  const WPhiSet wset(kernel);
  const StepReport rep = dissolving_direction(cs, wset, x, cfg);
  BregmanStep out;
  out.d_vec = rep.d_vec;
  out.residual_before = rep.residual_before;
  out.sigma_min_g = rep.sigma_min_g;
  if (rep.residual_before == 0.0) {
    out.point = x;
    return out;
  }
  out.point = kernel.inv_grad_phi(kernel.grad_phi(x) - rep.d_vec);
  // Underflow can land exactly on the boundary even though the exact map cannot.
  for (Index i = 0; i < out.point.size(); ++i) {
    double& v = out.point(i);
    if (v <= 0.0) {
      v = kFloor;
      out.clamped = true;
    } else if (kernel.kind() == KernelKind::FermiDirac && v >= 1.0) {
      v = std::nextafter(1.0, 0.0);
      out.clamped = true;
    }
  }
  return out;
}

SolveResult solve_bregman(const ConstraintSystem& cs, const BregmanKernel& kernel,
                          const Vector& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (x0.size() != cs.n || kernel.dim() != cs.n)
    throw Error(ErrorCode::Configuration, "dimension mismatch between problem and kernel");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto ms = [&] { return std::chrono::duration<double, std::milli>(Clock::now() - start).count(); };

  SolveResult out;
  out.x = x0;
  const double initial = cs.eval(x0).norm();
  for (int k = 0;; ++k) {
    IterateRecord rec;
    rec.k = k;
    rec.residual = cs.eval(out.x).norm();
    bool stop = true;
    if (rec.residual <= cfg.tol) {
      out.trace.status = Status::Converged;
    } else if (!std::isfinite(rec.residual) || rec.residual > 1e6 * std::max(initial, cfg.tol)) {
      out.trace.status = Status::Diverged;
    } else if (!kernel.interior(out.x)) {
      out.trace.status = Status::DomainViolation;
    } else if (k >= cfg.max_iters) {
      out.trace.status = Status::MaxIters;
    } else {
      try {
        BregmanStep step = bregman_step(cs, kernel, out.x, cfg);
        rec.step = StepType::Bregman;
        rec.sigma_min_g = step.sigma_min_g;
        rec.clamped = step.clamped;
        rec.step_norm = (step.point - out.x).norm();
        out.x = std::move(step.point);
        stop = false;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LinearSolveFailure) throw;
        out.trace.status = Status::LinearSolveFailure;
      }
    }
    rec.wall_ms = ms();
    out.trace.records.push_back(rec);
    if (stop) return out;
  }
}

}  // namespace cdap
