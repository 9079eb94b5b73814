#include "cdap/problems.hpp"

#include "cdap/projections.hpp"
#include "cdap/rng.hpp"
#include "cdap/sets.hpp"

#include <cmath>
#include <numeric>

namespace cdap {

namespace {

Vector flatten_rows(const Matrix& m) {
  RowMatrix r = m;
  return Eigen::Map<const Vector>(r.data(), r.size());
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::Configuration, msg);
}

ProblemMeta make_meta(std::string family, std::vector<std::pair<std::string, double>> dims,
                      std::uint64_t seed) {
  return {std::move(family), std::move(dims), seed, Rng::algorithm};
}

}  // namespace

ProblemInstance gen_correlation(Index n, double density, std::uint64_t seed) {
  require(n >= 2, "correlation: need n >= 2");
  require(density > 0 && density < 1, "correlation: density must lie in (0,1)");
  Rng rng(seed);

  // Exactly round(density n^2) distinct nonzero positions.
  const Index total = n * n;
  const Index nnz = std::clamp<Index>(std::llround(density * double(total)), 1, total);
  std::vector<Index> pos(static_cast<std::size_t>(total));
  std::iota(pos.begin(), pos.end(), Index(0));
  for (Index t = 0; t < nnz; ++t) std::swap(pos[t], pos[t + rng.index(total - t)]);
  Matrix W = Matrix::Zero(n, n);
  for (Index t = 0; t < nnz; ++t) W(pos[t] / n, pos[t] % n) = rng.uniform();
  for (Index j = 0; j < n; ++j) {
    if (W.col(j).squaredNorm() == 0.0) W(rng.index(n), j) = 1.0;
    W.col(j).normalize();
  }
  const Matrix Xref = symmetrize(W.transpose() * W);

  std::vector<std::pair<Index, Index>> zeros;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (Xref(i, j) == 0.0) zeros.emplace_back(i, j);
  if (zeros.empty())
    throw Error(ErrorCode::DegenerateInstance, "correlation: sparsity pattern has no zero entries");

  const Index p = n + static_cast<Index>(zeros.size());
  auto J = std::make_shared<SparseMatrix>(total, p);
  {
    std::vector<Eigen::Triplet<double>> trip;
    for (Index i = 0; i < n; ++i) trip.emplace_back(i * n + i, i, 1.0);
    for (std::size_t t = 0; t < zeros.size(); ++t) {
      const auto [i, j] = zeros[t];
      trip.emplace_back(i * n + j, n + Index(t), 0.5);
      trip.emplace_back(j * n + i, n + Index(t), 0.5);
    }
    J->setFromTriplets(trip.begin(), trip.end());
    J->makeCompressed();
  }

  ProblemInstance inst;
  inst.cs.n = total;
  inst.cs.p = p;
  inst.cs.eval = [n, zeros](const Vector& x) {
    Vector c(n + Index(zeros.size()));
    for (Index i = 0; i < n; ++i) c(i) = x(i * n + i) - 1.0;
    for (std::size_t t = 0; t < zeros.size(); ++t) {
      const auto [i, j] = zeros[t];
      c(n + Index(t)) = 0.5 * (x(i * n + j) + x(j * n + i));
    }
    return c;
  };
  inst.cs.sparse_jacobian = [J](const Vector&) { return *J; };
  inst.cs.jacobian = [J](const Vector&) { return Matrix(*J); };
  inst.affine_projector = [n, zeros](const Vector& x) {
    Vector y = x;
    for (Index i = 0; i < n; ++i) y(i * n + i) = 1.0;
    for (const auto& [i, j] : zeros) {
      const double m = 0.5 * (y(i * n + j) + y(j * n + i));
      y(i * n + j) -= m;
      y(j * n + i) -= m;
    }
    return y;
  };
  inst.set = std::make_shared<PsdConeSet>(n);
  inst.x_ref = flatten_rows(Xref);
  const Matrix noise = rng.normal_matrix(n, n);
  inst.x0 = flatten_rows(project_psd(symmetrize(10.0 * noise) + Xref));
  inst.meta = make_meta("correlation", {{"n", double(n)}, {"density", density}, {"p", double(p)}}, seed);
  return inst;
}

ProblemInstance gen_lowrank_affine(Index n, Index m, Index p, Index r, std::uint64_t seed) {
  require(n > 0 && m > 0, "lowrank_affine: matrix shape must be positive");
  require(r > 0 && r <= std::min(n, m), "lowrank_affine: need 0 < r <= min(n, m)");
  require(p >= 0 && p < n * m, "lowrank_affine: need 0 <= p < n m");
  Rng rng(seed);
  const Index dim = n * m;

  auto H = std::make_shared<Matrix>();
  auto gram = std::make_shared<Eigen::LLT<Matrix>>();
  for (int attempt = 0;; ++attempt) {
    *H = rng.normal_matrix(p, dim);
    gram->compute(*H * H->transpose());
    if (gram->info() == Eigen::Success) break;
    if (attempt == 1)
      throw Error(ErrorCode::DegenerateInstance, "lowrank_affine: Gram matrix of {H_i} is singular");
  }

  ProblemInstance inst;
  inst.x_ref = flatten_rows(project_low_rank(rng.normal_matrix(n, m), r));
  const Vector b = *H * inst.x_ref;
  inst.x0 = flatten_rows(project_low_rank(rng.normal_matrix(n, m), r));

  inst.cs.n = dim;
  inst.cs.p = p;
  inst.cs.eval = [H, b](const Vector& x) { return Vector(*H * x - b); };
  inst.cs.jacobian = [H](const Vector&) { return Matrix(H->transpose()); };
  inst.affine_projector = [H, b, gram](const Vector& x) -> Vector {
    if (H->rows() == 0) return x;
    return x - H->transpose() * gram->solve(*H * x - b);
  };
  inst.set = std::make_shared<LowRankVarietySet>(n, m, r);
  inst.meta = make_meta("lowrank_affine",
                        {{"n", double(n)}, {"m", double(m)}, {"p", double(p)}, {"r", double(r)}}, seed);
  return inst;
}

ProblemInstance gen_qp_orthant(Index n, Index p, std::uint64_t seed) {
  require(n > 0, "qp_orthant: need n > 0");
  require(p >= 1, "qp_orthant: need p >= 1");
  Rng rng(seed);

  auto H = std::make_shared<std::vector<Matrix>>();
  for (Index i = 0; i < p; ++i) H->push_back(symmetrize(rng.normal_matrix(n, n)));

  ProblemInstance inst;
  inst.x_ref = rng.normal_vector(n).cwiseAbs();
  Vector b(p);
  for (Index i = 0; i < p; ++i) b(i) = inst.x_ref.dot((*H)[i] * inst.x_ref);
  inst.x0 = (inst.x_ref + 0.1 * rng.normal_vector(n)).cwiseMax(0.0);

  inst.cs.n = n;
  inst.cs.p = p;
  inst.cs.eval = [H, b](const Vector& x) {
    Vector c(b.size());
    for (Index i = 0; i < b.size(); ++i) c(i) = x.dot((*H)[i] * x) - b(i);
    return c;
  };
  inst.cs.jacobian = [H](const Vector& x) {
    Matrix J(x.size(), Index(H->size()));
    for (std::size_t i = 0; i < H->size(); ++i) J.col(Index(i)) = 2.0 * ((*H)[i] * x);
    return J;
  };
  inst.set = std::make_shared<OrthantSet>(n);
  inst.meta = make_meta("qp_orthant", {{"n", double(n)}, {"p", double(p)}}, seed);
  return inst;
}

ProblemInstance gen_lq_affine(Index n, Index p, double q, std::uint64_t seed) {
  require(n > 0, "lq_affine: need n > 0");
  require(p >= 1 && p <= n, "lq_affine: need 1 <= p <= n");
  require(q > 0 && q <= 1, "lq_affine: need 0 < q <= 1");
  Rng rng(seed);
  constexpr double kTol = 1e-14;

  ProblemInstance inst;
  inst.x_ref = project_lq_ball(rng.normal_vector(n), q, kTol).point;
  auto H = std::make_shared<Matrix>(rng.normal_matrix(n, p));
  const Vector b = H->transpose() * inst.x_ref;
  inst.x0 = project_lq_ball(inst.x_ref + 1e-5 * rng.normal_vector(n), q, kTol).point;

  auto gram = std::make_shared<Eigen::LLT<Matrix>>(H->transpose() * *H);
  if (gram->info() != Eigen::Success)
    throw Error(ErrorCode::DegenerateInstance, "lq_affine: H has dependent columns");

  inst.cs.n = n;
  inst.cs.p = p;
  inst.cs.eval = [H, b](const Vector& x) { return Vector(H->transpose() * x - b); };
  inst.cs.jacobian = [H](const Vector&) { return *H; };
  inst.affine_projector = [H, b, gram](const Vector& x) {
    return Vector(x - *H * gram->solve(H->transpose() * x - b));
  };
  inst.set = std::make_shared<LqBallSet>(n, q);
  inst.meta = make_meta("lq_affine", {{"n", double(n)}, {"p", double(p)}, {"q", q}}, seed);
  return inst;
}

ProblemInstance gen_toy_orthant_affine() {
  ProblemInstance inst;
  inst.cs.n = 2;
  inst.cs.p = 1;
  inst.cs.eval = [](const Vector& x) { return Vector::Constant(1, x(0) + x(1) - 1.0); };
  inst.cs.jacobian = [](const Vector&) { return Matrix::Ones(2, 1); };
  inst.affine_projector = [](const Vector& x) {
    return Vector(x - Vector::Constant(2, 0.5 * (x(0) + x(1) - 1.0)));
  };
  inst.set = std::make_shared<OrthantSet>(2);
  inst.x_ref = Vector::Unit(2, 0);
  inst.x0 = Vector::Zero(2);
  inst.x0(0) = 2.0;
  inst.meta = make_meta("toy", {}, 0);
  inst.meta.rng = "none";
  return inst;
}

}  // namespace cdap
