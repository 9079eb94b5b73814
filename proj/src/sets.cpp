#include "cdap/sets.hpp"

#include "cdap/projections.hpp"

#include <cmath>
#include <unordered_map>

namespace cdap {

namespace {

// Relative tolerance for deciding which constraints are active when building
// normal-cone generators.
constexpr double kActiveTol = 1e-9;

Vector unit(Index n, Index i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

Vector sign_of(const Vector& x) {
  return x.unaryExpr([](double v) { return double((v > 0) - (v < 0)); });
}

}  // namespace

const char* to_string(SetKind kind) {
  switch (kind) {
    case SetKind::Box: return "Box";
    case SetKind::Orthant: return "Orthant";
    case SetKind::L2Ball: return "L2Ball";
    case SetKind::L1Ball: return "L1Ball";
    case SetKind::Simplex: return "Simplex";
    case SetKind::L0Ball: return "L0Ball";
    case SetKind::LqBall: return "LqBall";
    case SetKind::SpectralBall: return "SpectralBall";
    case SetKind::PsdCone: return "PsdCone";
    case SetKind::PsdSpectral: return "PsdSpectral";
    case SetKind::LowRankVariety: return "LowRankVariety";
    case SetKind::SymLowRank: return "SymLowRank";
    case SetKind::LowRankPsd: return "LowRankPsd";
  }
  return "Unknown";
}

SetKind set_kind_from_string(const std::string& name) {
  static const SetKind all[] = {SetKind::Box, SetKind::Orthant, SetKind::L2Ball,
                                SetKind::L1Ball, SetKind::Simplex, SetKind::L0Ball,
                                SetKind::LqBall, SetKind::SpectralBall, SetKind::PsdCone,
                                SetKind::PsdSpectral, SetKind::LowRankVariety,
                                SetKind::SymLowRank, SetKind::LowRankPsd};
  for (SetKind k : all)
    if (name == to_string(k)) return k;
  throw Error(ErrorCode::Configuration, "unknown set kind '" + name + "'");
}

void SetSpec::validate() const {
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::Configuration, std::string(to_string(kind)) + ": " + msg);
  };
  switch (kind) {
    case SetKind::Box:
      if (lower.size() == 0 || lower.size() != upper.size()) fail("bounds must be nonempty and equal length");
      if (!((upper - lower).array() > 0).all()) fail("need l < u componentwise");
      break;
    case SetKind::L2Ball:
      if (!(radius > 0)) fail("radius must be positive");
      [[fallthrough]];
    case SetKind::Orthant:
    case SetKind::L1Ball:
    case SetKind::Simplex:
      if (n <= 0) fail("dimension must be positive");
      break;
    case SetKind::L0Ball:
      if (n <= 0 || count <= 0 || count > n) fail("need 0 < u <= n");
      break;
    case SetKind::LqBall:
      if (n <= 0) fail("dimension must be positive");
      if (!(q > 0 && q <= 1)) fail("need 0 < q <= 1");
      break;
    case SetKind::SpectralBall:
      if (rows <= 0 || cols <= 0) fail("matrix shape must be positive");
      break;
    case SetKind::PsdCone:
    case SetKind::PsdSpectral:
      if (rows <= 0) fail("matrix size must be positive");
      break;
    case SetKind::LowRankVariety:
      if (rows <= 0 || cols <= 0) fail("matrix shape must be positive");
      if (rank <= 0 || rank > std::min(rows, cols)) fail("need 0 < r <= min(m, q)");
      break;
    case SetKind::SymLowRank:
    case SetKind::LowRankPsd:
      if (rows <= 0) fail("matrix size must be positive");
      if (rank <= 0 || rank > rows) fail("need 0 < r <= m");
      break;
  }
}

std::shared_ptr<const ProjectiveSet> make_set(const SetSpec& spec) {
  spec.validate();
  std::shared_ptr<ProjectiveSet> out;
  switch (spec.kind) {
    case SetKind::Box: out = std::make_shared<BoxSet>(spec.lower, spec.upper); break;
    case SetKind::Orthant: out = std::make_shared<OrthantSet>(spec.n); break;
    case SetKind::L2Ball: out = std::make_shared<L2BallSet>(spec.n, spec.radius); break;
    case SetKind::L1Ball: out = std::make_shared<L1BallSet>(spec.n); break;
    case SetKind::Simplex: out = std::make_shared<SimplexSet>(spec.n); break;
    case SetKind::L0Ball: out = std::make_shared<L0BallSet>(spec.n, spec.count); break;
    case SetKind::LqBall: out = std::make_shared<LqBallSet>(spec.n, spec.q); break;
    case SetKind::SpectralBall: out = std::make_shared<SpectralBallSet>(spec.rows, spec.cols); break;
    case SetKind::PsdCone: out = std::make_shared<PsdConeSet>(spec.rows); break;
    case SetKind::PsdSpectral: out = std::make_shared<PsdSpectralSet>(spec.rows); break;
    case SetKind::LowRankVariety:
      out = std::make_shared<LowRankVarietySet>(spec.rows, spec.cols, spec.rank);
      break;
    case SetKind::SymLowRank: out = std::make_shared<SymLowRankSet>(spec.rows, spec.rank); break;
    case SetKind::LowRankPsd: out = std::make_shared<LowRankPsdSet>(spec.rows, spec.rank); break;
  }
  out->rho_test = spec.rho_test;
  return out;
}

// ---------------------------------------------------------------------------
// Box

BoxSet::BoxSet(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || !((upper_ - lower_).array() > 0).all())
    throw Error(ErrorCode::Configuration, "Box: need l < u componentwise");
}

Projection BoxSet::project(const Vector& z, double) const {
  return {project_box(z, lower_, upper_), 0.0, true};
}

bool BoxSet::contains(const Vector& x, double tol) const {
  return x.size() == dim() && (x.array() >= lower_.array() - tol).all() &&
         (x.array() <= upper_.array() + tol).all();
}

Vector BoxSet::weights(const Vector& x) const {
  return ((x - lower_).array() * (upper_ - x).array()).cwiseMax(0.0).matrix();
}

Vector BoxSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  return weights(x).cwiseProduct(v);
}

std::optional<std::vector<Vector>> BoxSet::normal_generators(const Vector& x) const {
  std::vector<Vector> out;
  for (Index i = 0; i < dim(); ++i) {
    const double width = upper_(i) - lower_(i);
    if (x(i) - lower_(i) <= kActiveTol * width || upper_(i) - x(i) <= kActiveTol * width)
      out.push_back(unit(dim(), i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orthant

Projection OrthantSet::project(const Vector& z, double) const {
  return {project_orthant(z), 0.0, true};
}

bool OrthantSet::contains(const Vector& x, double tol) const {
  return x.size() == n_ && (x.array() >= -tol).all();
}

Vector OrthantSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  return x.cwiseMax(0.0).cwiseProduct(v);
}

std::optional<std::vector<Vector>> OrthantSet::normal_generators(const Vector& x) const {
  std::vector<Vector> out;
  for (Index i = 0; i < n_; ++i)
    if (x(i) <= kActiveTol) out.push_back(unit(n_, i));
  return out;
}

// ---------------------------------------------------------------------------
// L2 ball

Projection L2BallSet::project(const Vector& z, double) const {
  return {project_l2_ball(z, radius_), 0.0, true};
}

bool L2BallSet::contains(const Vector& x, double tol) const {
  return x.size() == n_ && x.norm() <= radius_ + tol;
}

Vector L2BallSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  return v - x * (x.dot(v) / (radius_ * radius_));
}

std::optional<std::vector<Vector>> L2BallSet::normal_generators(const Vector& x) const {
  std::vector<Vector> out;
  if (std::abs(x.norm() - radius_) <= kActiveTol * radius_) out.push_back(x);
  return out;
}

// ---------------------------------------------------------------------------
// L1 ball

Projection L1BallSet::project(const Vector& z, double) const {
  return {project_l1_ball(z, 1.0), 0.0, true};
}

bool L1BallSet::contains(const Vector& x, double tol) const {
  return x.size() == n_ && x.lpNorm<1>() <= 1.0 + tol;
}

Vector L1BallSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  const double slack = 1.0 - x.lpNorm<1>();
  return x.cwiseAbs().cwiseProduct(v) - x * x.dot(v) + slack * v;
}

std::optional<std::vector<Vector>> L1BallSet::normal_generators(const Vector& x) const {
  std::vector<Vector> out;
  if (std::abs(x.lpNorm<1>() - 1.0) > kActiveTol) return out;
  out.push_back(sign_of(x));
  for (Index i = 0; i < n_; ++i)
    if (x(i) == 0.0) out.push_back(unit(n_, i));
  return out;
}

// ---------------------------------------------------------------------------
// Probability simplex

Projection SimplexSet::project(const Vector& z, double) const {
  return {project_simplex(z, 1.0), 0.0, true};
}

bool SimplexSet::contains(const Vector& x, double tol) const {
  return x.size() == n_ && (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol;
}

Vector SimplexSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  return x.cwiseProduct(v) - x * x.dot(v);
}

std::optional<std::vector<Vector>> SimplexSet::normal_generators(const Vector& x) const {
  std::vector<Vector> out;
  out.push_back(Vector::Ones(n_));
  for (Index i = 0; i < n_; ++i)
    if (x(i) <= kActiveTol) out.push_back(unit(n_, i));
  return out;
}

// ---------------------------------------------------------------------------
// L0 ball

Projection L0BallSet::project(const Vector& z, double) const {
  return {project_l0_ball(z, count_), 0.0, true};
}

bool L0BallSet::contains(const Vector& x, double tol) const {
  if (x.size() != n_) return false;
  Index nnz = 0;
  for (Index i = 0; i < n_; ++i) nnz += std::abs(x(i)) > tol;
  return nnz <= count_;
}

Vector L0BallSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  return x.cwiseAbs2().cwiseProduct(v);
}

// ---------------------------------------------------------------------------
// Lq ball

LqProjectionResult project_lq_ball(const Vector& z, double q, double tol, int max_iters) {
  LqProjectionResult out;
  if (lq_power(z, q) <= 1.0) {
    out.point = z;
    return out;
  }
  constexpr double kEpsFloor = 1e-12;
  const double stop_tol = std::max(tol, 1e-14);
  const Index n = z.size();
  const Vector mag = z.cwiseAbs();
  Vector y = z;
  Vector w(n), s(n);

  auto image = [&](double lambda, Vector& dst) {
    for (Index i = 0; i < n; ++i) dst(i) = std::max(mag(i) - lambda * w(i), 0.0);
  };

  out.converged = false;
  for (int t = 0; t < max_iters; ++t) {
    const double eps = std::max(1e-3 * std::pow(0.5, t), kEpsFloor);
    for (Index i = 0; i < n; ++i) w(i) = q * std::pow(std::abs(y(i)) + eps, q - 1.0);

    // sum |s_i(lambda)|^q decreases in lambda; keep hi on the feasible side.
    double lo = 0.0;
    double hi = 0.0;
    for (Index i = 0; i < n; ++i) hi = std::max(hi, mag(i) / w(i));
    for (int b = 0; b < 200; ++b) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      image(mid, s);
      if (lq_power(s, q) > 1.0) lo = mid;
      else hi = mid;
    }
    image(hi, s);
    Vector next(n);
    for (Index i = 0; i < n; ++i) next(i) = z(i) < 0 ? -s(i) : s(i);

    out.error = (next - y).norm();
    out.iterations = t + 1;
    y = std::move(next);
    if (out.error <= stop_tol && eps <= kEpsFloor) {
      out.converged = true;
      break;
    }
  }
  out.point = std::move(y);
  return out;
}

Projection LqBallSet::project(const Vector& z, double tol) const {
  auto r = project_lq_ball(z, q_, tol);
  return {std::move(r.point), r.error, r.converged};
}

bool LqBallSet::contains(const Vector& x, double tol) const {
  return x.size() == n_ && lq_power(x, q_) <= 1.0 + tol;
}

Vector LqBallSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  const double slack = 1.0 - lq_power(x, q_);
  Vector diag = x.cwiseAbs().unaryExpr([this](double a) { return a > 0 ? std::pow(a, 2.0 - q_) : 0.0; });
  return diag.cwiseProduct(v) - x * x.dot(v) + slack * v;
}

std::optional<std::vector<Vector>> LqBallSet::normal_generators(const Vector& x) const {
  std::vector<Vector> out;
  if (std::abs(lq_power(x, q_) - 1.0) > kActiveTol) return out;
  Vector u = Vector::Zero(n_);
  for (Index i = 0; i < n_; ++i)
    if (x(i) != 0.0) u(i) = std::pow(std::abs(x(i)), q_ - 1.0) * (x(i) > 0 ? 1.0 : -1.0);
  out.push_back(u);
  for (Index i = 0; i < n_; ++i)
    if (x(i) == 0.0) out.push_back(unit(n_, i));
  return out;
}

double LqBallSet::distance(const Vector& y) const {
  const double power = lq_power(y, q_);
  if (power <= 1.0) return 0.0;
  // Radial rescaling onto the boundary is always feasible.
  const double radial = (1.0 - std::pow(power, -1.0 / q_)) * y.norm();
  const auto proj = project_lq_ball(y, q_, 1e-13);
  return std::min(radial, (y - proj.point).norm());
}

// ---------------------------------------------------------------------------
// Matrix sets

Matrix MatrixSet::unflatten(const Vector& x) const {
  return Eigen::Map<const RowMatrix>(x.data(), rows_, cols_);
}

Vector MatrixSet::flatten(const Matrix& m) const {
  RowMatrix r = m;
  return Eigen::Map<const Vector>(r.data(), r.size());
}

Projection SpectralBallSet::project(const Vector& z, double) const {
  return {flatten(project_spectral_ball(unflatten(z))), 0.0, true};
}

bool SpectralBallSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  Eigen::BDCSVD<Matrix> svd(unflatten(x));
  return svd.singularValues()(0) <= 1.0 + tol;
}

Vector SpectralBallSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  const Matrix X = unflatten(x);
  const Matrix Y = unflatten(v);
  return flatten(Y - X * symmetrize(X.transpose() * Y));
}

std::optional<std::vector<Vector>> SpectralBallSet::normal_generators(const Vector& x) const {
  const Matrix X = unflatten(x);
  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Index active = 0;
  while (active < svd.singularValues().size() && svd.singularValues()(active) >= 1.0 - kActiveTol)
    ++active;
  std::vector<Vector> out;
  const Matrix Ua = svd.matrixU().leftCols(active);
  const Matrix Va = svd.matrixV().leftCols(active);
  for (Index a = 0; a < active; ++a)
    for (Index b = a; b < active; ++b) {
      Matrix S = Matrix::Zero(active, active);
      S(a, b) += 0.5;
      S(b, a) += 0.5;
      out.push_back(flatten(Ua * S * Va.transpose()));
    }
  return out;
}

double SymmetricMatrixSet::scale(const Matrix& X) { return std::max(1.0, X.norm()); }

std::optional<std::vector<Vector>> SymmetricMatrixSet::normal_generators(const Vector& x) const {
  const Index s = rows_;
  const Matrix X = symmetrize(unflatten(x));
  std::vector<Vector> out;
  for (Index i = 0; i < s; ++i)
    for (Index j = i + 1; j < s; ++j) {
      Matrix K = Matrix::Zero(s, s);
      K(i, j) = 1.0;
      K(j, i) = -1.0;
      out.push_back(flatten(K));
    }
  for (const Matrix& U : normal_bases(X)) {
    const Index k = U.cols();
    for (Index a = 0; a < k; ++a)
      for (Index b = a; b < k; ++b) {
        const Matrix S = 0.5 * (U.col(a) * U.col(b).transpose() + U.col(b) * U.col(a).transpose());
        out.push_back(flatten(S));
      }
  }
  return out;
}

namespace {

bool is_symmetric(const Matrix& X, double tol) {
  return (X - X.transpose()).norm() <= tol * std::max(1.0, X.norm());
}

// Eigenvectors whose eigenvalues satisfy pred, in ascending eigenvalue order.
template <class Pred>
Matrix eigvec_block(const Matrix& X, Pred&& pred) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(X);
  std::vector<Index> idx;
  for (Index i = 0; i < X.rows(); ++i)
    if (pred(eig.eigenvalues()(i))) idx.push_back(i);
  Matrix U(X.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) U.col(static_cast<Index>(k)) = eig.eigenvectors().col(idx[k]);
  return U;
}

}  // namespace

// PSD cone

Projection PsdConeSet::project(const Vector& z, double) const {
  return {flatten(project_psd(unflatten(z))), 0.0, true};
}

bool PsdConeSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  const Matrix X = unflatten(x);
  if (!is_symmetric(X, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(X), Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0) >= -tol * scale(X);
}

Vector PsdConeSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  const Matrix X = symmetrize(unflatten(x));
  const Matrix S = symmetrize(unflatten(v));
  return flatten(0.5 * (X * S + S * X));
}

Matrix PsdConeSet::apply_q_columns(const Vector& x, const Matrix& V) const {
  const Matrix X = symmetrize(unflatten(x));
  Matrix out(V.rows(), V.cols());
  for (Index j = 0; j < V.cols(); ++j) {
    const Matrix S = symmetrize(unflatten(V.col(j)));
    out.col(j) = flatten(0.5 * (X * S + S * X));
  }
  return out;
}

std::optional<Matrix> PsdConeSet::structured_gram(const Vector& x, const SparseMatrix& J) const {
  // <A, (X S_B + S_B X)/2> = tr(S_A X S_B) for symmetric S_A, S_B, so
  // G_ab = sum over entries (i,j) of S_A and (k,i) of S_B of S_A(i,j) X(j,k) S_B(k,i).
  const Index s = rows_;
  const Matrix X = symmetrize(unflatten(x));
  struct Entry {
    Index row, col;
    double value;
  };
  const Index p = J.cols();
  std::vector<std::vector<Entry>> sym(static_cast<std::size_t>(p));
  // bucket[i] holds (constraint, row k, value) for entries S_B(k, i).
  std::vector<std::vector<std::pair<Index, Entry>>> bucket(static_cast<std::size_t>(s));
  for (Index c = 0; c < p; ++c) {
    for (SparseMatrix::InnerIterator it(J, c); it; ++it) {
      const Index i = it.row() / s;
      const Index j = it.row() % s;
      const double v = 0.5 * it.value();
      sym[c].push_back({i, j, v});
      sym[c].push_back({j, i, v});
    }
    for (const Entry& e : sym[c]) bucket[static_cast<std::size_t>(e.col)].push_back({c, e});
  }
  Matrix G = Matrix::Zero(p, p);
  for (Index a = 0; a < p; ++a)
    for (const Entry& ea : sym[a])
      for (const auto& [b, eb] : bucket[static_cast<std::size_t>(ea.row)])
        G(a, b) += ea.value * X(ea.col, eb.row) * eb.value;
  return G;
}

std::vector<Matrix> PsdConeSet::normal_bases(const Matrix& X) const {
  const double t = kActiveTol * scale(X);
  return {eigvec_block(X, [t](double l) { return l <= t; })};
}

// PSD with spectral bound

Projection PsdSpectralSet::project(const Vector& z, double) const {
  return {flatten(project_psd_spectral(unflatten(z))), 0.0, true};
}

bool PsdSpectralSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  const Matrix X = unflatten(x);
  if (!is_symmetric(X, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(X), Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0) >= -tol && eig.eigenvalues()(rows_ - 1) <= 1.0 + tol;
}

Vector PsdSpectralSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  const Matrix X = symmetrize(unflatten(x));
  const Matrix S = symmetrize(unflatten(v));
  const Matrix C = Matrix::Identity(rows_, rows_) - X;
  return flatten(0.5 * (X * S * C + C * S * X));
}

Vector PsdSpectralSet::apply_q_one_sided(const Vector& x, const Vector& v) const {
  const Matrix X = symmetrize(unflatten(x));
  const Matrix S = symmetrize(unflatten(v));
  const Matrix C = Matrix::Identity(rows_, rows_) - X;
  return flatten(symmetrize(X * C * S));
}

std::vector<Matrix> PsdSpectralSet::normal_bases(const Matrix& X) const {
  return {eigvec_block(X, [](double l) { return l <= kActiveTol; }),
          eigvec_block(X, [](double l) { return l >= 1.0 - kActiveTol; })};
}

// Low-rank variety

Projection LowRankVarietySet::project(const Vector& z, double) const {
  return {flatten(project_low_rank(unflatten(z), rank_)), 0.0, true};
}

bool LowRankVarietySet::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  if (rank_ >= std::min(rows_, cols_)) return true;
  Eigen::BDCSVD<Matrix> svd(unflatten(x));
  const auto& sv = svd.singularValues();
  return sv(rank_) <= tol * std::max(1.0, sv(0));
}

Vector LowRankVarietySet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  const Matrix X = unflatten(x);
  const Matrix D = unflatten(v);
  return flatten(0.5 * (X * (X.transpose() * D) + (D * X.transpose()) * X));
}

Matrix LowRankVarietySet::apply_q_columns(const Vector& x, const Matrix& V) const {
  // Factor X = U S V^T once; each column then costs O(k m q).
  const Matrix X = unflatten(x);
  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Index k = 0;
  while (k < sv.size() && sv(k) > 1e-14 * sv(0)) ++k;
  const Matrix U = svd.matrixU().leftCols(k);
  const Matrix W = svd.matrixV().leftCols(k);
  const Vector s2 = sv.head(k).cwiseAbs2();
  Matrix out(V.rows(), V.cols());
  for (Index j = 0; j < V.cols(); ++j) {
    const Matrix D = unflatten(V.col(j));
    const Matrix left = U * (s2.asDiagonal() * (U.transpose() * D));
    const Matrix right = ((D * W) * s2.asDiagonal()) * W.transpose();
    out.col(j) = flatten(0.5 * (left + right));
  }
  return out;
}

std::optional<std::vector<Vector>> LowRankVarietySet::normal_generators(const Vector& x) const {
  const Matrix X = unflatten(x);
  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double t = kActiveTol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Index d = 0;
  while (d < sv.size() && sv(d) > t) ++d;
  const Matrix U2 = svd.matrixU().rightCols(rows_ - d);
  const Matrix V2 = svd.matrixV().rightCols(cols_ - d);
  std::vector<Vector> out;
  for (Index a = 0; a < U2.cols(); ++a)
    for (Index b = 0; b < V2.cols(); ++b) out.push_back(flatten(U2.col(a) * V2.col(b).transpose()));
  return out;
}

// Symmetric low rank

Projection SymLowRankSet::project(const Vector& z, double) const {
  return {flatten(project_sym_low_rank(unflatten(z), rank_)), 0.0, true};
}

bool SymLowRankSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  const Matrix X = unflatten(x);
  if (!is_symmetric(X, tol)) return false;
  if (rank_ >= rows_) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(X), Eigen::EigenvaluesOnly);
  Vector mags = eig.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
  return mags(rank_) <= tol * std::max(1.0, mags(0));
}

Vector SymLowRankSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  const Matrix X = symmetrize(unflatten(x));
  const Matrix X2 = X * X;
  const Matrix S = symmetrize(unflatten(v));
  return flatten(0.5 * (S * X2 + X2 * S));
}

std::vector<Matrix> SymLowRankSet::normal_bases(const Matrix& X) const {
  const double t = kActiveTol * scale(X);
  return {eigvec_block(X, [t](double l) { return std::abs(l) <= t; })};
}

// Low-rank PSD

Projection LowRankPsdSet::project(const Vector& z, double) const {
  return {flatten(project_low_rank_psd(unflatten(z), rank_)), 0.0, true};
}

bool LowRankPsdSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  const Matrix X = unflatten(x);
  if (!is_symmetric(X, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(X), Eigen::EigenvaluesOnly);
  const auto& l = eig.eigenvalues();
  const double t = tol * scale(X);
  if (l(0) < -t) return false;
  return rank_ >= rows_ || l(rows_ - 1 - rank_) <= t;
}

Vector LowRankPsdSet::apply_q_unchecked(const Vector& x, const Vector& v) const {
  const Matrix X = symmetrize(unflatten(x));
  const Matrix S = symmetrize(unflatten(v));
  return flatten(0.5 * (S * X + X * S));
}

std::vector<Matrix> LowRankPsdSet::normal_bases(const Matrix& X) const {
  const double t = kActiveTol * scale(X);
  return {eigvec_block(X, [t](double l) { return l <= t; })};
}

}  // namespace cdap
