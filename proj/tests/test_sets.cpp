#include <doctest.h>

#include "assumption_checks.hpp"
#include "set_samplers.hpp"

#include "cdap/projections.hpp"
#include "cdap/sets.hpp"

using namespace cdap;
using namespace cdap::testing;

namespace {

Vector flat(const Matrix& m) {
  RowMatrix r = m;
  return Eigen::Map<const Vector>(r.data(), r.size());
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("projection examples") {
  SUBCASE("PSD cone clamps the negative eigenvalue") {
    PsdConeSet psd(2);
    const Vector y = psd.project(flat(Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix()), 0).point;
    CHECK((y - flat(Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix())).norm() < 1e-14);
  }
  SUBCASE("l1 ball soft-thresholds and satisfies the KKT conditions") {
    L1BallSet ball(2);
    const Vector z = vec({0.6, 0.6});
    const Vector y = ball.project(z, 0).point;
    CHECK(y(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(y(1) == doctest::Approx(0.5).epsilon(1e-14));
    // KKT: y = sign(z) max(|z| - theta, 0) with a common theta >= 0 and ||y||_1 = 1.
    const double theta = z(0) - y(0);
    CHECK(theta >= 0);
    CHECK(z(1) - y(1) == doctest::Approx(theta));
    CHECK(y.lpNorm<1>() == doctest::Approx(1.0));
  }
  SUBCASE("rank-one projection keeps the top singular value") {
    LowRankVarietySet lr(2, 2, 1);
    const Vector y = lr.project(flat(Eigen::Vector2d(3, 1).asDiagonal().toDenseMatrix()), 0).point;
    CHECK((y - vec({3, 0, 0, 0})).norm() < 1e-12);
  }
  SUBCASE("one-dimensional lq ball is [-1, 1]") {
    LqBallSet lq(1, 0.5);
    const Projection p = lq.project(vec({1.7}), 1e-12);
    CHECK(p.point(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.converged);
  }
  SUBCASE("simplex and box") {
    SimplexSet simplex(3);
    const Vector y = simplex.project(vec({0.5, 0.5, 0.5}), 0).point;
    CHECK((y - Vector::Constant(3, 1.0 / 3)).norm() < 1e-15);
    BoxSet box(vec({0, 0}), vec({1, 2}));
    CHECK((box.project(vec({-1, 3}), 0).point - vec({0, 2})).norm() == 0.0);
  }
  SUBCASE("l0 ball keeps the largest magnitudes, ties by index") {
    L0BallSet l0(4, 2);
    CHECK((l0.project(vec({1, -3, 1, 2}), 0).point - vec({0, -3, 0, 2})).norm() == 0.0);
    CHECK((l0.project(vec({1, 1, 1, 0}), 0).point - vec({1, 1, 0, 0})).norm() == 0.0);
  }
}

TEST_CASE("projective mapping examples") {
  SUBCASE("PSD cone: Q(X) vanishes on the normal direction") {
    PsdConeSet psd(2);
    const Vector X = vec({1, 0, 0, 0});
    const Vector v = vec({0, 0, 0, 1});
    CHECK(psd.apply_q(X, v).norm() == 0.0);
  }
  SUBCASE("orthant: Q(x) = Diag(x)") {
    OrthantSet orth(2);
    CHECK((orth.apply_q(vec({2, 0}), vec({1, 1})) - vec({2, 0})).norm() == 0.0);
  }
  SUBCASE("lq ball: Q(x) u(x) = 0 on the boundary") {
    Rng rng(3);
    LqBallSet lq(5, 0.5);
    SetSpec spec{.kind = SetKind::LqBall, .n = 5, .q = 0.5};
    for (int trial = 0; trial < 10; ++trial) {
      const Vector x = sample_point(spec, rng, true);
      Vector u = Vector::Zero(5);
      for (Index i = 0; i < 5; ++i)
        if (x(i) != 0) u(i) = std::pow(std::abs(x(i)), -0.5) * (x(i) > 0 ? 1 : -1);
      CHECK(lq.apply_q(x, u).norm() <= 1e-12 * u.norm());
    }
  }
  SUBCASE("low-rank variety operator form") {
    Rng rng(5);
    LowRankVarietySet lr(3, 4, 2);
    const Matrix X = lr.unflatten(lr.project(rng.normal_vector(12), 0).point);
    const Matrix D = rng.normal_matrix(3, 4);
    const Matrix expect = 0.5 * (X * X.transpose() * D + D * X.transpose() * X);
    CHECK((lr.apply_q(flat(X), flat(D)) - flat(expect)).norm() < 1e-12);
    // The factored multi-column path agrees with the direct formula.
    const Matrix V = rng.normal_matrix(12, 3);
    const Matrix cols = lr.apply_q_columns(flat(X), V);
    for (Index j = 0; j < 3; ++j)
      CHECK((cols.col(j) - lr.apply_q_unchecked(flat(X), V.col(j))).norm() < 1e-12);
  }
  SUBCASE("apply_q rejects points outside the set") {
    OrthantSet orth(2);
    CHECK_THROWS_AS(orth.apply_q(vec({-1, 0}), vec({1, 1})), Error);
    try {
      orth.apply_q(vec({-1, 0}), vec({1, 1}));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Precondition);
    }
  }
}

TEST_CASE("normal generator examples") {
  OrthantSet orth(2);
  auto g = orth.normal_generators(vec({2, 0}));
  REQUIRE(g);
  REQUIRE(g->size() == 1);
  CHECK(((*g)[0] - vec({0, 1})).norm() == 0.0);

  LowRankVarietySet lr(2, 2, 1);
  auto h = lr.normal_generators(vec({1, 0, 0, 0}));
  REQUIRE(h);
  REQUIRE(h->size() == 1);
  // +-E_22 depending on the SVD's sign convention.
  CHECK(((*h)[0].cwiseAbs() - vec({0, 0, 0, 1})).norm() < 1e-14);

  L2BallSet ball(3, 1.0);
  auto e = ball.normal_generators(vec({0.1, 0.2, 0.3}));
  REQUIRE(e);
  CHECK(e->empty());

  L0BallSet l0(3, 1);
  CHECK_FALSE(l0.normal_generators(vec({1, 0, 0})).has_value());
}

TEST_CASE("catalog properties on sampled points") {
  for (const auto& cc : catalog_cases()) {
    CAPTURE(cc.label);
    const auto set = make_set(cc.spec);
    Rng rng(101);
    for (int trial = 0; trial < 8; ++trial) {
      const bool boundary = trial % 2 == 0;
      const Vector x = sample_point(cc.spec, rng, boundary);
      REQUIRE(set->contains(x, 1e-10));

      Check psd = check_q_psd(*set, x);
      CHECK_MESSAGE(psd.ok, psd.detail);
      if (cc.spec.kind != SetKind::L0Ball) {
        Check ns = check_null_space(*set, x);
        CHECK_MESSAGE(ns.ok, ns.detail);
      }
      Check db = check_distance_bound(*set, x, rng);
      CHECK_MESSAGE(db.ok, db.detail);

      // Linearity in v.
      const Vector u = rng.normal_vector(set->dim()), v = rng.normal_vector(set->dim());
      const Vector lhs = set->apply_q(x, 2.0 * u - 3.0 * v);
      const Vector rhs = 2.0 * set->apply_q(x, u) - 3.0 * set->apply_q(x, v);
      CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST_CASE("projections are idempotent and optimal") {
  for (const auto& cc : catalog_cases()) {
    CAPTURE(cc.label);
    const auto set = make_set(cc.spec);
    Rng rng(202);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector z = sample_ambient(cc.spec, rng);
      const Vector y = set->project(z, 1e-13).point;
      CHECK(set->contains(y, 1e-10));
      CHECK((set->project(y, 1e-13).point - y).norm() <= 1e-12);
      if (!set->exact_projection()) continue;
      const double d = (z - y).norm();
      for (int k = 0; k < 100; ++k) {
        const Vector f = sample_point(cc.spec, rng, k % 2 == 0);
        CHECK(d <= (z - f).norm() + 1e-12);
      }
    }
  }
}

TEST_CASE("two-sided operator is needed for the PSD spectral set") {
  // X with eigenvalues {0, 1, 0.5}: the one-sided form X(I-X)S kills the
  // cross block between the 0- and 1-eigenspaces, which is not normal.
  PsdSpectralSet set(3);
  const Vector x = flat(Eigen::Vector3d(0, 1, 0.5).asDiagonal().toDenseMatrix());
  Matrix E = Matrix::Zero(3, 3);
  E(0, 1) = E(1, 0) = 1;
  CHECK(set.apply_q_one_sided(x, flat(E)).norm() == 0.0);
  CHECK(set.apply_q(x, flat(E)).norm() > 0.5);
  CHECK(check_null_space(set, x).ok);
}

TEST_CASE("lq projection reports a stalled inner solve") {
  Vector z = vec({1.3, -0.8, 0.4, 2.0});
  const auto full = project_lq_ball(z, 0.5, 1e-13);
  CHECK(full.converged);
  CHECK(lq_power(full.point, 0.5) <= 1.0);
  CHECK(lq_power(full.point, 0.5) >= 1.0 - 1e-9);
  const auto capped = project_lq_ball(z, 0.5, 1e-13, 2);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 2);
  CHECK(lq_power(capped.point, 0.5) <= 1.0);
}

TEST_CASE("catalog parameter validation") {
  CHECK_THROWS_AS(make_set({.kind = SetKind::L2Ball, .n = 3, .radius = 0.0}), Error);
  CHECK_THROWS_AS(make_set({.kind = SetKind::LqBall, .n = 3, .q = 1.5}), Error);
  CHECK_THROWS_AS(make_set({.kind = SetKind::LowRankVariety, .rows = 2, .cols = 3, .rank = 3}), Error);
  SetSpec box{.kind = SetKind::Box};
  box.lower = vec({0, 1});
  box.upper = vec({1, 1});
  CHECK_THROWS_AS(make_set(box), Error);
  CHECK(set_kind_from_string("PsdSpectral") == SetKind::PsdSpectral);
  CHECK_THROWS_AS(set_kind_from_string("Psd"), Error);
}
