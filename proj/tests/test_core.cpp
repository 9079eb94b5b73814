#include <doctest.h>

#include "cdap/problems.hpp"
#include "cdap/rng.hpp"
#include "cdap/sets.hpp"

using namespace cdap;

TEST_CASE("Gram matrix of the toy problem") {
  const ProblemInstance toy = gen_toy_orthant_affine();
  const GramSystem g = assemble_gram(toy.cs, *toy.set, toy.x0);
  REQUIRE(g.G.rows() == 1);
  CHECK(g.G(0, 0) == 2.0);
  CHECK(g.c(0) == 1.0);
}

TEST_CASE("Gram matrix is the plain normal matrix when Q is the identity") {
  // Box [-10, 10]^3 at the origin: q_i(0) = (0 + 10)(10 - 0) = 100, i.e. Q = 100 I.
  BoxSet box(Vector::Constant(3, -10), Vector::Constant(3, 10));
  Rng rng(1);
  const Matrix J = rng.normal_matrix(3, 2);
  ConstraintSystem cs{3, 2, [J](const Vector& x) { return Vector(J.transpose() * x); },
                      [J](const Vector&) { return J; }, {}};
  const GramSystem g = assemble_gram(cs, box, Vector::Zero(3));
  CHECK((g.G - 100.0 * J.transpose() * J).norm() < 1e-12);
}

TEST_CASE("PSD Gram entry for a single diagonal constraint") {
  PsdConeSet psd(2);
  const Vector I = (Vector(4) << 1, 0, 0, 1).finished();
  const Vector E11 = (Vector(4) << 1, 0, 0, 0).finished();
  ConstraintSystem cs{4, 1, [E11](const Vector& x) { return Vector::Constant(1, E11.dot(x) - 1); },
                      [E11](const Vector&) { return Matrix(E11); }, {}};
  const GramSystem g = assemble_gram(cs, psd, I);
  CHECK(g.G(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sparse and dense Gram paths agree on correlation instances") {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const ProblemInstance inst = gen_correlation(12, 0.3, seed);
    REQUIRE(inst.cs.has_sparse_jacobian());
    const GramSystem sparse = assemble_gram(inst.cs, *inst.set, inst.x0, GramPath::Sparse);
    const GramSystem dense = assemble_gram(inst.cs, *inst.set, inst.x0, GramPath::Dense);
    CHECK((sparse.G - dense.G).norm() <= 1e-12 * std::max(1.0, dense.G.norm()));
    CHECK(sparse.QJ.size() == 0);
    CHECK(sigma_min_symmetric(dense.G) >= 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(dense.G, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues()(0) >= -1e-10 * dense.G.norm());
    CHECK((dense.G - dense.G.transpose()).norm() == 0.0);
  }
}

TEST_CASE("assemble_gram rejects points outside the set") {
  const ProblemInstance toy = gen_toy_orthant_affine();
  CHECK_THROWS_AS(assemble_gram(toy.cs, *toy.set, Vector::Constant(2, -1.0)), Error);
}

TEST_CASE("solver configuration validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.tau(0.25) == 0.25);
  CHECK(cfg.tau(4.0) == 1.0);
  cfg.tau_rule = TauRule::Squared;
  CHECK(cfg.tau(0.5) == 0.25);
  CHECK(cfg.projection_tolerance(1e-3) == doctest::Approx(1e-12));
  CHECK(cfg.projection_tolerance(1e-8) == doctest::Approx(1e-16));
  for (auto bad : {+[](SolverConfig& c) { c.kappa = 1.0; }, +[](SolverConfig& c) { c.alpha = 0.0; },
                   +[](SolverConfig& c) { c.eta_max = -1.0; }, +[](SolverConfig& c) { c.tol = 0.0; },
                   +[](SolverConfig& c) { c.max_iters = -1; }}) {
    SolverConfig c;
    bad(c);
    CHECK_THROWS_AS(c.validate(), Error);
  }
  CHECK(tau_rule_from_string("t_squared") == TauRule::Squared);
  CHECK_THROWS_AS(tau_rule_from_string("cubic"), Error);
}

TEST_CASE("random source is reproducible") {
  Rng a(42), b(42), c(43);
  const Vector va = a.normal_vector(16), vb = b.normal_vector(16), vc = c.normal_vector(16);
  CHECK(va == vb);
  CHECK(va != vc);
  Rng u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}
