#include <doctest.h>

#include "cdap/bregman.hpp"
#include "cdap/problems.hpp"
#include "cdap/rng.hpp"
#include "cdap/sets.hpp"

#include <cmath>

using namespace cdap;

namespace {

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

Vector interior_sample(const BregmanKernel& k, Rng& rng) {
  Vector x(k.dim());
  for (Index i = 0; i < x.size(); ++i)
    x(i) = k.kind() == KernelKind::Entropy ? 0.05 + 3 * rng.uniform() : 0.05 + 0.9 * rng.uniform();
  return x;
}

}  // namespace

TEST_CASE("mirror maps invert each other") {
  Rng rng(1);
  for (const BregmanKernel& k : {BregmanKernel::entropy(5), BregmanKernel::fermi_dirac(5)}) {
    CAPTURE(k.name());
    for (int t = 0; t < 20; ++t) {
      const Vector x = interior_sample(k, rng);
      CHECK((k.inv_grad_phi(k.grad_phi(x)) - x).norm() <= 1e-14 * std::max(1.0, x.norm()));
      const Vector g = 3 * rng.normal_vector(5);
      CHECK((k.grad_phi(k.inv_grad_phi(g)) - g).norm() <= 1e-12 * std::max(1.0, g.norm()));
    }
  }
}

TEST_CASE("W_phi is the inverse Hessian") {
  Rng rng(2);
  for (const BregmanKernel& k : {BregmanKernel::entropy(4), BregmanKernel::fermi_dirac(4)}) {
    CAPTURE(k.name());
    for (int t = 0; t < 10; ++t) {
      const Vector x = interior_sample(k, rng);
      const Vector w = k.w_phi(x);
      for (Index i = 0; i < 4; ++i) {
        // Central difference of the gradient along e_i.
        const double h = 1e-6 * x(i);
        Vector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const Vector col = (k.grad_phi(xp) - k.grad_phi(xm)) / (2 * h);
        CHECK(col(i) * w(i) == doctest::Approx(1.0).epsilon(1e-6));
        for (Index j = 0; j < 4; ++j)
          if (j != i) CHECK(col(j) == 0.0);
      }
    }
  }
}

TEST_CASE("W_phi equals the projective mapping of the domain") {
  Rng rng(3);
  for (const BregmanKernel& k : {BregmanKernel::entropy(6), BregmanKernel::fermi_dirac(6)}) {
    CAPTURE(k.name());
    const WPhiSet w(k);
    for (int t = 0; t < 10; ++t) {
      Vector x = interior_sample(k, rng);
      if (t % 2) x(t % 6) = 0.0;  // a boundary point, where W_phi extends continuously
      const Vector v = rng.normal_vector(6);
      CHECK((w.apply_q(x, v) - k.domain_set()->apply_q(x, v)).norm() <= 1e-15 * v.norm());
    }
  }
}

TEST_CASE("Bregman divergence") {
  Rng rng(4);
  for (const BregmanKernel& k : {BregmanKernel::entropy(3), BregmanKernel::fermi_dirac(3)}) {
    const Vector x = interior_sample(k, rng), y = interior_sample(k, rng);
    CHECK(k.divergence(x, x) == doctest::Approx(0.0));
    CHECK(k.divergence(y, x) > 0.0);
  }
}

TEST_CASE("Bregman step on the toy problem") {
  const ProblemInstance toy = gen_toy_orthant_affine();
  const BregmanKernel k = BregmanKernel::entropy(2);
  SolverConfig cfg;
  const Vector x = vec2(2, 0.5);
  const BregmanStep s = bregman_step(toy.cs, k, x, cfg);
  // c = 1.5, G = 2.5, tau = 1, y = 3/7, d = (3/7, 3/7), x+ = x exp(-3/7).
  CHECK((s.d_vec - vec2(3.0 / 7, 3.0 / 7)).norm() < 1e-15);
  const Vector expect = x * std::exp(-3.0 / 7);
  CHECK((s.point - expect).norm() <= 1e-12);
  CHECK_FALSE(s.clamped);

  SUBCASE("feasible point is fixed") {
    const Vector f = vec2(0.25, 0.75);
    CHECK(bregman_step(toy.cs, k, f, cfg).point == f);
  }
  SUBCASE("the step minimizes <d, y> + D_phi(y, x)") {
    double best = std::numeric_limits<double>::infinity();
    Vector arg;
    for (int i = 1; i <= 400; ++i)
      for (int j = 1; j <= 400; ++j) {
        const Vector y = vec2(0.01 * i, 0.005 * j);
        const double v = s.d_vec.dot(y) + k.divergence(y, x);
        if (v < best) best = v, arg = y;
      }
    CHECK((arg - s.point).norm() <= 0.01);
    CHECK(s.d_vec.dot(s.point) + k.divergence(s.point, x) <= best + 1e-12);
  }
  SUBCASE("boundary points are rejected") {
    CHECK_THROWS_AS(bregman_step(toy.cs, k, vec2(2, 0), cfg), Error);
    const SolveResult r = solve_bregman(toy.cs, k, vec2(2, 0), cfg);
    CHECK(r.trace.status == Status::DomainViolation);
    CHECK(r.trace.iterations() == 0);
  }
}

TEST_CASE("Bregman iterates near the upper bound are clamped into the box") {
  const BregmanKernel k = BregmanKernel::fermi_dirac(1);
  ConstraintSystem cs;
  cs.n = 1;
  cs.p = 1;
  cs.eval = [](const Vector& x) { return Vector::Constant(1, x(0) - 2); };
  cs.jacobian = [](const Vector&) { return Matrix::Ones(1, 1); };
  const Vector x = Vector::Constant(1, std::nextafter(1.0, 0.0));
  const BregmanStep s = bregman_step(cs, k, x, SolverConfig{});
  CHECK(s.clamped);
  CHECK(k.interior(s.point));
}

TEST_CASE("Bregman solver") {
  SolverConfig cfg;
  SUBCASE("toy problem has a quadratic tail") {
    const ProblemInstance toy = gen_toy_orthant_affine();
    const SolveResult r = solve_bregman(toy.cs, BregmanKernel::entropy(2), vec2(2, 0.5), cfg);
    CHECK(r.trace.status == Status::Converged);
    const auto res = r.trace.residuals();
    REQUIRE(res.size() >= 4);
    for (std::size_t i = res.size() - 3; i + 1 < res.size(); ++i)
      if (res[i + 1] > 0) CHECK(res[i + 1] / (res[i] * res[i]) < 10.0);
  }
  SUBCASE("qp instance from a nearby interior point") {
    const ProblemInstance qp = gen_qp_orthant(20, 2, 0);
    Rng rng(11);
    const Vector noise = rng.normal_vector(20);
    const Vector x0 = qp.x_ref.cwiseProduct((0.05 * noise).array().exp().matrix());
    const BregmanKernel k = BregmanKernel::entropy(20);
    const SolveResult r = solve_bregman(qp.cs, k, x0, cfg);
    CHECK(r.trace.status == Status::Converged);
    CHECK(r.trace.iterations() <= 10);
    CHECK(k.interior(r.x));

    const SolveResult f = solve_bregman(qp.cs, k, qp.x_ref, cfg);
    CHECK(f.trace.status == Status::Converged);
    CHECK(f.trace.iterations() == 0);
  }
}

TEST_CASE("Bregman and Euclidean steps agree to second order") {
  const ProblemInstance qp = gen_qp_orthant(20, 3, 1);
  const BregmanKernel k = BregmanKernel::entropy(20);
  SolverConfig cfg;
  Rng rng(5);
  const Vector dir = rng.normal_vector(20);
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const Vector x = qp.x_ref.cwiseProduct((t * dir).array().exp().matrix());
    const double c = qp.cs.eval(x).norm();
    const Vector diff = bregman_step(qp.cs, k, x, cfg).point - ap_step(qp.cs, *qp.set, x, cfg);
    CAPTURE(t);
    CHECK(diff.norm() <= 10.0 * c * c);
  }
}

TEST_CASE("push_to_interior") {
  const Vector x = (Vector(3) << 0.0, 0.5, 1.0).finished();
  const Vector e = push_to_interior(BregmanKernel::entropy(3), x);
  CHECK(e == (Vector(3) << 1e-8, 0.5, 1.0).finished());
  const Vector f = push_to_interior(BregmanKernel::fermi_dirac(3), x);
  CHECK(BregmanKernel::fermi_dirac(3).interior(f));
  CHECK(f(2) == 1.0 - 1e-8);
  CHECK(kernel_kind_from_string("fermi_dirac") == KernelKind::FermiDirac);
  CHECK_THROWS_AS(kernel_kind_from_string("burg"), Error);
}
