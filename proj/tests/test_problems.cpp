#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sesop/kernels.hpp"
#include "sesop/problems.hpp"
#include "sesop/rng.hpp"
#include "test_support.hpp"

using namespace sesop;

TEST_CASE("generated n=1 problem matches the scalar closed form") {
  const auto p = QuadraticProblem::generate(1, 12345);
  // draw order: B entry first, then b
  Rng rng(12345);
  const double beta = rng.uniform_pm1();
  const double beta_prime = rng.uniform_pm1();
  CHECK(p.a()(0, 0) == beta * beta);
  CHECK(p.b()[0] == beta_prime);
  CHECK(p.optimum()->x_star[0] ==
        doctest::Approx(-beta_prime / (beta * beta)).epsilon(1e-12));
  CHECK(p.optimum()->f_star ==
        doctest::Approx(-beta_prime * beta_prime / (beta * beta)).epsilon(1e-12));
}

TEST_CASE("n=500 seed 0 generates a usable instance") {
  const auto p = QuadraticProblem::generate(500, 0);
  CHECK(p.smoothness() > 0.0);
  // A is PSD on probes: Rayleigh quotients stay nonnegative
  Rng rng(1);
  Vector v(500), av;
  for (int probe = 0; probe < 20; ++probe) {
    for (double& x : v) x = rng.uniform_pm1();
    p.apply_a(v, av);
    CHECK(kernels::dot(v, av) >= -1e-10 * kernels::dot(v, v));
  }
  // start point sits at unit distance from the optimum
  const Vector x0 = p.start_point();
  double r = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double d = x0[i] - p.optimum()->x_star[i];
    r += d * d;
  }
  CHECK(std::sqrt(r) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("optimum survives coordinate probes (n=50 seed 7)") {
  const auto p = QuadraticProblem::generate(50, 7);
  const Vector& xs = p.optimum()->x_star;
  const double fs = p.value(xs);
  Vector probe = xs;
  for (std::size_t j = 0; j < 50; ++j) {
    for (double h : {1e-3, -1e-3}) {
      probe[j] = xs[j] + h;
      CHECK(p.value(probe) >= fs - 1e-12 * std::abs(fs));
      probe[j] = xs[j];
    }
  }
}

TEST_CASE("quadratic evaluation identities") {
  const Matrix eye = Matrix::identity(3);
  const QuadraticProblem p(eye, {0, 0, 0});
  CHECK(p.value({1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  const Vector g = p.gradient({0.5, -2.0, 3.0});
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(-4.0));
  CHECK(g[2] == doctest::Approx(6.0));
  CHECK(p.value(p.optimum()->x_star) == doctest::Approx(p.optimum()->f_star));
}

TEST_CASE("quadratic value matches the naive double loop") {
  const auto p = QuadraticProblem::generate(30, 11);
  Rng rng(77);
  Vector x(30);
  for (int trial = 0; trial < 25; ++trial) {
    for (double& v : x) v = 3.0 * rng.uniform_pm1();
    const double naive = test_support::naive_quadratic_value(p.a(), p.b(), x);
    CHECK(p.value(x) == doctest::Approx(naive).epsilon(1e-10));
  }
}

TEST_CASE("quadratic gradient: zero at optimum, matches finite differences") {
  const auto p = QuadraticProblem::generate(12, 3);
  const Vector g_star = p.gradient(p.optimum()->x_star);
  CHECK(kernels::nrm2(g_star) <= 1e-9 * (1.0 + kernels::nrm2(p.b())));

  Rng rng(4);
  Vector x(12);
  for (double& v : x) v = rng.uniform_pm1();
  const Vector g = p.gradient(x);
  const Vector fd = test_support::fd_gradient(p, x);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(g[i] == doctest::Approx(fd[i]).epsilon(1e-4));
}

TEST_CASE("smoothness constant examples") {
  CHECK(QuadraticProblem(Matrix::identity(3), {0, 0, 0}).smoothness() ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK(QuadraticProblem(Matrix::diagonal({1.0, 4.0}), {0, 0}).smoothness() ==
        doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("smoothness matches a dense eigensolver oracle") {
  for (std::uint64_t seed : {2, 9, 31}) {
    const auto p = QuadraticProblem::generate(16, seed);
    const double reference = 2.0 * test_support::max_eigenvalue(p.a());
    CHECK(p.smoothness() == doctest::Approx(reference).epsilon(1e-6));
  }
}

TEST_CASE("smoothness upper-bounds gradient differences statistically") {
  const auto p = QuadraticProblem::generate(40, 5);
  const double big_l = p.smoothness();
  Rng rng(6);
  Vector x(40), y(40);
  for (int trial = 0; trial < 1000; ++trial) {
    for (double& v : x) v = 2.0 * rng.uniform_pm1();
    for (double& v : y) v = 2.0 * rng.uniform_pm1();
    const Vector gx = p.gradient(x), gy = p.gradient(y);
    double dg = 0.0, dx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      dg += (gx[i] - gy[i]) * (gx[i] - gy[i]);
      dx += (x[i] - y[i]) * (x[i] - y[i]);
    }
    CHECK(std::sqrt(dg) <= big_l * std::sqrt(dx) * (1.0 + 1e-9));
  }
}

TEST_CASE("quadratic problems satisfy the quasar inequality with gamma=1") {
  const auto p = QuadraticProblem::generate(25, 8);
  const Vector& xs = p.optimum()->x_star;
  const double fs = p.optimum()->f_star;
  Rng rng(9);
  Vector x(25);
  for (int trial = 0; trial < 1000; ++trial) {
    for (double& v : x) v = 4.0 * rng.uniform_pm1();
    const Vector g = p.gradient(x);
    double ip = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ip += g[i] * (xs[i] - x[i]);
    const double fx = p.value(x);
    CHECK(fs >= fx + ip - 1e-9 * (std::abs(fs) + std::abs(fx)));
  }
}

TEST_CASE("generation is deterministic per (n, seed)") {
  const auto p1 = QuadraticProblem::generate(20, 42);
  const auto p2 = QuadraticProblem::generate(20, 42);
  CHECK(p1.a().data == p2.a().data);
  CHECK(p1.b() == p2.b());
  CHECK(p1.start_point() == p2.start_point());
  CHECK(p1.smoothness() == p2.smoothness());
}

TEST_CASE("explicit constructor validates inputs") {
  Matrix asym(2, 2);
  asym(0, 0) = 1.0;
  asym(0, 1) = 0.5;
  asym(1, 0) = -0.5;
  asym(1, 1) = 1.0;
  CHECK_THROWS_AS(QuadraticProblem(asym, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(QuadraticProblem(Matrix::diagonal({1.0, 0.0}), {1, 1}), NumericError);
  CHECK_THROWS_AS(QuadraticProblem(Matrix::identity(3), {0, 0}), std::invalid_argument);
}

TEST_CASE("quasar problem: value, gradient, minimizer") {
  const QuasarTestProblem p(Vector{0.0, 0.0, 0.0});
  Vector g;
  CHECK(p.value_and_gradient({0, 0, 0}, g) == 0.0);
  CHECK(kernels::nrm2(g) == 0.0);

  const QuasarTestProblem q(Vector{2.0});
  for (double t : {0.3, 1.7, 4.2, -0.9, -3.3}) {
    const Vector fd = test_support::fd_gradient(q, {t}, 1e-6);
    CHECK(q.gradient({t})[0] == doctest::Approx(fd[0]).epsilon(1e-6));
  }
}

TEST_CASE("quasar problem is nonnegative and 1-quasar-convex") {
  const QuasarTestProblem p(8, 21);
  Rng rng(13);
  Vector x(8);
  for (int trial = 0; trial < 1000; ++trial) {
    for (double& v : x) v = 5.0 * rng.uniform_pm1();
    const double fx = p.value(x);
    CHECK(fx >= 0.0);
    // f* = 0 >= f(x) + <grad, x* - x> = f(x) - <grad, x>
    const Vector g = p.gradient(x);
    CHECK(kernels::dot(g, x) >= fx - 1e-12);
  }
}

TEST_CASE("quasar start point components lie in [1,3]") {
  const QuasarTestProblem p(50, 77);
  for (double v : p.start_point()) {
    CHECK(v >= 1.0);
    CHECK(v <= 3.0);
  }
}

TEST_CASE("make_problem dispatches and validates") {
  CHECK(make_problem("quadratic", 5, 1)->dim() == 5);
  CHECK(make_problem("quasar", 6, 1)->dim() == 6);
  CHECK_THROWS_AS(make_problem("cubic", 5, 1), std::invalid_argument);
}
