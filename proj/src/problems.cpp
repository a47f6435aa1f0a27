#include "sesop/problems.hpp"

#include <cmath>
#include <iostream>

#include "sesop/oracle.hpp"
#include "sesop/rng.hpp"

namespace sesop {

namespace {

using kernels::axpy;
using kernels::dot;
using kernels::matvec;
using kernels::nrm2;

constexpr double kPowerIterTol = 1e-10;
constexpr int kPowerIterMin = 32;
constexpr int kPowerIterCap = 100000;

double power_iteration_lambda_max(const Matrix& a, Rng& rng) {
  const std::size_t n = a.rows;
  Vector v = sample_unit_sphere(n, rng);
  Vector w(n);
  double lambda_prev = 0.0;
  int stable = 0;
  for (int it = 0; it < kPowerIterCap; ++it) {
    matvec(a, v, w);
    const double lambda = dot(v, w);  // Rayleigh quotient, v unit
    if (it > 0 && std::abs(lambda - lambda_prev) <= kPowerIterTol * std::abs(lambda)) {
      if (++stable >= 3 && it >= kPowerIterMin) return lambda;
    } else {
      stable = 0;
    }
    lambda_prev = lambda;
    const double nw = nrm2(w);
    if (nw == 0.0) return 0.0;  // A v = 0 for unit v: A is singular in that direction
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
  }
  throw NumericError("power iteration did not converge within the iteration cap");
}

// Solves A x = rhs via Cholesky with two iterative-refinement passes.
// Returns false if the factorization fails.
bool solve_spd(const Matrix& a, const Vector& rhs, Vector& x) {
  Matrix chol = a;
  if (!kernels::cholesky_factor(chol)) return false;
  kernels::cholesky_solve(chol, rhs, x);
  Vector ax(a.rows), resid(a.rows), dx(a.rows);
  for (int pass = 0; pass < 2; ++pass) {
    matvec(a, x, ax);
    for (std::size_t i = 0; i < a.rows; ++i) resid[i] = rhs[i] - ax[i];
    kernels::cholesky_solve(chol, resid, dx);
    axpy(1.0, dx, x);
  }
  return true;
}

}  // namespace

double lipschitz_constant(const Matrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("lipschitz_constant: square matrix required");
  Rng rng(Rng::derive(0x5e50f, a.rows));
  const double lambda = power_iteration_lambda_max(a, rng);
  return 2.0 * lambda * (1.0 + 1e-7);
}

QuadraticProblem::QuadraticProblem(Matrix a, Vector b) {
  if (a.rows != a.cols || a.rows != b.size())
    throw std::invalid_argument("QuadraticProblem: A must be n x n matching b");
  double scale = 0.0, asym = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
      scale = std::max(scale, std::abs(a(i, j)));
    }
  for (std::size_t i = 0; i < a.rows; ++i) scale = std::max(scale, std::abs(a(i, i)));
  if (asym > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("QuadraticProblem: A is not symmetric");
  a_ = std::move(a);
  b_ = std::move(b);
  seed_ = 0;
  finish_setup(Rng::derive(0xd1f, a_.rows));
}

void QuadraticProblem::finish_setup(std::uint64_t x0_stream_seed) {
  Vector neg_b(b_.size());
  for (std::size_t i = 0; i < b_.size(); ++i) neg_b[i] = -b_[i];
  if (!solve_spd(a_, neg_b, opt_.x_star))
    throw NumericError("QuadraticProblem: A is not positive definite");
  opt_.f_star = dot(b_, opt_.x_star);  // f(x*) = b^T x* given A x* = -b

  Rng rng(x0_stream_seed);
  lipschitz_ = 2.0 * power_iteration_lambda_max(a_, rng) * (1.0 + 1e-7);
  if (!(lipschitz_ > 0.0)) throw NumericError("QuadraticProblem: L must be positive");

  // start point at unit distance from the optimum, so R = ||x* - x0|| = 1
  x0_ = opt_.x_star;
  axpy(1.0, sample_unit_sphere(b_.size(), rng), x0_);
}

QuadraticProblem QuadraticProblem::generate(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
  for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
    const std::uint64_t s = seed + attempt;
    Rng rng(s);
    Matrix b_mat(n, n);
    for (double& v : b_mat.data) v = rng.uniform_pm1();
    Vector b(n);
    for (double& v : b) v = rng.uniform_pm1();

    QuadraticProblem p;
    p.a_ = kernels::gram(b_mat);
    p.b_ = std::move(b);
    p.seed_ = s;

    Vector neg_b(n);
    for (std::size_t i = 0; i < n; ++i) neg_b[i] = -p.b_[i];
    if (!solve_spd(p.a_, neg_b, p.opt_.x_star)) {
      std::cerr << "generate_quadratic: singular draw at seed " << s
                << ", retrying with seed " << (s + 1) << "\n";
      continue;
    }
    p.opt_.f_star = dot(p.b_, p.opt_.x_star);
    p.lipschitz_ = 2.0 * power_iteration_lambda_max(p.a_, rng) * (1.0 + 1e-7);
    p.x0_ = p.opt_.x_star;
    axpy(1.0, sample_unit_sphere(n, rng), p.x0_);
    return p;
  }
  throw NumericError("generate_quadratic: no positive definite draw in 32 attempts");
}

// Both evaluations work with the deviation e = x - x*:
//   f(x) = f* + e^T A e,   grad f(x) = 2 A e.
// Algebraically identical to x^T A x + 2 b^T x, but free of the catastrophic
// cancellation that form suffers near the optimum when ||x*|| is large
// (near-singular A draws reach ||x*|| ~ 1e4 and beyond).
double QuadraticProblem::value(const Vector& x) const {
  Vector grad;
  return value_and_gradient(x, grad);
}

Vector QuadraticProblem::gradient(const Vector& x) const {
  Vector grad;
  value_and_gradient(x, grad);
  return grad;
}

double QuadraticProblem::value_and_gradient(const Vector& x, Vector& grad) const {
  if (x.size() != b_.size()) throw std::invalid_argument("QuadraticProblem: dimension mismatch");
  Vector e(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) e[i] = x[i] - opt_.x_star[i];
  Vector ae;
  matvec(a_, e, ae);
  const double f = opt_.f_star + dot(e, ae);
  grad.resize(ae.size());
  for (std::size_t i = 0; i < ae.size(); ++i) grad[i] = 2.0 * ae[i];
  return f;
}

void QuadraticProblem::apply_a(const Vector& x, Vector& y) const {
  if (x.size() != b_.size()) throw std::invalid_argument("QuadraticProblem: dimension mismatch");
  matvec(a_, x, y);
}

QuasarTestProblem::QuasarTestProblem(std::size_t n, std::uint64_t seed) : n_(n) {
  if (n < 1) throw std::invalid_argument("QuasarTestProblem: n must be >= 1");
  opt_.x_star.assign(n, 0.0);
  opt_.f_star = 0.0;
  Rng rng(seed);
  x0_.resize(n);
  for (double& v : x0_) v = 1.0 + 2.0 * rng.uniform01();
}

QuasarTestProblem::QuasarTestProblem(Vector x0) : n_(x0.size()), x0_(std::move(x0)) {
  if (n_ < 1) throw std::invalid_argument("QuasarTestProblem: n must be >= 1");
  opt_.x_star.assign(n_, 0.0);
  opt_.f_star = 0.0;
}

double QuasarTestProblem::value(const Vector& x) const {
  if (x.size() != n_) throw std::invalid_argument("QuasarTestProblem: dimension mismatch");
  double f = 0.0;
  for (double xi : x) {
    const double u = std::abs(xi);
    f += u * (1.0 - std::exp(-u));
  }
  return f;
}

Vector QuasarTestProblem::gradient(const Vector& x) const {
  Vector g;
  value_and_gradient(x, g);
  return g;
}

double QuasarTestProblem::value_and_gradient(const Vector& x, Vector& grad) const {
  if (x.size() != n_) throw std::invalid_argument("QuasarTestProblem: dimension mismatch");
  grad.resize(n_);
  double f = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double u = std::abs(x[i]);
    const double e = std::exp(-u);
    f += u * (1.0 - e);
    const double slope = 1.0 - e + u * e;
    grad[i] = (x[i] > 0.0) ? slope : (x[i] < 0.0 ? -slope : 0.0);
  }
  return f;
}

std::unique_ptr<Objective> make_problem(const std::string& type, std::size_t n,
                                        std::uint64_t seed) {
  if (type == "quadratic")
    return std::make_unique<QuadraticProblem>(QuadraticProblem::generate(n, seed));
  if (type == "quasar") return std::make_unique<QuasarTestProblem>(n, seed);
  throw std::invalid_argument("unknown problem type: " + type);
}

}  // namespace sesop
