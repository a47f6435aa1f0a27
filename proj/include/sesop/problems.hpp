#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "sesop/kernels.hpp"

namespace sesop {

/// Thrown when a numeric routine fails (non-convergence, loss of
/// positive definiteness, and the like).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Optimum {
  Vector x_star;
  double f_star = 0.0;
};

/// Objective contract: value/gradient evaluation plus the constants the
/// convergence theory needs. Immutable after construction; safe to share
/// across threads.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;

  /// Fused evaluation; overridden where one pass computes both.
  virtual double value_and_gradient(const Vector& x, Vector& grad) const {
    grad = gradient(x);
    return value(x);
  }

  /// Upper bound on the gradient's Lipschitz constant.
  virtual double smoothness() const = 0;

  /// Quasar-convexity parameter gamma in (0, 1].
  virtual double quasar_gamma() const { return 1.0; }

  virtual const Optimum* optimum() const { return nullptr; }

  /// Default starting point for benchmark runs.
  virtual Vector start_point() const = 0;
};

/// f(x) = x^T A x + 2 b^T x with A symmetric positive definite.
/// grad f(x) = 2(A x + b), so L = 2 lambda_max(A).
class QuadraticProblem final : public Objective {
 public:
  /// Explicit construction (mostly for tests). Validates symmetry and
  /// positive definiteness; computes x*, f*, L and a start point at unit
  /// distance from x*.
  QuadraticProblem(Matrix a, Vector b);

  /// The random instance: A = B^T B and b with i.i.d. U[-1,1] entries
  /// drawn from rng(seed). Deterministic: (n, seed) reproduces the
  /// problem bit for bit. A singular draw falls back to seed+1 (logged).
  static QuadraticProblem generate(std::size_t n, std::uint64_t seed);

  std::size_t dim() const override { return b_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double value_and_gradient(const Vector& x, Vector& grad) const override;
  double smoothness() const override { return lipschitz_; }
  const Optimum* optimum() const override { return &opt_; }
  Vector start_point() const override { return x0_; }

  /// y = A x
  void apply_a(const Vector& x, Vector& y) const;

  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  std::uint64_t seed() const { return seed_; }

 private:
  QuadraticProblem() = default;
  void finish_setup(std::uint64_t x0_stream_seed);

  Matrix a_;
  Vector b_;
  Optimum opt_;
  double lipschitz_ = 0.0;
  Vector x0_;
  std::uint64_t seed_ = 0;
};

/// 2 * lambda_max(A) by power iteration (Rayleigh quotient, 1e-8 relative
/// or better), inflated by 1e-7 so the result upper-bounds the true
/// Lipschitz constant. Throws NumericError if the iteration cap is hit.
double lipschitz_constant(const Matrix& a);

/// Separable extension of the 1-quasar-convex example
/// f(x) = sum_i |x_i| (1 - exp(-|x_i|)); gamma = 1, x* = 0, f* = 0, L = 2.
class QuasarTestProblem final : public Objective {
 public:
  /// Start point with components i.i.d. U[1, 3] from rng(seed).
  QuasarTestProblem(std::size_t n, std::uint64_t seed);
  explicit QuasarTestProblem(Vector x0);

  std::size_t dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double value_and_gradient(const Vector& x, Vector& grad) const override;
  double smoothness() const override { return 2.0; }
  const Optimum* optimum() const override { return &opt_; }
  Vector start_point() const override { return x0_; }

 private:
  std::size_t n_;
  Optimum opt_;
  Vector x0_;
};

/// Factory keyed by the serialized problem reference (type, n, seed).
std::unique_ptr<Objective> make_problem(const std::string& type, std::size_t n,
                                        std::uint64_t seed);

}  // namespace sesop
