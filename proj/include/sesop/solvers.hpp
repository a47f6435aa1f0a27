#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

#include "sesop/kernels.hpp"
#include "sesop/omega.hpp"
#include "sesop/oracle.hpp"
#include "sesop/problems.hpp"
#include "sesop/trace.hpp"

namespace sesop {

/// The three search directions of iteration k:
///   d0 = g(x_k),  d1 = x_k - x0,  d2 = sum_{i<=k} omega_i g(x_i).
struct DirectionSet {
  Vector d0;
  Vector d1;
  Vector d2;
};

/// Owns the weighted-gradient accumulator and the omega sequence for one run.
class DirectionBuilder {
 public:
  explicit DirectionBuilder(std::size_t dim) : d2_(dim, 0.0) {}

  /// Folds g(x_k) into the accumulator (d2 += omega_k g) and returns the
  /// direction set for iteration k. Must be called once per k, in order.
  DirectionSet build(std::size_t k, const Vector& x, const Vector& x0, const Vector& g_xk);

  /// Accumulator state d2_{k-1} (before build(k) is called).
  const Vector& d2_accumulator() const { return d2_; }

  double omega_at(std::size_t k) { return omega_(k); }

 private:
  OmegaSequence omega_;
  Vector d2_;
};

/// The reduced 3-variable problem f_k(tau) = f(x_k + D_k tau).
/// For quadratic objectives carries the closed-form reduction
///   f_k(tau) = f_x + lin^T tau + tau^T H tau,  H = D^T A D, lin = D^T grad f(x).
struct SubspaceProblem {
  const Objective* f = nullptr;
  const Vector* x = nullptr;
  const DirectionSet* dirs = nullptr;
  double f_x = 0.0;
  std::array<double, 3> col_norm{};
  std::array<std::array<double, 3>, 3> gram{};  // D^T D

  bool has_reduced = false;
  std::array<std::array<double, 3>, 3> h{};
  std::array<double, 3> lin{};
  std::array<Vector, 3> a_dirs{};  // A d_j, kept for residual polishing
  const Vector* grad = nullptr;    // grad f(x)
};

SubspaceProblem make_subspace_problem(const Objective& f, const Vector& x,
                                      const DirectionSet& dirs, const Vector& grad,
                                      double f_x);

struct SubspaceSolution {
  std::array<double, 3> tau{};
  double f_min = 0.0;     // certified subspace minimum (quadratic path)
  double achieved = 0.0;  // f_k(tau)
  bool certified = false;
  int inner_iters = 0;
};

/// Thrown by the iterative subsolver when max_iters is exhausted before the
/// accuracy certificate holds; carries the best step found.
struct AccuracyError : std::runtime_error {
  AccuracyError(const std::string& msg, std::array<double, 3> tau_best)
      : std::runtime_error(msg), best_tau(tau_best) {}
  std::array<double, 3> best_tau;
};

/// Thrown when an iterate stops being finite; carries the trace so far.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& msg, Trace partial_trace)
      : std::runtime_error(msg), partial(std::move(partial_trace)) {}
  Trace partial;
};

/// Exact minimizer of the reduced quadratic: solves H tau = -lin/2 through an
/// eigenvalue-thresholded pseudo-inverse of the column-equilibrated system
/// (threshold 1e-12 * trace), which handles the rank-deficient cases (k = 0,
/// collinear directions) with the minimum-norm step. Requires the reduction;
/// throws NumericError if H has a significantly negative eigenvalue.
SubspaceSolution solve_subspace_exact_quadratic(const SubspaceProblem& sp);

/// Inexact solve with function-value accuracy delta4.
///
/// Quadratic objectives: the fixed-step gradient-descent trajectory from
/// tau = 0 (step 1/L_red, L_red = L * sigma_max(D)^2), evaluated in the
/// eigenbasis of the reduced Hessian, stopped at the first iterate where
///   (a) the gap against the exact solver's minimum is <= delta4,
///   (b) |<grad f(x + D tau), d^j>| <= sqrt(2 L ||d^j|| delta4) per column,
///   (c) |<grad f_k(tau), tau>| <= sqrt(2 L delta4 ||D tau||).
/// (b)/(c) keep the realized near-orthogonality within what the delta-linkage
/// estimates assume of a delta4-accurate solve; a gap-only stop can exceed
/// them by a factor ~sqrt(||d^j||). delta4 = 0 degenerates to the exact
/// solver.
///
/// General objectives: fixed-step gradient descent with step 1/L_red,
/// stopped when ||grad f_k(tau)||^2 <= 2 L_red delta4.
/// Throws AccuracyError if max_iters runs out first.
SubspaceSolution solve_subspace_iterative(const SubspaceProblem& sp, double delta4,
                                          int max_iters);

enum class SubsolverKind { exact, iterative };

struct SesopOptions {
  SubsolverKind subsolver = SubsolverKind::exact;
  double delta4 = 0.0;
  int max_inner_iters = 10000000;
};

/// Runs T iterations of the modified subspace method and records the full
/// diagnostic trace (records k = 0..T; one oracle call per iterate, shared by
/// d0 and the d2 accumulator). ip_d1/ip_d2 are measured with the true
/// gradient at the new iterate against the previous directions.
Trace run_sesop(const Objective& f, GradientOracle& oracle, const SesopOptions& opt,
                std::size_t iterations, const Vector* x0_override = nullptr);

/// Similar Triangles Method baseline with inexact gradient:
///   alpha_{k+1} = (k+2)/(2L), A_{k+1} = A_k + alpha_{k+1},
///   y_{k+1} = (alpha_{k+1} u_k + A_k x_k)/A_{k+1},
///   u_{k+1} = u_k - alpha_{k+1} g(y_{k+1}),
///   x_{k+1} = (alpha_{k+1} u_{k+1} + A_k x_k)/A_{k+1}.
Trace run_stm(const Objective& f, GradientOracle& oracle, std::size_t iterations,
              const Vector* x0_override = nullptr);

}  // namespace sesop
