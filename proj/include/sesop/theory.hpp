#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "sesop/trace.hpp"

namespace sesop {

/// Constants feeding the convergence bounds.
struct BoundParams {
  double L = 1.0;       // smoothness constant, > 0
  double R = 0.0;       // ||x* - x0||
  double gamma = 1.0;   // quasar parameter in (0, 1]
  double delta1 = 0.0;  // gradient inexactness
  double delta2 = 0.0;  // scaled near-orthogonality vs d2
  double delta3 = 0.0;  // near-orthogonality vs x_k - x0
  double delta4 = 0.0;  // subproblem function gap
};

enum class BoundKind { theorem1, theorem2 };

struct CheckReport {
  std::string name;
  bool passed = false;
  std::optional<std::size_t> worst_k;  // index of the tightest / violated point
  double margin = 0.0;                 // min over k of (bound - observed)
  bool applicable = true;              // false when inputs cannot support the check
  bool gating = true;                  // informational reports do not gate a run
  std::string note;
};

std::string check_report_to_json(const CheckReport& report);

/// 8 L R^2 / (gamma^2 k^2) + 4 (R/gamma + 17) delta1, for k >= 1.
double theorem1_bound(const BoundParams& p, std::size_t k);

/// 8 L R^2 / (gamma^2 k^2) + (R/gamma + 10) delta1 + 4 sqrt(delta2)
///   + delta3 + 5 sqrt(L delta4 / k), defined for k >= 8 only
/// (std::domain_error otherwise).
double theorem2_bound(const BoundParams& p, std::size_t k);

/// W_T^2 <= 2 sum_j omega_j^2 ||g_j||^2 + 72 T^4 delta1^2 at every T >= 1
/// recorded in the trace.
CheckReport check_lemma1(const Trace& trace, double delta1);

/// Constant sets for the inexact-subproblem accumulation inequality: the
/// statement's 2(5T^4+21T^3+17T^2) delta1^2 + (13/6)(T+2)^4 delta2, and the
/// larger proof-final 2(5T^4+28T^3+39T^2) delta1^2 + (13/6)(T+3)^4 delta2.
enum class Lemma5Variant { proof_final, statement };

CheckReport check_lemma5(const Trace& trace, double delta1, double delta2,
                         Lemma5Variant variant = Lemma5Variant::proof_final);

/// The four omega-sum inequalities, verified for every T <= t_max:
///   sum_{k<=T} w_k <= (T+2)(T+1)/2
///   sum_{k=j+1..T} w_k <= T(T+3)/2  for all j in [0, T-1]
///   sum_{k=1..T} w_k k^2 <= (7/12)(T+1)^4
///   sum_{k<=T} w_k^2 <= (1/3)(T+1)^3
CheckReport check_appendix_sums(std::size_t t_max);

/// (k+1)/2 <= w_k <= k+1 and w_k^2 - w_{k-1}^2 = w_k (1e-9 relative),
/// for all k <= k_max.
CheckReport check_omega_bounds(std::size_t k_max);

/// Realized delta2 = max_k |ip_d2(k)| / k^2 over the trace.
double measured_delta2(const Trace& trace);
/// Realized delta3 = max_k |ip_d1(k)|.
double measured_delta3(const Trace& trace);
/// Realized delta4 = max_k sub_gap(k) (0 if never recorded).
double measured_delta4(const Trace& trace);

/// Upper estimates for delta2/delta3 achievable from a delta4-accurate
/// subproblem solve:
///   delta2 <= (1/k^2) sqrt(2 L max_k ||d2|| delta4)   (pointwise in k)
///   delta3 <= sqrt(2 L delta4) (sqrt(max_k ||D_k tau_k||) + sqrt(max_k ||d1||))
/// Also reports the measured values and whether measured <= estimated.
struct DeltaLink {
  double delta2_estimate = 0.0;  // the k-free factor sqrt(2 L max||d2|| delta4)
  double delta3_estimate = 0.0;
  double delta2_measured = 0.0;
  double delta3_measured = 0.0;
  CheckReport check;
};

DeltaLink delta_link_estimates(const Trace& trace, double L, double delta4);

/// f_gap(k) <= bound(k) for all applicable k (k >= 1 for theorem1, k >= 8
/// for theorem2), with 1e-9 relative slack. Not checkable without f_gap.
CheckReport check_theorem_bound(const Trace& trace, const BoundParams& p, BoundKind kind);

/// Exact-subsolver first-order optimality over the subspace:
/// |ip_d2(k)| <= tol_k W_{k-1} and |ip_d1(k)| <= tol_k ||x_k - x0|| for all
/// k >= 1, with tol_k = rel_tol ||grad f(x_k)|| + grad_noise.
///
/// grad_noise is an absolute floor for the gradient evaluated at an iterate
/// stored in doubles: the components of x_k quantize at eps ||x||, which
/// perturbs grad f by up to ~L eps ||x||. Once a run converges to that floor
/// the measured inner products are representation noise, so a purely
/// relative tolerance cannot hold there. Callers that know the problem pass
/// grad_noise ~ 16 eps L (||x*|| + R); the default 0 is the idealized check.
CheckReport check_orthogonality(const Trace& trace, double rel_tol = 1e-7,
                                double grad_noise = 0.0);

}  // namespace sesop
