#include "sesop/solvers.hpp"

#include <cmath>
#include <utility>

namespace sesop {

namespace {

using kernels::axpy;
using kernels::dot;
using kernels::nrm2;

using Arr3 = std::array<double, 3>;
using Mat3 = std::array<Arr3, 3>;

double distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double dot_with_diff(const Vector& g, const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * (a[i] - b[i]);
  return s;
}

struct Eig3 {
  Arr3 values{};
  Mat3 vectors{};  // vectors[j] is the eigenvector for values[j]
};

/// Cyclic Jacobi on a symmetric 3x3 matrix. Deterministic.
Eig3 sym3_eig(Mat3 a) {
  Mat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  constexpr std::pair<int, int> pairs[3] = {{0, 1}, {0, 2}, {1, 2}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    const double scale =
        std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]) + off;
    if (scale == 0.0 || off <= 1e-15 * scale) break;
    for (auto [p, q] : pairs) {
      const double apq = a[p][q];
      if (apq == 0.0) continue;
      const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      a[p][p] -= t * apq;
      a[q][q] += t * apq;
      a[p][q] = a[q][p] = 0.0;
      const int r = 3 - p - q;
      const double arp = a[r][p], arq = a[r][q];
      a[r][p] = a[p][r] = c * arp - s * arq;
      a[r][q] = a[q][r] = s * arp + c * arq;
      for (int i = 0; i < 3; ++i) {
        const double vip = v[i][p], viq = v[i][q];
        v[i][p] = c * vip - s * viq;
        v[i][q] = s * vip + c * viq;
      }
    }
  }
  Eig3 e;
  for (int j = 0; j < 3; ++j) {
    e.values[j] = a[j][j];
    e.vectors[j] = {v[0][j], v[1][j], v[2][j]};
  }
  return e;
}

double dot3(const Arr3& a, const Arr3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Arr3 mat3_apply(const Mat3& m, const Arr3& x) {
  return {dot3(m[0], x), dot3(m[1], x), dot3(m[2], x)};
}

/// Column-equilibrated reduced system: with S = diag(1/||d_j||) (0 for zero
/// columns), h_eq = S H S and rhs = -S lin / 2, so that the normal system
/// reads h_eq tau_eq = rhs and tau = S tau_eq.
struct Reduced3 {
  Mat3 h_eq{};
  Arr3 rhs{};
  Arr3 scale{};
  double trace = 0.0;
};

Reduced3 equilibrate(const SubspaceProblem& sp) {
  Reduced3 r;
  for (int j = 0; j < 3; ++j) r.scale[j] = sp.col_norm[j] > 0.0 ? 1.0 / sp.col_norm[j] : 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.h_eq[i][j] = sp.h[i][j] * r.scale[i] * r.scale[j];
  for (int j = 0; j < 3; ++j) r.rhs[j] = -0.5 * r.scale[j] * sp.lin[j];
  r.trace = r.h_eq[0][0] + r.h_eq[1][1] + r.h_eq[2][2];
  return r;
}

double reduced_value(const SubspaceProblem& sp, const Arr3& tau) {
  double f = sp.f_x;
  for (int i = 0; i < 3; ++i) {
    f += sp.lin[i] * tau[i];
    for (int j = 0; j < 3; ++j) f += tau[i] * sp.h[i][j] * tau[j];
  }
  return f;
}

const Vector* direction(const SubspaceProblem& sp, int j) {
  switch (j) {
    case 0: return &sp.dirs->d0;
    case 1: return &sp.dirs->d1;
    default: return &sp.dirs->d2;
  }
}

}  // namespace

DirectionSet DirectionBuilder::build(std::size_t k, const Vector& x, const Vector& x0,
                                     const Vector& g_xk) {
  axpy(omega_(k), g_xk, d2_);
  DirectionSet d;
  d.d0 = g_xk;
  d.d1.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d.d1[i] = x[i] - x0[i];
  d.d2 = d2_;
  return d;
}

SubspaceProblem make_subspace_problem(const Objective& f, const Vector& x,
                                      const DirectionSet& dirs, const Vector& grad,
                                      double f_x) {
  SubspaceProblem sp;
  sp.f = &f;
  sp.x = &x;
  sp.dirs = &dirs;
  sp.f_x = f_x;
  const Vector* d[3] = {&dirs.d0, &dirs.d1, &dirs.d2};
  for (int j = 0; j < 3; ++j) sp.col_norm[j] = nrm2(*d[j]);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) sp.gram[i][j] = sp.gram[j][i] = dot(*d[i], *d[j]);

  if (const auto* q = dynamic_cast<const QuadraticProblem*>(&f)) {
    for (int j = 0; j < 3; ++j) {
      q->apply_a(*d[j], sp.a_dirs[j]);
      for (int i = 0; i < 3; ++i) sp.h[i][j] = dot(*d[i], sp.a_dirs[j]);
      sp.lin[j] = dot(*d[j], grad);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const double m = 0.5 * (sp.h[i][j] + sp.h[j][i]);
        sp.h[i][j] = sp.h[j][i] = m;
      }
    sp.grad = &grad;
    sp.has_reduced = true;
  }
  return sp;
}

SubspaceSolution solve_subspace_exact_quadratic(const SubspaceProblem& sp) {
  if (!sp.has_reduced)
    throw std::invalid_argument("solve_subspace_exact_quadratic: quadratic objective required");

  SubspaceSolution sol;
  sol.certified = true;
  const Reduced3 r = equilibrate(sp);
  if (!(r.trace > 0.0)) {
    sol.f_min = sol.achieved = sp.f_x;
    return sol;
  }

  const Eig3 eig = sym3_eig(r.h_eq);
  double lam_min = eig.values[0];
  for (double lv : eig.values) lam_min = std::min(lam_min, lv);
  if (lam_min < -1e-9 * r.trace)
    throw NumericError("subspace reduction has a negative eigenvalue");

  // Truncate only floating-point-garbage eigenvalues; anything larger is
  // solvable once the residual is re-measured at full precision below.
  const double thr = 1e-13 * r.trace;
  auto pinv_apply = [&](const Arr3& b) {
    Arr3 out{0.0, 0.0, 0.0};
    for (int j = 0; j < 3; ++j) {
      if (eig.values[j] <= thr) continue;
      const double coef = dot3(eig.vectors[j], b) / eig.values[j];
      for (int i = 0; i < 3; ++i) out[i] += coef * eig.vectors[j][i];
    }
    return out;
  };

  Arr3 tau_eq = pinv_apply(r.rhs);
  for (int pass = 0; pass < 3; ++pass) {
    const Arr3 ht = mat3_apply(r.h_eq, tau_eq);
    const Arr3 resid{r.rhs[0] - ht[0], r.rhs[1] - ht[1], r.rhs[2] - ht[2]};
    const Arr3 corr = pinv_apply(resid);
    for (int i = 0; i < 3; ++i) tau_eq[i] += corr[i];
  }

  // Polish with the residual gradient measured in the full space: the
  // reduced-form residual saturates at eps * ||H|| * ||tau|| when tau is
  // large, which is what limits the subspace-orthogonality accuracy.
  const std::size_t n = sp.x->size();
  Vector grad_next(n);
  const Vector* d[3] = {&sp.dirs->d0, &sp.dirs->d1, &sp.dirs->d2};
  for (int round = 0; round < 2; ++round) {
    const Arr3 tau_raw{r.scale[0] * tau_eq[0], r.scale[1] * tau_eq[1],
                       r.scale[2] * tau_eq[2]};
    grad_next = *sp.grad;
    for (int j = 0; j < 3; ++j)
      if (tau_raw[j] != 0.0) axpy(2.0 * tau_raw[j], sp.a_dirs[j], grad_next);
    Arr3 resid;
    for (int j = 0; j < 3; ++j) resid[j] = -0.5 * r.scale[j] * dot(*d[j], grad_next);
    const Arr3 corr = pinv_apply(resid);
    for (int i = 0; i < 3; ++i) tau_eq[i] += corr[i];
  }

  for (int j = 0; j < 3; ++j) sol.tau[j] = r.scale[j] * tau_eq[j];
  sol.f_min = sol.achieved = reduced_value(sp, sol.tau);
  return sol;
}

SubspaceSolution solve_subspace_iterative(const SubspaceProblem& sp, double delta4,
                                          int max_iters) {
  if (delta4 < 0.0) throw std::invalid_argument("solve_subspace_iterative: delta4 must be >= 0");

  if (sp.has_reduced) {
    SubspaceSolution exact = solve_subspace_exact_quadratic(sp);
    if (delta4 == 0.0) return exact;

    const Reduced3 r = equilibrate(sp);
    if (!(r.trace > 0.0)) return exact;  // zero directions: nothing to relax
    const Eig3 eig = sym3_eig(r.h_eq);
    const double thr = 1e-13 * r.trace;

    Mat3 gram_eq{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) gram_eq[i][j] = sp.gram[i][j] * r.scale[i] * r.scale[j];
    const Eig3 geig = sym3_eig(gram_eq);
    double sigma2 = 0.0;
    for (double lv : geig.values) sigma2 = std::max(sigma2, lv);
    const double big_l = sp.f->smoothness();
    const double l_red = big_l * sigma2;

    // Gradient descent from tau = 0 with step 1/l_red, expressed in the
    // eigenbasis of h_eq: mode m contracts as rho_m = 1 - 2 lambda_m / l_red,
    //   y_m(t) = y*_m (1 - rho_m^t),   grad_m(t) = c_m rho_m^t,
    // with y*_m = -c_m / (2 lambda_m). Discarded (near-null) modes carry a
    // constant residual gradient component.
    const Arr3 g0{-2.0 * r.rhs[0], -2.0 * r.rhs[1], -2.0 * r.rhs[2]};
    Arr3 c{}, ystar{}, rho{};
    bool retained[3];
    for (int m = 0; m < 3; ++m) {
      c[m] = dot3(eig.vectors[m], g0);
      retained[m] = eig.values[m] > thr;
      if (retained[m]) {
        ystar[m] = -c[m] / (2.0 * eig.values[m]);
        rho[m] = std::max(1.0 - 2.0 * eig.values[m] / l_red, 0.0);
      }
    }

    Arr3 coord_thr;
    for (int j = 0; j < 3; ++j)
      coord_thr[j] = std::sqrt(2.0 * big_l * delta4 * r.scale[j]);

    // state at trajectory step t, in equilibrated coordinates
    Arr3 tau_eq{}, grad_eq{};
    double gap = 0.0;
    auto evaluate_at = [&](double t) {
      gap = 0.0;
      Arr3 y{}, g_modes{};
      for (int m = 0; m < 3; ++m) {
        if (retained[m]) {
          const double decay = std::pow(rho[m], t);
          y[m] = ystar[m] * (1.0 - decay);
          g_modes[m] = c[m] * decay;
          gap += eig.values[m] * ystar[m] * ystar[m] * decay * decay;
        } else {
          g_modes[m] = c[m];
        }
      }
      for (int j = 0; j < 3; ++j) {
        tau_eq[j] = 0.0;
        grad_eq[j] = 0.0;
        for (int m = 0; m < 3; ++m) {
          tau_eq[j] += y[m] * eig.vectors[m][j];
          grad_eq[j] += g_modes[m] * eig.vectors[m][j];
        }
      }
    };
    auto conditions_hold = [&]() {
      if (gap > delta4) return false;
      for (int j = 0; j < 3; ++j)
        if (r.scale[j] > 0.0 && std::abs(grad_eq[j]) > coord_thr[j]) return false;
      const Arr3 gt = mat3_apply(gram_eq, tau_eq);
      const double step_norm2 = std::max(dot3(tau_eq, gt), 0.0);
      const double sprod = std::abs(dot3(grad_eq, tau_eq));
      return sprod * sprod <= 2.0 * big_l * delta4 * std::sqrt(step_norm2);
    };

    double t = 0.0;
    while (t <= static_cast<double>(max_iters)) {
      evaluate_at(t);
      if (conditions_hold()) {
        SubspaceSolution sol;
        for (int j = 0; j < 3; ++j) sol.tau[j] = r.scale[j] * tau_eq[j];
        sol.f_min = exact.f_min;
        sol.achieved = reduced_value(sp, sol.tau);
        sol.certified = true;
        sol.inner_iters = static_cast<int>(std::min<double>(t, 1e9));
        return sol;
      }
      t = t < 8.0 ? t + 1.0 : std::ceil(t * 1.2);
    }
    Arr3 best;
    for (int j = 0; j < 3; ++j) best[j] = r.scale[j] * tau_eq[j];
    throw AccuracyError("solve_subspace_iterative: accuracy not reached within max_iters", best);
  }

  // General objective: fixed-step gradient descent on the equilibrated
  // reduction, stopped by the smoothness certificate
  // ||grad f_k(tau)||^2 <= 2 L_red delta4.
  Arr3 scale;
  for (int j = 0; j < 3; ++j) scale[j] = sp.col_norm[j] > 0.0 ? 1.0 / sp.col_norm[j] : 0.0;
  Mat3 gram_eq{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double g = dot(*direction(sp, i), *direction(sp, j)) * scale[i] * scale[j];
      gram_eq[i][j] = gram_eq[j][i] = g;
    }
  const Eig3 geig = sym3_eig(gram_eq);
  double lam_max = 0.0;
  for (double lv : geig.values) lam_max = std::max(lam_max, lv);
  const double l_red = sp.f->smoothness() * lam_max;

  SubspaceSolution sol;
  if (!(l_red > 0.0)) {
    sol.f_min = sol.achieved = sp.f_x;
    return sol;
  }

  Arr3 tau{0.0, 0.0, 0.0};
  Vector xt;
  for (int it = 0; it <= max_iters; ++it) {
    xt = *sp.x;
    for (int j = 0; j < 3; ++j)
      if (scale[j] > 0.0 && tau[j] != 0.0) axpy(scale[j] * tau[j], *direction(sp, j), xt);
    const Vector grad_full = sp.f->gradient(xt);
    Arr3 ghat;
    for (int j = 0; j < 3; ++j) ghat[j] = scale[j] * dot(*direction(sp, j), grad_full);
    if (dot3(ghat, ghat) <= 2.0 * l_red * delta4) {
      for (int j = 0; j < 3; ++j) sol.tau[j] = scale[j] * tau[j];
      sol.achieved = sol.f_min = sp.f->value(xt);
      sol.certified = false;
      sol.inner_iters = it;
      return sol;
    }
    for (int j = 0; j < 3; ++j) tau[j] -= ghat[j] / l_red;
  }
  Arr3 best;
  for (int j = 0; j < 3; ++j) best[j] = scale[j] * tau[j];
  throw AccuracyError("solve_subspace_iterative: accuracy not reached within max_iters", best);
}

Trace run_sesop(const Objective& f, GradientOracle& oracle, const SesopOptions& opt,
                std::size_t iterations, const Vector* x0_override) {
  if (iterations < 1) throw std::invalid_argument("run_sesop: iterations must be >= 1");
  const std::size_t n = f.dim();
  const Vector x0 = x0_override ? *x0_override : f.start_point();
  if (x0.size() != n) throw std::invalid_argument("run_sesop: start point dimension mismatch");
  if (!all_finite(x0)) throw std::invalid_argument("run_sesop: start point not finite");

  const Optimum* optimum = f.optimum();
  Trace trace;
  trace.meta.solver = "sesop";
  trace.meta.subsolver = opt.subsolver == SubsolverKind::exact ? "exact" : "iterative";
  trace.meta.delta4 = opt.delta4;
  trace.meta.delta1 = oracle.delta1();
  trace.meta.iterations = iterations;
  trace.meta.n = n;

  DirectionBuilder dirs(n);
  Vector x = x0;
  Vector x_prev;
  Vector grad;
  double sub_min = 0.0;
  bool sub_min_known = false;

  for (std::size_t k = 0;; ++k) {
    const double fx = f.value_and_gradient(x, grad);
    if (!std::isfinite(fx) || !all_finite(grad) || !all_finite(x))
      throw DivergenceError("run_sesop: iterate diverged at k=" + std::to_string(k),
                            std::move(trace));

    IterationRecord rec;
    rec.k = k;
    if (optimum) rec.f_gap = fx - optimum->f_star;
    rec.grad_norm = nrm2(grad);
    rec.d1_norm = distance(x, x0);
    if (optimum) rec.dist_to_opt = distance(x, optimum->x_star);
    if (k >= 1) {
      rec.ip_d2 = dot(grad, dirs.d2_accumulator());
      rec.ip_d1 = dot_with_diff(grad, x, x0);
      rec.step_norm = distance(x, x_prev);
      if (sub_min_known) rec.sub_gap = fx - sub_min;
    }

    const Vector g = oracle.query(x);
    rec.g_norm = nrm2(g);
    const DirectionSet dset = dirs.build(k, x, x0, g);
    rec.w_k = dirs.omega_at(k);
    rec.W_k = nrm2(dset.d2);
    trace.records.push_back(std::move(rec));
    if (k == iterations) break;

    const SubspaceProblem sp = make_subspace_problem(f, x, dset, grad, fx);
    const SubspaceSolution sol = opt.subsolver == SubsolverKind::exact
                                     ? solve_subspace_exact_quadratic(sp)
                                     : solve_subspace_iterative(sp, opt.delta4,
                                                                opt.max_inner_iters);
    x_prev = x;
    if (sol.tau[0] != 0.0) axpy(sol.tau[0], dset.d0, x);
    if (sol.tau[1] != 0.0) axpy(sol.tau[1], dset.d1, x);
    if (sol.tau[2] != 0.0) axpy(sol.tau[2], dset.d2, x);
    sub_min = sol.f_min;
    sub_min_known = sol.certified;
  }
  return trace;
}

Trace run_stm(const Objective& f, GradientOracle& oracle, std::size_t iterations,
              const Vector* x0_override) {
  if (iterations < 1) throw std::invalid_argument("run_stm: iterations must be >= 1");
  const std::size_t n = f.dim();
  const Vector x0 = x0_override ? *x0_override : f.start_point();
  if (x0.size() != n) throw std::invalid_argument("run_stm: start point dimension mismatch");
  const double big_l = f.smoothness();
  if (!(big_l > 0.0)) throw std::invalid_argument("run_stm: positive L required");

  const Optimum* optimum = f.optimum();
  Trace trace;
  trace.meta.solver = "stm";
  trace.meta.subsolver = "";
  trace.meta.delta1 = oracle.delta1();
  trace.meta.iterations = iterations;
  trace.meta.n = n;

  Vector x = x0, u = x0, y(n), x_prev, grad;
  double a_acc = 0.0;
  std::optional<double> last_g_norm;

  for (std::size_t k = 0;; ++k) {
    const double fx = f.value_and_gradient(x, grad);
    if (!std::isfinite(fx) || !all_finite(grad) || !all_finite(x))
      throw DivergenceError("run_stm: iterate diverged at k=" + std::to_string(k),
                            std::move(trace));

    IterationRecord rec;
    rec.k = k;
    if (optimum) rec.f_gap = fx - optimum->f_star;
    rec.grad_norm = nrm2(grad);
    rec.d1_norm = distance(x, x0);
    if (optimum) rec.dist_to_opt = distance(x, optimum->x_star);
    rec.g_norm = last_g_norm;
    if (k >= 1) rec.step_norm = distance(x, x_prev);
    trace.records.push_back(std::move(rec));
    if (k == iterations) break;

    const double alpha = static_cast<double>(k + 2) / (2.0 * big_l);
    const double a_next = a_acc + alpha;
    for (std::size_t i = 0; i < n; ++i) y[i] = (alpha * u[i] + a_acc * x[i]) / a_next;
    const Vector g = oracle.query(y);
    last_g_norm = nrm2(g);
    axpy(-alpha, g, u);
    x_prev = x;
    for (std::size_t i = 0; i < n; ++i) x[i] = (alpha * u[i] + a_acc * x_prev[i]) / a_next;
    a_acc = a_next;
  }
  return trace;
}

}  // namespace sesop
