#include "neoclust/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "neoclust/log.hpp"

namespace neoclust {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

BoxOptions inner_options(const SolverConfig& cfg, double tol_pg) {
  BoxOptions o;
  o.tol_pg = tol_pg;
  o.max_evals = cfg.max_inner_evals;
  o.memory = cfg.lbfgs_memory;
  return o;
}

void validate(const KernelProblem& p, const LowRankState& start,
              const SolverConfig& cfg) {
  check_dimensions(p, start);
  if (!(cfg.tol_infeas > 0.0)) throw std::invalid_argument("tol_infeas must be > 0");
  if (cfg.sigma0 && !(*cfg.sigma0 > 0.0))
    throw std::invalid_argument("sigma0 must be > 0");
  if (cfg.max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
  if (cfg.tau && !(*cfg.tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!start.all_finite()) throw std::invalid_argument("start state is not finite");
}

struct StepOutcome {
  int inner_evals = 0;
  bool failed = false;
};

// Shared outer loop: primal step, residuals, stopping test, multiplier and
// penalty updates, inner tolerance schedule.
template <class PrimalStep>
SolveResult run_outer_loop(const KernelProblem& p, const LowRankState& start,
                           const SolverConfig& cfg, PrimalStep&& primal_step) {
  validate(p, start, cfg);
  const auto t0 = Clock::now();

  SolveResult out;
  out.state = start;
  out.state.project(p);
  out.multipliers =
      Multipliers::zeros(p.n(), cfg.sigma0 ? *cfg.sigma0 : default_sigma0(p));

  ConstraintResiduals res_prev = residuals(p, out.state);
  out.trace.push_back({0, 0.0, sdp_objective(p, out.state), res_prev.inf_norm(),
                       kkt_residual(p, out.state, out.multipliers),
                       out.multipliers.sigma, 0});

  double tol_pg = cfg.tol_pg0;
  out.status = SolveStatus::kMaxed;
  for (int it = 1; it <= cfg.max_outer; ++it) {
    const double sigma_used = out.multipliers.sigma;
    const StepOutcome step = primal_step(out.state, out.multipliers, tol_pg);
    out.inner_evals += step.inner_evals;
    out.outer_iterations = it;

    const ConstraintResiduals res = residuals(p, out.state);
    Multipliers plain = out.multipliers;
    plain.prox_weight = 0.0;
    const double kkt = kkt_residual(p, out.state, plain);
    out.trace.push_back({it, seconds_since(t0), sdp_objective(p, out.state),
                         res.inf_norm(), kkt, sigma_used, step.inner_evals});
    if (step.failed) {
      out.status = SolveStatus::kFailed;
      break;
    }
    if (res.inf_norm() <= cfg.tol_infeas &&
        (cfg.tol_kkt <= 0.0 || kkt <= cfg.tol_kkt)) {
      out.status = SolveStatus::kConverged;
      break;
    }
    out.multipliers = update_multipliers(out.multipliers, res);
    // Once feasible to tolerance only stationarity is missing; growing sigma
    // further would just worsen the subproblem conditioning.
    if (res.inf_norm() > cfg.tol_infeas)
      out.multipliers = update_penalty(out.multipliers, res, res_prev, cfg.penalty);
    res_prev = res;
    tol_pg = std::max(tol_pg * cfg.tol_pg_decay, cfg.tol_pg_min);
  }
  out.multipliers.prox_weight = 0.0;
  out.wall_seconds = seconds_since(t0);
  return out;
}

// Joint subproblem over all variables, optionally with a proximal term.
StepOutcome joint_step(const KernelProblem& p, LowRankState& st,
                       const Multipliers& m, const SolverConfig& cfg,
                       double tol_pg, const VectorXd* anchor) {
  BoxProblem bp;
  state_bounds(p, bp.lower, bp.upper);
  bp.x0 = st.flatten();
  bp.objective = [&](const VectorXd& x, VectorXd& grad) {
    AugLagValue v = auglag_eval(p, LowRankState::from_flat(p, x), m, anchor);
    grad = std::move(v.grad);
    return v.value;
  };
  const BoxResult r = minimize_box(bp, inner_options(cfg, tol_pg));
  st = LowRankState::from_flat(p, r.x);
  return {r.evaluations, r.status == BoxStatus::kNonFinite};
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kAlm: return "alm";
    case Method::kPalm: return "palm";
    case Method::kAdmm: return "admm";
    case Method::kSadmm: return "sadmm";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "alm") return Method::kAlm;
  if (name == "palm") return Method::kPalm;
  if (name == "admm") return Method::kAdmm;
  if (name == "sadmm") return Method::kSadmm;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected alm, palm, admm or sadmm)");
}

double default_sigma0(const KernelProblem& p) {
  const double scale =
      p.kernel().diagonal().cwiseQuotient(p.weights()).mean();
  return std::max(1.0, scale);
}

double kkt_residual(const KernelProblem& p, const LowRankState& st,
                    const Multipliers& m) {
  Multipliers plain = m;
  plain.prox_weight = 0.0;
  const AugLagValue v = auglag_eval(p, st, plain);
  VectorXd lower, upper;
  state_bounds(p, lower, upper);
  return projected_gradient_norm(st.flatten(), v.grad, lower, upper);
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxed: return "maxed";
    case SolveStatus::kFailed: return "failed";
  }
  return "unknown";
}

BoxResult minimize_y_block(const KernelProblem& p, LowRankState& st,
                           const Multipliers& m, const BoxOptions& opts) {
  const Index nk = p.n() * p.k();
  BoxProblem bp;
  bp.lower = VectorXd::Zero(nk);
  bp.upper = VectorXd::Constant(nk, std::numeric_limits<double>::infinity());
  bp.x0 = Eigen::Map<const VectorXd>(st.Y.data(), nk);
  LowRankState work = st;
  bp.objective = [&](const VectorXd& y, VectorXd& grad) {
    work.Y = Eigen::Map<const MatrixXd>(y.data(), p.n(), p.k());
    AugLagValue v = auglag_eval(p, work, m);
    grad = v.grad.head(nk);
    return v.value;
  };
  BoxResult r = minimize_box(bp, opts);
  st.Y = Eigen::Map<const MatrixXd>(r.x.data(), p.n(), p.k());
  return r;
}

YStep projected_gradient_y_step(const KernelProblem& p, LowRankState& st,
                                const Multipliers& m, double initial_step) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 60;
  const Index nk = p.n() * p.k();

  YStep out;
  const AugLagValue base = auglag_eval(p, st, m);
  out.evaluations = 1;
  out.value_before = base.value;
  out.value_after = base.value;
  const Eigen::Map<const MatrixXd> grad(base.grad.data(), p.n(), p.k());
  if (grad.cwiseAbs().maxCoeff() == 0.0 || nk == 0) return out;

  LowRankState trial = st;
  double t = initial_step;
  for (int h = 0; h <= kMaxHalvings; ++h, t *= 0.5) {
    trial.Y = (st.Y - t * grad).cwiseMax(0.0);
    const double slope = grad.cwiseProduct(trial.Y - st.Y).sum();
    if (!(slope < 0.0)) {
      if ((trial.Y - st.Y).cwiseAbs().maxCoeff() == 0.0) break;
      continue;
    }
    const double value = auglag_value(p, trial, m);
    ++out.evaluations;
    if (std::isfinite(value) && value <= base.value + kArmijo * slope) {
      st.Y = trial.Y;
      out.step = t;
      out.value_after = value;
      break;
    }
  }
  return out;
}

void update_linear_blocks(const KernelProblem& p, LowRankState& st,
                          const Multipliers& m) {
  st.f = box_simplex_quadratic(f_block_qp(p, st, m));
  st.g = box_simplex_quadratic(g_block_qp(p, st, m));
  st.s = closed_form_s(st.f, st.g, m.gamma, m.sigma);
  st.r = closed_form_r(st.g, p.beta(), p.n(), m.lambda3, m.sigma);
}

SolveResult solve_alm(const KernelProblem& p, const LowRankState& start,
                      const SolverConfig& cfg) {
  return run_outer_loop(p, start, cfg,
                        [&](LowRankState& st, Multipliers& m, double tol_pg) {
                          m.prox_weight = 0.0;
                          return joint_step(p, st, m, cfg, tol_pg, nullptr);
                        });
}

SolveResult solve_palm(const KernelProblem& p, const LowRankState& start,
                       const SolverConfig& cfg) {
  return run_outer_loop(
      p, start, cfg, [&](LowRankState& st, Multipliers& m, double tol_pg) {
        const double tau = cfg.tau ? *cfg.tau : m.sigma;
        m.prox_weight = 1.0 / tau;
        const VectorXd anchor = st.flatten();
        return joint_step(p, st, m, cfg, tol_pg, &anchor);
      });
}

SolveResult solve_admm(const KernelProblem& p, const LowRankState& start,
                       const SolverConfig& cfg) {
  return run_outer_loop(
      p, start, cfg, [&](LowRankState& st, Multipliers& m, double tol_pg) {
        m.prox_weight = 0.0;
        const BoxResult r = minimize_y_block(p, st, m, inner_options(cfg, tol_pg));
        if (r.status == BoxStatus::kNonFinite) return StepOutcome{r.evaluations, true};
        update_linear_blocks(p, st, m);
        return StepOutcome{r.evaluations, !st.all_finite()};
      });
}

SolveResult solve_sadmm(const KernelProblem& p, const LowRankState& start,
                        const SolverConfig& cfg) {
  double next_step = 1.0;
  return run_outer_loop(
      p, start, cfg, [&](LowRankState& st, Multipliers& m, double) {
        m.prox_weight = 0.0;
        const YStep y = projected_gradient_y_step(p, st, m, next_step);
        if (y.step > 0.0) next_step = 2.0 * y.step;
        else next_step = std::max(next_step * 0.5, 1e-12);
        update_linear_blocks(p, st, m);
        return StepOutcome{y.evaluations, !st.all_finite()};
      });
}

SolveResult solve(const KernelProblem& p, const LowRankState& start,
                  const SolverConfig& cfg) {
  switch (cfg.method) {
    case Method::kAlm: return solve_alm(p, start, cfg);
    case Method::kPalm: return solve_palm(p, start, cfg);
    case Method::kAdmm: return solve_admm(p, start, cfg);
    case Method::kSadmm: return solve_sadmm(p, start, cfg);
  }
  throw std::invalid_argument("unknown method");
}

LowRankState lift(const KernelProblem& p, const DiscreteClustering& U) {
  if (U.n() != p.n() || U.k() != p.k())
    throw std::invalid_argument("clustering shape does not match problem");
  if (!satisfies_constraints(p, U))
    warn("lifting a clustering that violates the assignment constraints");

  const Index n = p.n();
  LowRankState st = LowRankState::zeros(n, p.k());
  const MatrixXd Ud = U.U.cast<double>();
  for (int c = 0; c < p.k(); ++c) {
    const double mass = Ud.col(c).dot(p.weights());
    if (mass <= 0.0) continue;
    st.Y.col(c) = p.weights().cwiseProduct(Ud.col(c)) / std::sqrt(mass);
  }
  st.f = U.assign_count.cast<double>();
  st.g = (U.assign_count.array() > 0).cast<double>().matrix();
  st.s = st.f - st.g;
  st.r = std::max(0.0, st.g.sum() - p.coverage_floor());
  return st;
}

}  // namespace neoclust
