#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neoclust/auglag.hpp"
#include "neoclust/block_updates.hpp"
#include "neoclust/boxqn.hpp"
#include "neoclust/model.hpp"
#include "neoclust/neo_iterative.hpp"

namespace neoclust {

enum class Method { kAlm, kPalm, kAdmm, kSadmm };

std::string_view to_string(Method m);
// "alm", "palm", "admm" or "sadmm"; throws std::invalid_argument otherwise.
Method parse_method(std::string_view name);

struct SolverConfig {
  Method method = Method::kAlm;
  double tol_infeas = 1e-3;
  // Optional stationarity test on the projected gradient of the Lagrangian at
  // the updated multipliers. Zero (default) stops on infeasibility alone.
  double tol_kkt = 0.0;
  int max_outer = 300;
  // Unset picks default_sigma0(p).
  std::optional<double> sigma0;
  PenaltyPolicy penalty;

  // Proximal parameter for PALM; the proximal weight is 1 / tau. Unset means
  // tau follows sigma at every outer iteration.
  std::optional<double> tau;

  // Inexact subproblem solves: tolerance starts loose and tightens
  // geometrically per outer iteration.
  double tol_pg0 = 1e-2;
  double tol_pg_decay = 0.5;
  double tol_pg_min = 1e-6;
  int max_inner_evals = 500;
  int lbfgs_memory = 10;
};

struct TraceRow {
  int iter = 0;
  double wall_seconds = 0.0;
  double objective = 0.0;      // sdp_objective
  double infeasibility = 0.0;  // residual inf-norm
  double kkt = 0.0;            // Lagrangian projected-gradient inf-norm
  double sigma = 0.0;
  int inner_evals = 0;
};

using SolverTrace = std::vector<TraceRow>;

enum class SolveStatus {
  kConverged,  // infeasibility <= tol_infeas (and kkt <= tol_kkt if set)
  kMaxed,      // max_outer reached
  kFailed,     // non-finite values in a subproblem
};

std::string_view to_string(SolveStatus s);

struct SolveResult {
  LowRankState state;
  Multipliers multipliers;
  SolverTrace trace;  // row 0 is the starting point
  SolveStatus status = SolveStatus::kMaxed;
  int outer_iterations = 0;
  long long inner_evals = 0;
  double wall_seconds = 0.0;
};

// Joint minimisation of L_A over all blocks per outer iteration.
SolveResult solve_alm(const KernelProblem& p, const LowRankState& start,
                      const SolverConfig& cfg);

// ALM plus (1 / (2 tau)) |x - x_k|^2 anchored at the previous outer iterate.
SolveResult solve_palm(const KernelProblem& p, const LowRankState& start,
                       const SolverConfig& cfg);

// Block sweep Y, f, g, s, r followed by one multiplier/penalty update.
SolveResult solve_admm(const KernelProblem& p, const LowRankState& start,
                       const SolverConfig& cfg);

// ADMM with the Y-block replaced by a single projected-gradient step.
SolveResult solve_sadmm(const KernelProblem& p, const LowRankState& start,
                        const SolverConfig& cfg);

// |x - P[x - grad_x L(x, lambda - sigma c(x))]|_inf, i.e. the first-order
// optimality residual of the plain Lagrangian after a multiplier step from m.
double kkt_residual(const KernelProblem& p, const LowRankState& st,
                    const Multipliers& m);

// Initial penalty matched to the objective scale: max(1, mean_i K_ii / w_i).
double default_sigma0(const KernelProblem& p);

// Dispatches on cfg.method.
SolveResult solve(const KernelProblem& p, const LowRankState& start,
                  const SolverConfig& cfg);

// Y-block subproblem by bounded L-BFGS (other blocks fixed).
BoxResult minimize_y_block(const KernelProblem& p, LowRankState& st,
                           const Multipliers& m, const BoxOptions& opts);

struct YStep {
  double step = 0.0;         // accepted step length (0 if none)
  double value_before = 0.0;
  double value_after = 0.0;
  int evaluations = 0;
};

// One projected-gradient step on Y with Armijo backtracking starting from
// `initial_step`. Leaves Y unchanged when no decrease is found.
YStep projected_gradient_y_step(const KernelProblem& p, LowRankState& st,
                                const Multipliers& m, double initial_step);

// f, g, s, r block updates in that order, each globally optimal given the
// others.
void update_linear_blocks(const KernelProblem& p, LowRankState& st,
                          const Multipliers& m);

// Relaxed state of a discrete clustering:
//   Y_ic = w_i u_ic / sqrt(sum_j u_jc w_j), f = row counts, g = [f > 0],
//   s = f - g, r = max(0, e^T g - (1 - beta) n).
// Residuals vanish when U satisfies the assignment constraints and
// (1 + alpha) n is an integer. Warns if U violates the constraints.
LowRankState lift(const KernelProblem& p, const DiscreteClustering& U);

}  // namespace neoclust
