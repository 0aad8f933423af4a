#pragma once

#include <functional>
#include <string_view>

#include "neoclust/model.hpp"

namespace neoclust {

// Returns f(x) and writes the gradient into `grad` (already sized).
using BoxObjective = std::function<double(const VectorXd& x, VectorXd& grad)>;

struct BoxProblem {
  VectorXd lower;  // -inf allowed
  VectorXd upper;  // +inf allowed
  BoxObjective objective;
  VectorXd x0;  // projected into the box before use
};

struct BoxOptions {
  double tol_pg = 1e-6;
  int max_evals = 2000;
  int memory = 10;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  double curvature_eps = 1e-10;  // skip pairs with s'y <= eps |s| |y|
};

enum class BoxStatus {
  kConverged,        // projected gradient below tol_pg
  kMaxEvaluations,   // budget spent; best iterate returned
  kLineSearchFailed, // no decrease found along steepest descent either
  kNonFinite,        // objective or gradient produced inf/nan
};

std::string_view to_string(BoxStatus s);

struct BoxResult {
  VectorXd x;
  double value = 0.0;
  VectorXd grad;
  double pg_norm = 0.0;  // |x - P[x - grad]|_inf
  int evaluations = 0;
  int iterations = 0;
  BoxStatus status = BoxStatus::kConverged;
};

VectorXd project_box(const VectorXd& x, const VectorXd& lower,
                     const VectorXd& upper);

double projected_gradient_norm(const VectorXd& x, const VectorXd& grad,
                               const VectorXd& lower, const VectorXd& upper);

// Projected limited-memory BFGS. Variables sitting on a bound with the
// gradient pushing outward are frozen for the step; the L-BFGS two-loop
// direction acts on the rest, with a projected steepest-descent fallback when
// it is not a descent direction. Backtracking Armijo line search along the
// projected path keeps every iterate inside the box and the objective
// monotonically non-increasing.
BoxResult minimize_box(const BoxProblem& problem, const BoxOptions& opts = {});

}  // namespace neoclust
