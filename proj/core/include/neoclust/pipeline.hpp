#pragma once

#include <optional>
#include <string>

#include "neoclust/neo_iterative.hpp"
#include "neoclust/solvers.hpp"

namespace neoclust {

struct PipelineOptions {
  // Unset runs the iterative algorithm only.
  std::optional<Method> method;
  SolverConfig solver;
  IterativeOptions iterative;
  int restarts = 1;  // seeded restarts of the iterative warm start
};

struct PipelineResult {
  IterativeResult warm;
  std::optional<SolveResult> solve;
  DiscreteClustering clustering;  // rounded solution, or the warm start
  double warm_objective = 0.0;    // NEO objective of the warm start
  double neo_objective = 0.0;     // NEO objective of `clustering`
  double warm_seconds = 0.0;
  double solve_seconds = 0.0;     // solver plus rounding
  std::string status;             // "converged", "maxed", "failed", "iterative"
};

// Iterative warm start -> lift -> multiplier method -> rounding.
PipelineResult run_pipeline(const KernelProblem& p, const PipelineOptions& opts);

}  // namespace neoclust
