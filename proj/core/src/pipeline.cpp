#include "neoclust/pipeline.hpp"

#include <chrono>

#include "neoclust/rounding.hpp"

namespace neoclust {

PipelineResult run_pipeline(const KernelProblem& p, const PipelineOptions& opts) {
  using Clock = std::chrono::steady_clock;
  PipelineResult out;

  const auto t0 = Clock::now();
  out.warm = neo_iterate_restarts(p, opts.restarts, opts.iterative);
  out.warm_objective = out.warm.objective;
  out.warm_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  if (!opts.method) {
    out.clustering = out.warm.clustering;
    out.neo_objective = out.warm_objective;
    out.status = "iterative";
    return out;
  }

  const auto t1 = Clock::now();
  SolverConfig cfg = opts.solver;
  cfg.method = *opts.method;
  out.solve = solve(p, lift(p, out.warm.clustering), cfg);
  out.clustering = round_solution(p, out.solve->state, &out.warm.clustering);
  out.neo_objective = clustering_cost(p, out.clustering);
  out.solve_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
  out.status = std::string(to_string(out.solve->status));
  return out;
}

}  // namespace neoclust
