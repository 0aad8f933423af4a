#pragma once

#include "neoclust/model.hpp"
#include "neoclust/neo_iterative.hpp"

namespace neoclust {

// Greedy discretisation of a relaxed solution.
//
//  1. The n - floor(beta n) points with the largest g (ties: larger f, then
//     lower index) must be assigned; each first gets its argmax_c Y_ic.
//  2. Per-point targets t_i = clamp(round(f_i), 1, k) for must-assign points,
//     clamp(round(f_i), 0, k) otherwise.
//  3. (i, c) pairs in decreasing Y_ic order (ties: lower i, then lower c) are
//     accepted while point i is below its target, until round((1 + alpha) n)
//     assignments exist.
//  4. Any remaining quota is filled from the same order ignoring targets.
//
// The result always satisfies the discrete assignment constraints. If Y is
// identically zero and `fallback` is given, the fallback is returned instead
// (with a warning).
DiscreteClustering round_solution(const KernelProblem& p,
                                  const LowRankState& st,
                                  const DiscreteClustering* fallback = nullptr);

}  // namespace neoclust
