#pragma once

#include "neoclust/model.hpp"

namespace neoclust {

struct AugLagValue {
  double value = 0.0;
  VectorXd grad;  // flat layout of LowRankState
};

// Augmented Lagrangian with subtracted multiplier terms:
//
//   L = f^T d - tr(Y^T K Y)
//       - lambda1 ca + sigma/2 ca^2 - mu^T cb + sigma/2 |cb|^2
//       - lambda2 cc + sigma/2 cc^2 - gamma^T cd + sigma/2 |cd|^2
//       - lambda3 ce + sigma/2 ce^2
//
// plus prox_weight/2 |x - anchor|^2 when `prox_anchor` is non-null. The
// gradient is analytic for every block.
AugLagValue auglag_eval(const KernelProblem& p, const LowRankState& st,
                        const Multipliers& m,
                        const VectorXd* prox_anchor = nullptr);

// Value only; same cost order as auglag_eval minus the gradient assembly.
double auglag_value(const KernelProblem& p, const LowRankState& st,
                    const Multipliers& m,
                    const VectorXd* prox_anchor = nullptr);

// First-order multiplier step matching the subtracted sign convention:
// lambda <- lambda - sigma c for every constraint block.
Multipliers update_multipliers(const Multipliers& m,
                               const ConstraintResiduals& res);

struct PenaltyPolicy {
  double eta = 0.25;       // required infeasibility reduction per outer step
  double factor = 10.0;    // growth when the reduction is not achieved
  double sigma_max = 1e8;
};

// sigma <- min(factor sigma, sigma_max) if |c_now|_inf > eta |c_prev|_inf.
Multipliers update_penalty(const Multipliers& m,
                           const ConstraintResiduals& res_now,
                           const ConstraintResiduals& res_prev,
                           const PenaltyPolicy& policy = {});

}  // namespace neoclust
