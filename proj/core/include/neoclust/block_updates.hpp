#pragma once

#include "neoclust/model.hpp"

namespace neoclust {

// Separable-plus-rank-one quadratic over a box:
//
//   minimize  x^T a + sigma/2 x^T diag(D) x + sigma/2 (e^T x)^2
//   s.t.      0 <= x <= b
struct BoxSimplexQP {
  VectorXd a;
  VectorXd D;  // strictly positive
  double sigma = 1.0;
  double b = 1.0;

  double value(const VectorXd& x) const;
  VectorXd gradient(const VectorXd& x) const;
};

// Global minimiser. With tau = e^T x the optimum is
// x(tau) = P[-(a + sigma tau e) / (sigma D); 0, b], and tau solves
// F(tau) = tau - e^T x(tau) = 0. F is increasing with F(0) <= 0 <= F(b n),
// so bisection brackets the root; the final bracket is polished by solving the
// piecewise-linear equation on its active set.
VectorXd box_simplex_quadratic(const VectorXd& a, const VectorXd& D,
                               double sigma, double b);
VectorXd box_simplex_quadratic(const BoxSimplexQP& qp);

// argmin_{s >= 0} of the s-dependent part of the augmented Lagrangian:
// max(0, f - g - gamma / sigma).
VectorXd closed_form_s(const VectorXd& f, const VectorXd& g,
                       const VectorXd& gamma, double sigma);

// argmin_{r >= 0}: max(0, e^T g - (1 - beta) n - lambda3 / sigma).
double closed_form_r(const VectorXd& g, double beta, Index n, double lambda3,
                     double sigma);

// The f- and g-block subproblems of the augmented Lagrangian, with all other
// blocks held at `st`. Each equals L_A restricted to that block up to an
// additive constant.
BoxSimplexQP f_block_qp(const KernelProblem& p, const LowRankState& st,
                        const Multipliers& m);
BoxSimplexQP g_block_qp(const KernelProblem& p, const LowRankState& st,
                        const Multipliers& m);

}  // namespace neoclust
