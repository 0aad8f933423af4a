#pragma once

#include <Eigen/Dense>

namespace neoclust {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Fixed clustering instance: kernel K, diagonal point weights w, the derived
// vector d (d_i = w_i K_ii), cluster count k, overlap budget alpha and
// outlier budget beta.
class KernelProblem {
 public:
  // Validates and takes ownership. Throws std::invalid_argument when K is not
  // square/symmetric, a weight is not strictly positive, k < 1, alpha < 0,
  // beta outside [0, 1), or (1 + alpha) n exceeds n k.
  KernelProblem(MatrixXd kernel, VectorXd weights, int k, double alpha,
                double beta);

  Index n() const { return kernel_.rows(); }
  int k() const { return k_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  const MatrixXd& kernel() const { return kernel_; }
  const VectorXd& weights() const { return weights_; }
  const VectorXd& d() const { return d_; }

  // Real-valued right-hand sides of the relaxed count constraints.
  double assignment_budget() const { return (1.0 + alpha_) * double(n()); }
  double coverage_floor() const { return (1.0 - beta_) * double(n()); }

  // Integer versions used by the discrete modules.
  Index assignment_quota() const;  // round((1 + alpha) n)
  Index max_unassigned() const;    // floor(beta n)

  // Same instance with different budgets / cluster count.
  KernelProblem with_parameters(int k, double alpha, double beta) const;

 private:
  MatrixXd kernel_;
  VectorXd weights_;
  VectorXd d_;
  int k_;
  double alpha_;
  double beta_;
};

// Primal variables of the low-rank relaxation.
//
// Flattened layout, shared by every gradient and solver:
//   x = [vec(Y) (column-major, n*k); f (n); g (n); s (n); r (1)]
struct LowRankState {
  MatrixXd Y;  // n x k, Y >= 0
  VectorXd f;  // 0 <= f <= k
  VectorXd g;  // 0 <= g <= 1
  VectorXd s;  // s >= 0
  double r = 0.0;

  static LowRankState zeros(Index n, int k);
  static LowRankState from_flat(const KernelProblem& p, const VectorXd& x);

  Index n() const { return Y.rows(); }
  int k() const { return static_cast<int>(Y.cols()); }

  VectorXd flatten() const;
  static Index flat_size(Index n, int k) { return n * k + 3 * n + 1; }

  // Offsets of each block in the flat layout.
  static Index offset_f(Index n, int k) { return n * k; }
  static Index offset_g(Index n, int k) { return n * k + n; }
  static Index offset_s(Index n, int k) { return n * k + 2 * n; }
  static Index offset_r(Index n, int k) { return n * k + 3 * n; }

  // Clips every block onto its bounds.
  void project(const KernelProblem& p);
  bool within_bounds(const KernelProblem& p) const;
  bool all_finite() const;
};

// Bound vectors in the flat layout. Infinite upper bounds use +inf.
void state_bounds(const KernelProblem& p, VectorXd& lower, VectorXd& upper);

struct Multipliers {
  double lambda1 = 0.0;  // constraint (a), trace normalisation
  double lambda2 = 0.0;  // constraint (c), total assignment count
  double lambda3 = 0.0;  // constraint (e), coverage
  VectorXd mu;           // constraint (b)
  VectorXd gamma;        // constraint (d)
  double sigma = 1.0;
  double prox_weight = 0.0;

  static Multipliers zeros(Index n, double sigma);
};

// Equality-constraint residuals c(x); all zero at a feasible point.
struct ConstraintResiduals {
  double ca = 0.0;  // trace(Y^T W^-1 Y) - k
  VectorXd cb;      // Y Y^T e - W f
  double cc = 0.0;  // e^T f - (1 + alpha) n
  VectorXd cd;      // f - g - s
  double ce = 0.0;  // e^T g - (1 - beta) n - r

  double inf_norm() const;
};

// f^T d - trace(Y^T K Y). Throws std::invalid_argument on shape mismatch.
double sdp_objective(const KernelProblem& p, const LowRankState& st);

ConstraintResiduals residuals(const KernelProblem& p, const LowRankState& st);

double infeasibility(const KernelProblem& p, const LowRankState& st);

// Throws std::invalid_argument if `st` does not match the problem's shape.
void check_dimensions(const KernelProblem& p, const LowRankState& st);

}  // namespace neoclust
