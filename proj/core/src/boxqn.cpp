#include "neoclust/boxqn.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace neoclust {
namespace {

struct CurvaturePair {
  VectorXd s;
  VectorXd y;
  double rho;  // 1 / (s'y)
};

// Two-loop recursion restricted to the free variables (mask entries 1/0).
VectorXd lbfgs_direction(const VectorXd& grad, const VectorXd& mask,
                         const std::deque<CurvaturePair>& pairs) {
  VectorXd q = grad.cwiseProduct(mask);
  std::vector<double> alpha(pairs.size());
  for (std::size_t j = pairs.size(); j-- > 0;) {
    const auto& pr = pairs[j];
    alpha[j] = pr.rho * pr.s.cwiseProduct(mask).dot(q);
    q -= alpha[j] * pr.y.cwiseProduct(mask);
  }
  const auto& last = pairs.back();
  const double gamma = last.s.dot(last.y) / last.y.squaredNorm();
  VectorXd r = gamma * q;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto& pr = pairs[j];
    const double beta = pr.rho * pr.y.cwiseProduct(mask).dot(r);
    r += (alpha[j] - beta) * pr.s.cwiseProduct(mask);
  }
  return -r.cwiseProduct(mask);
}

// Zeroes components that would immediately leave the box.
void clip_blocked(const VectorXd& x, const VectorXd& lower,
                  const VectorXd& upper, VectorXd& d) {
  for (Index i = 0; i < d.size(); ++i) {
    if ((x[i] <= lower[i] && d[i] < 0.0) || (x[i] >= upper[i] && d[i] > 0.0))
      d[i] = 0.0;
  }
}

}  // namespace

std::string_view to_string(BoxStatus s) {
  switch (s) {
    case BoxStatus::kConverged: return "converged";
    case BoxStatus::kMaxEvaluations: return "maxed";
    case BoxStatus::kLineSearchFailed: return "line_search_failed";
    case BoxStatus::kNonFinite: return "non_finite";
  }
  return "unknown";
}

VectorXd project_box(const VectorXd& x, const VectorXd& lower,
                     const VectorXd& upper) {
  return x.cwiseMax(lower).cwiseMin(upper);
}

double projected_gradient_norm(const VectorXd& x, const VectorXd& grad,
                               const VectorXd& lower, const VectorXd& upper) {
  if (x.size() == 0) return 0.0;
  return (x - project_box(x - grad, lower, upper)).cwiseAbs().maxCoeff();
}

BoxResult minimize_box(const BoxProblem& problem, const BoxOptions& opts) {
  const VectorXd& lower = problem.lower;
  const VectorXd& upper = problem.upper;
  const Index dim = problem.x0.size();
  if (lower.size() != dim || upper.size() != dim)
    throw std::invalid_argument("bound vectors do not match x0");
  if ((lower.array() > upper.array()).any())
    throw std::invalid_argument("lower bound exceeds upper bound");
  if (!problem.objective) throw std::invalid_argument("objective is empty");

  BoxResult out;
  out.x = project_box(problem.x0, lower, upper);
  out.grad = VectorXd::Zero(dim);
  out.value = problem.objective(out.x, out.grad);
  out.evaluations = 1;
  if (!std::isfinite(out.value) || !out.grad.allFinite()) {
    out.status = BoxStatus::kNonFinite;
    return out;
  }

  std::deque<CurvaturePair> pairs;
  VectorXd mask(dim);
  VectorXd trial_grad(dim);

  while (true) {
    out.pg_norm = projected_gradient_norm(out.x, out.grad, lower, upper);
    if (out.pg_norm <= opts.tol_pg) {
      out.status = BoxStatus::kConverged;
      return out;
    }
    if (out.evaluations >= opts.max_evals) {
      out.status = BoxStatus::kMaxEvaluations;
      return out;
    }

    for (Index i = 0; i < dim; ++i) {
      const bool at_lower = out.x[i] <= lower[i] && out.grad[i] > 0.0;
      const bool at_upper = out.x[i] >= upper[i] && out.grad[i] < 0.0;
      mask[i] = (at_lower || at_upper) ? 0.0 : 1.0;
    }

    bool steepest = pairs.empty();
    VectorXd d;
    if (!steepest) {
      d = lbfgs_direction(out.grad, mask, pairs);
      clip_blocked(out.x, lower, upper, d);
      const double slope = out.grad.dot(d);
      if (!(slope < 0.0) || !d.allFinite()) steepest = true;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (steepest) {
        d = -out.grad.cwiseProduct(mask);
        clip_blocked(out.x, lower, upper, d);
        // Barzilai-Borwein scale from the latest pair, else unit max step.
        double scale = 1.0;
        if (!pairs.empty()) {
          const auto& last = pairs.back();
          scale = last.s.squaredNorm() * last.rho;
        } else {
          const double gmax = d.cwiseAbs().maxCoeff();
          if (gmax > 0.0) scale = 1.0 / std::max(1.0, gmax);
        }
        d *= scale;
      }

      double t = 1.0;
      for (int bt = 0; bt <= opts.max_backtracks; ++bt, t *= opts.backtrack) {
        if (out.evaluations >= opts.max_evals) break;
        const VectorXd trial = project_box(out.x + t * d, lower, upper);
        const VectorXd step = trial - out.x;
        const double slope = out.grad.dot(step);
        if (!(slope < 0.0)) {
          if (step.cwiseAbs().maxCoeff() == 0.0) break;
          continue;
        }
        const double value = problem.objective(trial, trial_grad);
        ++out.evaluations;
        if (!std::isfinite(value) || !trial_grad.allFinite()) continue;
        if (value <= out.value + opts.armijo * slope) {
          const VectorXd y = trial_grad - out.grad;
          const double sy = step.dot(y);
          if (sy > opts.curvature_eps * step.norm() * y.norm()) {
            pairs.push_back({step, y, 1.0 / sy});
            if (static_cast<int>(pairs.size()) > opts.memory) pairs.pop_front();
          }
          out.x = trial;
          out.value = value;
          out.grad = trial_grad;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (steepest) break;
        // Quasi-Newton direction failed: discard curvature and retry.
        pairs.clear();
        steepest = true;
      }
    }

    if (!accepted) {
      out.pg_norm = projected_gradient_norm(out.x, out.grad, lower, upper);
      out.status = out.evaluations >= opts.max_evals
                       ? BoxStatus::kMaxEvaluations
                       : BoxStatus::kLineSearchFailed;
      return out;
    }
    ++out.iterations;
  }
}

}  // namespace neoclust
