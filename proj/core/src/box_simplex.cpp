#include "neoclust/block_updates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neoclust {
namespace {

VectorXd point_at(const BoxSimplexQP& qp, double tau) {
  const VectorXd raw = -(qp.a.array() + qp.sigma * tau) /
                       (qp.sigma * qp.D.array());
  return raw.cwiseMax(0.0).cwiseMin(qp.b);
}

// Per-coordinate class of x(tau): 0 at lower bound, 2 at upper, 1 interior.
Eigen::VectorXi classify(const BoxSimplexQP& qp, double tau) {
  const VectorXd raw = -(qp.a.array() + qp.sigma * tau) /
                       (qp.sigma * qp.D.array());
  Eigen::VectorXi cls(raw.size());
  for (Index i = 0; i < raw.size(); ++i)
    cls[i] = raw[i] <= 0.0 ? 0 : (raw[i] >= qp.b ? 2 : 1);
  return cls;
}

}  // namespace

double BoxSimplexQP::value(const VectorXd& x) const {
  const double sum = x.sum();
  return x.dot(a) + 0.5 * sigma * x.cwiseProduct(D).dot(x) +
         0.5 * sigma * sum * sum;
}

VectorXd BoxSimplexQP::gradient(const VectorXd& x) const {
  return a + sigma * D.cwiseProduct(x) + VectorXd::Constant(x.size(), sigma * x.sum());
}

VectorXd box_simplex_quadratic(const BoxSimplexQP& qp) {
  const Index n = qp.a.size();
  if (qp.D.size() != n) throw std::invalid_argument("a and D lengths differ");
  if (!(qp.sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (!(qp.b > 0.0)) throw std::invalid_argument("b must be > 0");
  if ((qp.D.array() <= 0.0).any())
    throw std::invalid_argument("D must be strictly positive");
  if (n == 0) return VectorXd();

  auto F = [&](double tau) { return tau - point_at(qp, tau).sum(); };

  double lo = 0.0;
  double hi = qp.b * double(n);
  if (F(lo) >= 0.0) return point_at(qp, lo);

  const double width_tol = 1e-12 * (1.0 + hi);
  for (int it = 0; it < 200 && hi - lo >= width_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double tau = 0.5 * (lo + hi);

  // On a fixed active set F is affine in tau; solve it exactly.
  const Eigen::VectorXi cls = classify(qp, tau);
  double slope = 1.0;
  double rhs = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (cls[i] == 1) {
      slope += 1.0 / qp.D[i];
      rhs -= qp.a[i] / (qp.sigma * qp.D[i]);
    } else if (cls[i] == 2) {
      rhs += qp.b;
    }
  }
  const double polished = rhs / slope;
  if (std::isfinite(polished) && classify(qp, polished) == cls) tau = polished;

  return point_at(qp, tau);
}

VectorXd box_simplex_quadratic(const VectorXd& a, const VectorXd& D,
                               double sigma, double b) {
  return box_simplex_quadratic(BoxSimplexQP{a, D, sigma, b});
}

VectorXd closed_form_s(const VectorXd& f, const VectorXd& g,
                       const VectorXd& gamma, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  return (f - g - gamma / sigma).cwiseMax(0.0);
}

double closed_form_r(const VectorXd& g, double beta, Index n, double lambda3,
                     double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  return std::max(0.0, g.sum() - (1.0 - beta) * double(n) - lambda3 / sigma);
}

BoxSimplexQP f_block_qp(const KernelProblem& p, const LowRankState& st,
                        const Multipliers& m) {
  check_dimensions(p, st);
  const Index n = p.n();
  const double sigma = m.sigma;
  const VectorXd& w = p.weights();
  const VectorXd q = st.Y * st.Y.colwise().sum().transpose();  // Y Y^T e

  BoxSimplexQP qp;
  qp.sigma = sigma;
  qp.b = double(p.k());
  qp.D = w.cwiseProduct(w) + VectorXd::Ones(n);
  qp.a = p.d() + w.cwiseProduct(m.mu) - sigma * w.cwiseProduct(q) -
         VectorXd::Constant(n, m.lambda2 + sigma * p.assignment_budget()) -
         m.gamma - sigma * (st.g + st.s);
  return qp;
}

BoxSimplexQP g_block_qp(const KernelProblem& p, const LowRankState& st,
                        const Multipliers& m) {
  check_dimensions(p, st);
  const Index n = p.n();
  const double sigma = m.sigma;

  BoxSimplexQP qp;
  qp.sigma = sigma;
  qp.b = 1.0;
  qp.D = VectorXd::Ones(n);
  qp.a = m.gamma - sigma * (st.f - st.s) -
         VectorXd::Constant(n, m.lambda3 + sigma * (p.coverage_floor() + st.r));
  return qp;
}

}  // namespace neoclust
