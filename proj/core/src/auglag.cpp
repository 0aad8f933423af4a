#include "neoclust/auglag.hpp"

#include <algorithm>
#include <stdexcept>

namespace neoclust {
namespace {

struct Terms {
  MatrixXd KY;
  VectorXd col_sums;  // Y^T e
  ConstraintResiduals res;
};

Terms compute_terms(const KernelProblem& p, const LowRankState& st) {
  check_dimensions(p, st);
  Terms t;
  t.KY = p.kernel() * st.Y;
  t.col_sums = st.Y.colwise().sum().transpose();
  ConstraintResiduals& res = t.res;
  res.ca = (p.weights().cwiseInverse().asDiagonal() * st.Y)
               .cwiseProduct(st.Y)
               .sum() -
           p.k();
  res.cb = st.Y * t.col_sums - p.weights().cwiseProduct(st.f);
  res.cc = st.f.sum() - p.assignment_budget();
  res.cd = st.f - st.g - st.s;
  res.ce = st.g.sum() - p.coverage_floor() - st.r;
  return t;
}

double value_from_terms(const KernelProblem& p, const LowRankState& st,
                        const Multipliers& m, const Terms& t,
                        const VectorXd* prox_anchor) {
  const ConstraintResiduals& res = t.res;
  const double sigma = m.sigma;
  double v = st.f.dot(p.d()) - t.KY.cwiseProduct(st.Y).sum();
  v += -m.lambda1 * res.ca + 0.5 * sigma * res.ca * res.ca;
  v += -m.mu.dot(res.cb) + 0.5 * sigma * res.cb.squaredNorm();
  v += -m.lambda2 * res.cc + 0.5 * sigma * res.cc * res.cc;
  v += -m.gamma.dot(res.cd) + 0.5 * sigma * res.cd.squaredNorm();
  v += -m.lambda3 * res.ce + 0.5 * sigma * res.ce * res.ce;
  if (prox_anchor != nullptr && m.prox_weight > 0.0) {
    const VectorXd x = st.flatten();
    if (x.size() != prox_anchor->size())
      throw std::invalid_argument("proximal anchor has wrong length");
    v += 0.5 * m.prox_weight * (x - *prox_anchor).squaredNorm();
  }
  return v;
}

void check_multipliers(const KernelProblem& p, const Multipliers& m) {
  if (m.mu.size() != p.n() || m.gamma.size() != p.n())
    throw std::invalid_argument("multiplier vectors do not match problem size");
}

}  // namespace

AugLagValue auglag_eval(const KernelProblem& p, const LowRankState& st,
                        const Multipliers& m, const VectorXd* prox_anchor) {
  check_multipliers(p, m);
  const Terms t = compute_terms(p, st);
  const ConstraintResiduals& res = t.res;
  const Index n = p.n();
  const int k = p.k();
  const double sigma = m.sigma;

  const double a_coef = sigma * res.ca - m.lambda1;
  const VectorXd b_coef = sigma * res.cb - m.mu;
  const double c_coef = sigma * res.cc - m.lambda2;
  const VectorXd d_coef = sigma * res.cd - m.gamma;
  const double e_coef = sigma * res.ce - m.lambda3;

  AugLagValue out;
  out.value = value_from_terms(p, st, m, t, prox_anchor);
  out.grad.resize(LowRankState::flat_size(n, k));

  // d/dY [v^T Y Y^T e] = v (Y^T e)^T + e (Y^T v)^T
  Eigen::Map<MatrixXd> gY(out.grad.data(), n, k);
  gY = -2.0 * t.KY;
  gY += (2.0 * a_coef) * (p.weights().cwiseInverse().asDiagonal() * st.Y);
  gY += b_coef * t.col_sums.transpose();
  gY.rowwise() += (st.Y.transpose() * b_coef).transpose();

  out.grad.segment(LowRankState::offset_f(n, k), n) =
      p.d() - p.weights().cwiseProduct(b_coef) +
      VectorXd::Constant(n, c_coef) + d_coef;
  out.grad.segment(LowRankState::offset_g(n, k), n) =
      -d_coef + VectorXd::Constant(n, e_coef);
  out.grad.segment(LowRankState::offset_s(n, k), n) = -d_coef;
  out.grad[LowRankState::offset_r(n, k)] = -e_coef;

  if (prox_anchor != nullptr && m.prox_weight > 0.0)
    out.grad += m.prox_weight * (st.flatten() - *prox_anchor);
  return out;
}

double auglag_value(const KernelProblem& p, const LowRankState& st,
                    const Multipliers& m, const VectorXd* prox_anchor) {
  check_multipliers(p, m);
  return value_from_terms(p, st, m, compute_terms(p, st), prox_anchor);
}

Multipliers update_multipliers(const Multipliers& m,
                               const ConstraintResiduals& res) {
  Multipliers out = m;
  out.lambda1 -= m.sigma * res.ca;
  out.mu -= m.sigma * res.cb;
  out.lambda2 -= m.sigma * res.cc;
  out.gamma -= m.sigma * res.cd;
  out.lambda3 -= m.sigma * res.ce;
  return out;
}

Multipliers update_penalty(const Multipliers& m,
                           const ConstraintResiduals& res_now,
                           const ConstraintResiduals& res_prev,
                           const PenaltyPolicy& policy) {
  Multipliers out = m;
  if (res_now.inf_norm() > policy.eta * res_prev.inf_norm())
    out.sigma = std::min(m.sigma * policy.factor, policy.sigma_max);
  return out;
}

}  // namespace neoclust
