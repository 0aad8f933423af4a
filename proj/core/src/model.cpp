#include "neoclust/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace neoclust {

KernelProblem::KernelProblem(MatrixXd kernel, VectorXd weights, int k,
                             double alpha, double beta)
    : kernel_(std::move(kernel)), weights_(std::move(weights)), k_(k),
      alpha_(alpha), beta_(beta) {
  const Index n = kernel_.rows();
  if (n == 0 || kernel_.cols() != n)
    throw std::invalid_argument("kernel matrix must be square and nonempty");
  if (weights_.size() != n)
    throw std::invalid_argument("weight vector length does not match kernel");
  if (!kernel_.allFinite() || !weights_.allFinite())
    throw std::invalid_argument("kernel and weights must be finite");
  if ((weights_.array() <= 0.0).any())
    throw std::invalid_argument("weights must be strictly positive");
  if (k < 1) throw std::invalid_argument("cluster count k must be >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("beta must lie in [0, 1)");
  if ((1.0 + alpha) * double(n) > double(n) * double(k) + 1e-9)
    throw std::invalid_argument(
        "(1 + alpha) n exceeds n k: more assignments than cells");

  const double scale = std::max(1.0, kernel_.cwiseAbs().maxCoeff());
  const double asym = (kernel_ - kernel_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw std::invalid_argument("kernel matrix is not symmetric (max |K - K^T| = " +
                                std::to_string(asym) + ")");

  d_ = weights_.cwiseProduct(kernel_.diagonal());
}

Index KernelProblem::assignment_quota() const {
  return static_cast<Index>(std::llround(assignment_budget()));
}

Index KernelProblem::max_unassigned() const {
  // Guard against 0.1 * 30 evaluating to 2.9999999999999996.
  return static_cast<Index>(std::floor(beta_ * double(n()) + 1e-9));
}

KernelProblem KernelProblem::with_parameters(int k, double alpha,
                                             double beta) const {
  return KernelProblem(kernel_, weights_, k, alpha, beta);
}

LowRankState LowRankState::zeros(Index n, int k) {
  LowRankState st;
  st.Y = MatrixXd::Zero(n, k);
  st.f = VectorXd::Zero(n);
  st.g = VectorXd::Zero(n);
  st.s = VectorXd::Zero(n);
  st.r = 0.0;
  return st;
}

LowRankState LowRankState::from_flat(const KernelProblem& p,
                                     const VectorXd& x) {
  const Index n = p.n();
  const int k = p.k();
  if (x.size() != flat_size(n, k))
    throw std::invalid_argument("flat vector has wrong length");
  LowRankState st;
  st.Y = Eigen::Map<const MatrixXd>(x.data(), n, k);
  st.f = x.segment(offset_f(n, k), n);
  st.g = x.segment(offset_g(n, k), n);
  st.s = x.segment(offset_s(n, k), n);
  st.r = x[offset_r(n, k)];
  return st;
}

VectorXd LowRankState::flatten() const {
  const Index n = this->n();
  const int k = this->k();
  VectorXd x(flat_size(n, k));
  x.head(n * k) = Eigen::Map<const VectorXd>(Y.data(), n * k);
  x.segment(offset_f(n, k), n) = f;
  x.segment(offset_g(n, k), n) = g;
  x.segment(offset_s(n, k), n) = s;
  x[offset_r(n, k)] = r;
  return x;
}

void LowRankState::project(const KernelProblem& p) {
  check_dimensions(p, *this);
  Y = Y.cwiseMax(0.0);
  f = f.cwiseMax(0.0).cwiseMin(double(p.k()));
  g = g.cwiseMax(0.0).cwiseMin(1.0);
  s = s.cwiseMax(0.0);
  r = std::max(r, 0.0);
}

bool LowRankState::within_bounds(const KernelProblem& p) const {
  return (Y.array() >= 0.0).all() && (f.array() >= 0.0).all() &&
         (f.array() <= double(p.k())).all() && (g.array() >= 0.0).all() &&
         (g.array() <= 1.0).all() && (s.array() >= 0.0).all() && r >= 0.0;
}

bool LowRankState::all_finite() const {
  return Y.allFinite() && f.allFinite() && g.allFinite() && s.allFinite() &&
         std::isfinite(r);
}

void state_bounds(const KernelProblem& p, VectorXd& lower, VectorXd& upper) {
  const Index n = p.n();
  const int k = p.k();
  const double inf = std::numeric_limits<double>::infinity();
  lower = VectorXd::Zero(LowRankState::flat_size(n, k));
  upper = VectorXd::Constant(lower.size(), inf);
  upper.segment(LowRankState::offset_f(n, k), n).setConstant(double(k));
  upper.segment(LowRankState::offset_g(n, k), n).setConstant(1.0);
}

Multipliers Multipliers::zeros(Index n, double sigma) {
  Multipliers m;
  m.mu = VectorXd::Zero(n);
  m.gamma = VectorXd::Zero(n);
  m.sigma = sigma;
  return m;
}

double ConstraintResiduals::inf_norm() const {
  double v = std::max({std::abs(ca), std::abs(cc), std::abs(ce)});
  if (cb.size() > 0) v = std::max(v, cb.cwiseAbs().maxCoeff());
  if (cd.size() > 0) v = std::max(v, cd.cwiseAbs().maxCoeff());
  return v;
}

void check_dimensions(const KernelProblem& p, const LowRankState& st) {
  const Index n = p.n();
  if (st.Y.rows() != n || st.Y.cols() != p.k() || st.f.size() != n ||
      st.g.size() != n || st.s.size() != n)
    throw std::invalid_argument("state dimensions do not match problem (n=" +
                                std::to_string(n) +
                                ", k=" + std::to_string(p.k()) + ")");
}

double sdp_objective(const KernelProblem& p, const LowRankState& st) {
  check_dimensions(p, st);
  const MatrixXd KY = p.kernel() * st.Y;
  return st.f.dot(p.d()) - KY.cwiseProduct(st.Y).sum();
}

ConstraintResiduals residuals(const KernelProblem& p, const LowRankState& st) {
  check_dimensions(p, st);
  ConstraintResiduals res;
  const VectorXd inv_w = p.weights().cwiseInverse();
  res.ca = (inv_w.asDiagonal() * st.Y).cwiseProduct(st.Y).sum() - p.k();
  const VectorXd col_sums = st.Y.transpose() * VectorXd::Ones(p.n());
  res.cb = st.Y * col_sums - p.weights().cwiseProduct(st.f);
  res.cc = st.f.sum() - p.assignment_budget();
  res.cd = st.f - st.g - st.s;
  res.ce = st.g.sum() - p.coverage_floor() - st.r;
  return res;
}

double infeasibility(const KernelProblem& p, const LowRankState& st) {
  return residuals(p, st).inf_norm();
}

}  // namespace neoclust
