#include <gtest/gtest.h>

#include <limits>

#include "neoclust/boxqn.hpp"
#include "oracles.hpp"

namespace neoclust {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoxProblem quadratic(const MatrixXd& Q, const VectorXd& c, const VectorXd& lo,
                     const VectorXd& hi, const VectorXd& x0) {
  BoxProblem bp;
  bp.lower = lo;
  bp.upper = hi;
  bp.x0 = x0;
  bp.objective = [Q, c](const VectorXd& x, VectorXd& g) {
    g = Q * x + c;
    return 0.5 * x.dot(Q * x) + c.dot(x);
  };
  return bp;
}

// Projected gradient with step 1 / L, run to convergence.
VectorXd projected_gradient_oracle(const MatrixXd& Q, const VectorXd& c, const VectorXd& lo,
                                   const VectorXd& hi) {
  const double L = Q.eigenvalues().real().maxCoeff();
  VectorXd x = VectorXd::Zero(c.size()).cwiseMax(lo).cwiseMin(hi);
  for (int it = 0; it < 200000; ++it) {
    const VectorXd next = (x - (Q * x + c) / L).cwiseMax(lo).cwiseMin(hi);
    if ((next - x).lpNorm<Eigen::Infinity>() < 1e-15) break;
    x = next;
  }
  return x;
}

TEST(MinimizeBox, SquaredNormOnSymmetricBox) {
  const VectorXd lo = VectorXd::Constant(3, -1), hi = VectorXd::Constant(3, 1);
  const BoxResult r = minimize_box(
      quadratic(2 * MatrixXd::Identity(3, 3), VectorXd::Zero(3), lo, hi, VectorXd::Constant(3, 0.8)));
  EXPECT_EQ(r.status, BoxStatus::kConverged);
  EXPECT_LT(r.x.lpNorm<Eigen::Infinity>(), 1e-7);
}

TEST(MinimizeBox, ActiveUpperBound) {
  // (x - 2)^2 on [0, 1] -> x = 1, value 1.
  BoxProblem bp;
  bp.lower = VectorXd::Zero(1);
  bp.upper = VectorXd::Ones(1);
  bp.x0 = VectorXd::Zero(1);
  bp.objective = [](const VectorXd& x, VectorXd& g) {
    g[0] = 2 * (x[0] - 2);
    return (x[0] - 2) * (x[0] - 2);
  };
  const BoxResult r = minimize_box(bp);
  EXPECT_EQ(r.status, BoxStatus::kConverged);
  EXPECT_DOUBLE_EQ(r.x[0], 1.0);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
}

TEST(MinimizeBox, RandomStronglyConvexQuadraticsMatchOracle) {
  oracle::Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const Index n = 20;
    MatrixXd B(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) B(i, j) = oracle::uniform(rng, -1, 1);
    const MatrixXd Q = B * B.transpose() / double(n) + 0.1 * MatrixXd::Identity(n, n);
    VectorXd c(n), lo(n), hi(n);
    for (Index i = 0; i < n; ++i) {
      c[i] = oracle::uniform(rng, -2, 2);
      lo[i] = i % 4 == 0 ? -kInf : oracle::uniform(rng, -1, 0);
      hi[i] = i % 5 == 0 ? kInf : oracle::uniform(rng, 0, 1);
    }
    BoxOptions opts;
    opts.tol_pg = 1e-10;
    const BoxResult r = minimize_box(quadratic(Q, c, lo, hi, VectorXd::Zero(n)), opts);
    const VectorXd x = projected_gradient_oracle(Q, c, lo, hi);
    EXPECT_LT((r.x - x).lpNorm<Eigen::Infinity>(), 1e-6) << "trial " << t;
    EXPECT_LT(projected_gradient_norm(r.x, Q * r.x + c, lo, hi), 1e-9);
    // Box KKT: free coordinates have zero gradient, bound ones point inward.
    const VectorXd g = Q * r.x + c;
    for (Index i = 0; i < n; ++i) {
      if (r.x[i] <= lo[i]) EXPECT_GE(g[i], -1e-8);
      else if (r.x[i] >= hi[i]) EXPECT_LE(g[i], 1e-8);
      else EXPECT_NEAR(g[i], 0.0, 1e-8);
    }
  }
}

TEST(MinimizeBox, IteratesStayFeasibleAndValuesDecrease) {
  oracle::Rng rng(32);
  const Index n = 8;
  const MatrixXd Q = oracle::random_psd(rng, n) + 0.05 * MatrixXd::Identity(n, n);
  VectorXd c(n);
  for (Index i = 0; i < n; ++i) c[i] = oracle::uniform(rng, -1, 1);
  const VectorXd lo = VectorXd::Zero(n), hi = VectorXd::Constant(n, 0.5);
  std::vector<double> values;
  bool in_box = true;
  BoxProblem bp = quadratic(Q, c, lo, hi, VectorXd::Constant(n, 3.0));
  const auto inner = bp.objective;
  bp.objective = [&](const VectorXd& x, VectorXd& g) {
    in_box = in_box && (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
    return inner(x, g);
  };
  BoxOptions opts;
  for (int cap = 1; cap <= 30; ++cap) {
    opts.max_evals = cap;
    values.push_back(minimize_box(bp, opts).value);
  }
  EXPECT_TRUE(in_box);
  for (std::size_t i = 1; i < values.size(); ++i) EXPECT_LE(values[i], values[i - 1] + 1e-15);
}

TEST(MinimizeBox, ReportsNonFiniteObjective) {
  BoxProblem bp;
  bp.lower = VectorXd::Zero(1);
  bp.upper = VectorXd::Ones(1);
  bp.x0 = VectorXd::Constant(1, 0.5);
  bp.objective = [](const VectorXd&, VectorXd& g) {
    g[0] = std::numeric_limits<double>::quiet_NaN();
    return std::numeric_limits<double>::quiet_NaN();
  };
  EXPECT_EQ(minimize_box(bp).status, BoxStatus::kNonFinite);
}

TEST(BoxHelpers, ProjectionAndProjectedGradient) {
  VectorXd x(3), lo(3), hi(3), g(3);
  x << -1, 0.5, 2;
  lo << 0, 0, 0;
  hi << 1, 1, kInf;
  EXPECT_EQ(project_box(x, lo, hi), (VectorXd(3) << 0, 0.5, 2).finished());
  const VectorXd y = (VectorXd(3) << 0, 0.5, 1).finished();
  g << 1, 0, -3;  // lower-bound coordinate pushing outward, free zero, upper free
  EXPECT_DOUBLE_EQ(projected_gradient_norm(y, g, lo, hi), 3.0);
}

}  // namespace
}  // namespace neoclust
