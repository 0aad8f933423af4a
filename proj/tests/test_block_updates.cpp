#include <gtest/gtest.h>

#include "neoclust/auglag.hpp"
#include "neoclust/block_updates.hpp"
#include "neoclust/solvers.hpp"
#include "oracles.hpp"

namespace neoclust {
namespace {

// Three-case optimality check for the box-plus-rank-one QP, with
// tau = e^T x: x_i = 0 needs a_i + sigma tau >= 0, x_i = b needs the full
// gradient <= 0, and interior coordinates need it to vanish.
double kkt_violation(const VectorXd& a, const VectorXd& D, double sigma, double b,
                     const VectorXd& x) {
  const double tau = x.sum();
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double g = a[i] + sigma * D[i] * x[i] + sigma * tau;
    if (x[i] < 0.0 || x[i] > b) return std::numeric_limits<double>::infinity();
    if (x[i] == 0.0)
      worst = std::max(worst, -g);
    else if (x[i] == b)
      worst = std::max(worst, g);
    else
      worst = std::max(worst, std::abs(g));
  }
  return worst;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

TEST(BoxSimplexQuadratic, ZeroLinearTermGivesZero) {
  const VectorXd x = box_simplex_quadratic(VectorXd::Zero(4), VectorXd::Ones(4), 1.0, 1.0);
  EXPECT_EQ(x, VectorXd::Zero(4));
}

TEST(BoxSimplexQuadratic, TwoVariableHandExample) {
  const VectorXd x = box_simplex_quadratic(VectorXd::Constant(2, -1.0), VectorXd::Ones(2), 1.0, 1.0);
  EXPECT_NEAR(x[0], 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(x[1], 1.0 / 3.0, 1e-14);
}

TEST(BoxSimplexQuadratic, MatchesProjectedGradientOracle) {
  oracle::Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const Index n = 1 + t % 50;
    VectorXd a(n), D(n);
    for (Index i = 0; i < n; ++i) {
      a[i] = oracle::uniform(rng, -20, 5);
      D[i] = oracle::uniform(rng, 0.1, 5);
    }
    const double sigma = oracle::uniform(rng, 0.5, 10);
    const double b = t % 2 ? 1.0 : 3.0;
    const VectorXd x = box_simplex_quadratic(a, D, sigma, b);
    const VectorXd ref = oracle::box_qp_oracle(a, D, sigma, b);
    const double gap = oracle::box_qp_value(a, D, sigma, x) - oracle::box_qp_value(a, D, sigma, ref);
    EXPECT_LE(gap, 1e-6) << "trial " << t;
    EXPECT_LE(kkt_violation(a, D, sigma, b, x), 1e-8) << "trial " << t;
  }
}

TEST(BoxSimplexQuadratic, CoversAllThreeCases) {
  // One coordinate pinned at each bound and one interior.
  VectorXd a(3), D = VectorXd::Ones(3);
  a << 5, -10, -2;
  const VectorXd x = box_simplex_quadratic(a, D, 1.0, 1.0);
  EXPECT_EQ(x[0], 0.0);
  EXPECT_EQ(x[1], 1.0);
  EXPECT_GT(x[2], 0.0);
  EXPECT_LT(x[2], 1.0);
  EXPECT_NEAR(x[2], 0.5, 1e-14);  // -2 + x + (1 + x) = 0
  EXPECT_LE(kkt_violation(a, D, 1.0, 1.0, x), 1e-12);
}

TEST(BoxSimplexQuadratic, RejectsBadInput) {
  EXPECT_THROW(box_simplex_quadratic(VectorXd::Zero(2), VectorXd::Zero(2), 1, 1),
               std::invalid_argument);
  EXPECT_THROW(box_simplex_quadratic(VectorXd::Zero(2), VectorXd::Ones(3), 1, 1),
               std::invalid_argument);
  EXPECT_THROW(box_simplex_quadratic(VectorXd::Zero(2), VectorXd::Ones(2), 0, 1),
               std::invalid_argument);
}

TEST(ClosedForms, HandExamples) {
  const VectorXd s = closed_form_s(VectorXd::Constant(1, 1.0), VectorXd::Constant(1, 0.2),
                                   VectorXd::Constant(1, 0.4), 2.0);
  EXPECT_NEAR(s[0], 0.6, 1e-15);
  EXPECT_EQ(closed_form_s(VectorXd::Zero(1), VectorXd::Ones(1), VectorXd::Zero(1), 1.0)[0], 0.0);
  // e^T g = 3, (1 - 0.25) 4 = 3, lambda3 = -1, sigma = 2 -> 0.5
  EXPECT_DOUBLE_EQ(closed_form_r(VectorXd::Constant(4, 0.75), 0.25, 4, -1.0, 2.0), 0.5);
  EXPECT_EQ(closed_form_r(VectorXd::Zero(4), 0.25, 4, 0.0, 2.0), 0.0);
}

TEST(ClosedForms, MatchOneDimensionalSearchOnLagrangian) {
  oracle::Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const KernelProblem p = oracle::random_problem(rng, 5, 2, 0.3, 0.3);
    LowRankState st = oracle::random_state(rng, p);
    const Multipliers m = oracle::random_multipliers(rng, 5, oracle::uniform(rng, 0.5, 5));
    const VectorXd s = closed_form_s(st.f, st.g, m.gamma, m.sigma);
    for (Index i = 0; i < 5; ++i) {
      LowRankState probe = st;
      const double best = golden_section(
          [&](double v) {
            probe.s[i] = v;
            return auglag_value(p, probe, m);
          },
          0.0, 10.0);
      EXPECT_NEAR(s[i], best, 1e-6);
    }
    const double r = closed_form_r(st.g, p.beta(), p.n(), m.lambda3, m.sigma);
    LowRankState probe = st;
    const double best = golden_section(
        [&](double v) {
          probe.r = v;
          return auglag_value(p, probe, m);
        },
        0.0, 10.0);
    EXPECT_NEAR(r, best, 1e-6);
  }
}

TEST(BlockQps, MatchLagrangianUpToConstant) {
  oracle::Rng rng(43);
  const KernelProblem p = oracle::random_problem(rng, 6, 3, 0.4, 0.3);
  const LowRankState st = oracle::random_state(rng, p);
  const Multipliers m = oracle::random_multipliers(rng, 6, 3.0);
  const BoxSimplexQP fq = f_block_qp(p, st, m);
  const BoxSimplexQP gq = g_block_qp(p, st, m);
  const double base = auglag_value(p, st, m);
  for (int t = 0; t < 5; ++t) {
    LowRankState a = st, b = st;
    for (Index i = 0; i < 6; ++i) {
      a.f[i] = oracle::uniform(rng, 0, 3);
      b.g[i] = oracle::uniform(rng, 0, 1);
    }
    EXPECT_NEAR(auglag_value(p, a, m) - base, fq.value(a.f) - fq.value(st.f), 1e-9);
    EXPECT_NEAR(auglag_value(p, b, m) - base, gq.value(b.g) - gq.value(st.g), 1e-9);
  }
}

TEST(BlockQps, LinearBlockSweepIsOptimalPerBlock) {
  oracle::Rng rng(44);
  for (int t = 0; t < 10; ++t) {
    const KernelProblem p = oracle::random_problem(rng, 7, 2, 0.3, 0.3);
    LowRankState st = oracle::random_state(rng, p);
    const Multipliers m = oracle::random_multipliers(rng, 7, 2.0);
    update_linear_blocks(p, st, m);
    EXPECT_TRUE(st.within_bounds(p));
    // r is updated last, so it is exactly optimal; s is optimal given the g
    // that was current when it was set, which is the final g.
    EXPECT_NEAR(st.r, closed_form_r(st.g, p.beta(), p.n(), m.lambda3, m.sigma), 1e-14);
    EXPECT_LT((st.s - closed_form_s(st.f, st.g, m.gamma, m.sigma)).norm(), 1e-14);
    const double v = auglag_value(p, st, m);
    for (int probe = 0; probe < 20; ++probe) {
      LowRankState q = st;
      const Index i = probe % 7;
      q.r = std::max(0.0, st.r + oracle::uniform(rng, -0.1, 0.1));
      q.s[i] = std::max(0.0, st.s[i] + oracle::uniform(rng, -0.1, 0.1));
      EXPECT_GE(auglag_value(p, q, m), v - 1e-10);
    }
  }
}

}  // namespace
}  // namespace neoclust
