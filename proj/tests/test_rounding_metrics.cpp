#include <gtest/gtest.h>

#include "neoclust/log.hpp"
#include "neoclust/metrics.hpp"
#include "neoclust/rounding.hpp"
#include "neoclust/solvers.hpp"
#include "oracles.hpp"

namespace neoclust {
namespace {

TEST(Rounding, RecoversLiftedClusterings) {
  oracle::Rng rng(61);
  int failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const Index n = 4 + t % 9;
    const int k = 1 + t % 4;
    const double alpha = std::uniform_int_distribution<Index>(0, n * (k - 1))(rng) / double(n);
    const double beta = std::uniform_int_distribution<Index>(0, n - 1)(rng) / double(n);
    const KernelProblem p = oracle::random_problem(rng, n, k, alpha, beta);
    const DiscreteClustering U(oracle::random_feasible_assignment(
        rng, n, k, p.assignment_quota(), p.max_unassigned()));
    const DiscreteClustering back = round_solution(p, lift(p, U));
    if (!(back == U)) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

TEST(Rounding, OutputAlwaysMeetsCountConstraints) {
  oracle::Rng rng(62);
  for (int t = 0; t < 500; ++t) {
    const Index n = 3 + t % 10;
    const int k = 1 + t % 3;
    const double alpha = oracle::uniform(rng, 0, double(k - 1));
    const double beta = oracle::uniform(rng, 0, 0.9);
    const KernelProblem p = oracle::random_problem(rng, n, k, alpha, beta);
    LowRankState st = oracle::random_state(rng, p);
    if (t % 5 == 0) st.f.setZero();
    if (t % 7 == 0) st.g.setZero();
    const DiscreteClustering c = round_solution(p, st);
    EXPECT_EQ(c.total_assignments(), p.assignment_quota());
    EXPECT_LE(c.unassigned(), p.max_unassigned());
  }
}

TEST(Rounding, ZeroYFallsBackToWarmStart) {
  const KernelProblem p(MatrixXd::Identity(4, 4), VectorXd::Ones(4), 2, 0, 0);
  Eigen::MatrixXi U = Eigen::MatrixXi::Zero(4, 2);
  U(0, 1) = U(1, 1) = U(2, 0) = U(3, 0) = 1;
  const DiscreteClustering warm(U);
  LowRankState st = LowRankState::zeros(4, 2);
  ScopedWarningCapture cap;
  EXPECT_EQ(round_solution(p, st, &warm), warm);
  EXPECT_FALSE(cap.empty());
  const DiscreteClustering blind = round_solution(p, st);
  EXPECT_TRUE(satisfies_constraints(p, blind));
}

TEST(F1, IdenticalClusteringsScoreOne) {
  const ClusterList c{{0, 1, 2}, {2, 3}, {5}};
  EXPECT_DOUBLE_EQ(f1_score(c, c), 1.0);
}

TEST(F1, HandExample) {
  // Precision 1/2, recall 1 -> 2/3.
  EXPECT_NEAR(set_f1({0, 1}, {0}), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(f1_score({{0, 1}}, {{0}}), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(set_f1({1}, {2}), 0.0);
  EXPECT_NEAR(f1_score({{0, 1, 2, 3}}, {{0, 1}, {2, 3}}), 2.0 / 3.0, 1e-15);
}

TEST(F1, InvariantUnderClusterOrder) {
  const ClusterList found{{0, 1, 4}, {2, 3}, {4, 5, 6}};
  const ClusterList truth{{0, 1}, {2, 3, 4}, {5, 6}};
  ClusterList swapped{found[2], found[0], found[1]};
  EXPECT_DOUBLE_EQ(f1_score(found, truth), f1_score(swapped, truth));
}

TEST(F1, EmptyFoundScoresZeroWithWarning) {
  ScopedWarningCapture cap;
  EXPECT_EQ(f1_score({{}, {}}, {{0}}), 0.0);
  EXPECT_FALSE(cap.empty());
  EXPECT_THROW(f1_score({{0}}, {{}}), std::invalid_argument);
}

TEST(Quartiles, InterpolatesOrderStatistics) {
  const Quartiles q = quartiles({5, 1, 3, 2, 4});
  EXPECT_EQ(q.min, 1);
  EXPECT_EQ(q.q1, 2);
  EXPECT_EQ(q.median, 3);
  EXPECT_EQ(q.q3, 4);
  EXPECT_EQ(q.max, 5);
  EXPECT_DOUBLE_EQ(quartiles({1, 2, 3, 4}).median, 2.5);
  EXPECT_THROW(quartiles({}), std::invalid_argument);
}

}  // namespace
}  // namespace neoclust
