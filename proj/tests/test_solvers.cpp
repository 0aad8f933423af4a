#include <gtest/gtest.h>

#include "neoclust/io.hpp"
#include "neoclust/kernels.hpp"
#include "neoclust/log.hpp"
#include "neoclust/pipeline.hpp"
#include "neoclust/solvers.hpp"
#include "neoclust/synthetic.hpp"
#include "oracles.hpp"

namespace neoclust {

void PrintTo(Method m, std::ostream* os) { *os << to_string(m); }

namespace {

const std::string kKarate = std::string(NEOCLUST_DATA_DIR) + "/karate.txt";

TEST(Lift, FeasibleClusteringHasZeroResiduals) {
  const KernelProblem p(MatrixXd::Identity(4, 4), VectorXd::Constant(4, 2.0), 2, 0.25, 0.0);
  Eigen::MatrixXi U(4, 2);
  U << 1, 0, 1, 1, 1, 0, 0, 1;
  const LowRankState st = lift(p, DiscreteClustering(U));
  EXPECT_LT(residuals(p, st).inf_norm(), 1e-12);
  // Y_ic = w_i u_ic / sqrt(W_c), W_0 = 6, W_1 = 4.
  EXPECT_NEAR(st.Y(0, 0), 2.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(st.Y(3, 1), 1.0, 1e-15);
  EXPECT_EQ(st.f, (VectorXd(4) << 1, 2, 1, 1).finished());
  EXPECT_EQ(st.s, (VectorXd(4) << 0, 1, 0, 0).finished());
}

TEST(Lift, OverAssignmentShowsInCountResidual) {
  const KernelProblem p(MatrixXd::Identity(4, 4), VectorXd::Ones(4), 2, 0.25, 0.0);
  Eigen::MatrixXi U(4, 2);
  U << 1, 1, 1, 1, 1, 0, 0, 1;
  ScopedWarningCapture cap;
  const LowRankState st = lift(p, DiscreteClustering(U));
  EXPECT_FALSE(cap.empty());
  EXPECT_DOUBLE_EQ(residuals(p, st).cc, 1.0);
}

TEST(Lift, SdpObjectiveEqualsNeoObjective) {
  oracle::Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    const KernelProblem p = oracle::random_problem(rng, 8, 3, 0.25, 0.25);
    const Eigen::MatrixXi U = oracle::random_feasible_assignment(
        rng, 8, 3, p.assignment_quota(), p.max_unassigned());
    const LowRankState st = lift(p, DiscreteClustering(U));
    EXPECT_NEAR(sdp_objective(p, st), oracle::naive_neo_objective(p.kernel(), p.weights(), U),
                1e-10);
  }
}

TEST(Solvers, MethodNames) {
  for (Method m : {Method::kAlm, Method::kPalm, Method::kAdmm, Method::kSadmm})
    EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("newton"), std::invalid_argument);
}

TEST(Solvers, RejectInvalidConfig) {
  const KernelProblem p(MatrixXd::Identity(3, 3), VectorXd::Ones(3), 1, 0, 0);
  SolverConfig cfg;
  cfg.tol_infeas = 0.0;
  EXPECT_THROW(solve_alm(p, LowRankState::zeros(3, 1), cfg), std::invalid_argument);
  cfg = {};
  cfg.sigma0 = -1.0;
  EXPECT_THROW(solve_admm(p, LowRankState::zeros(3, 1), cfg), std::invalid_argument);
  cfg = {};
  EXPECT_THROW(solve_alm(p, LowRankState::zeros(3, 2), cfg), std::invalid_argument);
}

TEST(Solvers, DefaultPenaltyFollowsKernelScale) {
  MatrixXd K = MatrixXd::Identity(2, 2) * 30.0;
  EXPECT_DOUBLE_EQ(default_sigma0(KernelProblem(K, VectorXd::Constant(2, 3.0), 1, 0, 0)), 10.0);
  EXPECT_DOUBLE_EQ(default_sigma0(KernelProblem(K / 300.0, VectorXd::Ones(2), 1, 0, 0)), 1.0);
}

class KarateSolvers : public ::testing::TestWithParam<Method> {};

TEST_P(KarateSolvers, ReachFeasibilityTolerance) {
  const GraphKernel gk = kernel_from_graph(io::read_edge_list(kKarate), 2, 0.1, 0.1);
  const KernelProblem& p = gk.problem;
  IterativeOptions io;
  io.seed = 7;
  const IterativeResult warm = neo_iterate(p, std::nullopt, io);
  SolverConfig cfg;
  cfg.method = GetParam();
  const SolveResult r = solve(p, lift(p, warm.clustering), cfg);
  EXPECT_EQ(r.status, SolveStatus::kConverged);
  EXPECT_LT(infeasibility(p, r.state), 1e-3);
  EXPECT_TRUE(r.state.within_bounds(p));
  ASSERT_EQ(r.trace.size(), static_cast<std::size_t>(r.outer_iterations + 1));
  EXPECT_DOUBLE_EQ(r.trace.back().infeasibility, infeasibility(p, r.state));
  EXPECT_NEAR(r.trace.back().objective, sdp_objective(p, r.state), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(AllMethods, KarateSolvers,
                         ::testing::Values(Method::kAlm, Method::kPalm, Method::kAdmm,
                                           Method::kSadmm),
                         [](const auto& info) { return std::string(to_string(info.param)); });

class StationaryStart : public ::testing::TestWithParam<Method> {};

TEST_P(StationaryStart, StopsAfterOneOuterIteration) {
  // A zero kernel makes the objective constant, so a feasible point with zero
  // multipliers is stationary for every block.
  const KernelProblem p(MatrixXd::Zero(6, 6), VectorXd::Ones(6), 2, 0, 0);
  Eigen::MatrixXi U = Eigen::MatrixXi::Zero(6, 2);
  for (Index i = 0; i < 6; ++i) U(i, i % 2) = 1;
  const LowRankState start = lift(p, DiscreteClustering(U));
  SolverConfig cfg;
  cfg.method = GetParam();
  const SolveResult r = solve(p, start, cfg);
  EXPECT_EQ(r.status, SolveStatus::kConverged);
  EXPECT_EQ(r.outer_iterations, 1);
  EXPECT_LT((r.state.flatten() - start.flatten()).lpNorm<Eigen::Infinity>(), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(AllMethods, StationaryStart,
                         ::testing::Values(Method::kAlm, Method::kPalm, Method::kAdmm,
                                           Method::kSadmm),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Palm, TinyProximalParameterBarelyMoves) {
  oracle::Rng rng(52);
  const KernelProblem p = oracle::random_problem(rng, 6, 2, 0.2, 0.2);
  const LowRankState start = oracle::random_state(rng, p);
  SolverConfig cfg;
  cfg.max_outer = 1;
  cfg.tau = 1e-9;
  const SolveResult r = solve_palm(p, start, cfg);
  EXPECT_LT((r.state.flatten() - start.flatten()).lpNorm<Eigen::Infinity>(), 1e-5);
}

TEST(Sadmm, ZeroGradientLeavesYUnchanged) {
  oracle::Rng rng(53);
  const KernelProblem p = oracle::random_problem(rng, 5, 2, 0.2, 0.2);
  LowRankState st = oracle::random_state(rng, p);
  st.Y.setZero();
  const YStep step = projected_gradient_y_step(p, st, Multipliers::zeros(5, 3.0), 1.0);
  EXPECT_EQ(step.step, 0.0);
  EXPECT_EQ(st.Y, MatrixXd::Zero(5, 2));
}

TEST(Sadmm, ProjectedGradientStepNeverIncreases) {
  oracle::Rng rng(54);
  for (int t = 0; t < 20; ++t) {
    const KernelProblem p = oracle::random_problem(rng, 6, 2, 0.3, 0.2);
    LowRankState st = oracle::random_state(rng, p);
    const Multipliers m = oracle::random_multipliers(rng, 6, 4.0);
    const YStep step = projected_gradient_y_step(p, st, m, 10.0);
    EXPECT_LE(step.value_after, step.value_before);
    EXPECT_NEAR(step.value_after, auglag_value(p, st, m), 1e-12 * (1 + std::abs(step.value_after)));
    EXPECT_GE(st.Y.minCoeff(), 0.0);
  }
}

TEST(Admm, YBlockSolveIsStationary) {
  oracle::Rng rng(55);
  const KernelProblem p = oracle::random_problem(rng, 6, 2, 0.3, 0.2);
  LowRankState st = oracle::random_state(rng, p);
  const Multipliers m = oracle::random_multipliers(rng, 6, 4.0);
  BoxOptions opts;
  opts.tol_pg = 1e-8;
  const BoxResult r = minimize_y_block(p, st, m, opts);
  EXPECT_EQ(r.status, BoxStatus::kConverged);
  // A second solve from the result does not move.
  LowRankState again = st;
  minimize_y_block(p, again, m, opts);
  EXPECT_LT((again.Y - st.Y).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(Pipeline, ProducesFeasibleClusteringOnBlobs) {
  BlobSpec spec;
  spec.n = 60;
  spec.seed = 2;
  const Dataset d = overlapping_blobs(spec);
  const KernelProblem p = kernel_from_data(d.X, KernelSpec::linear(), 3, 0.1, 0.05);
  PipelineOptions opts;
  opts.method = Method::kAdmm;
  const PipelineResult r = run_pipeline(p, opts);
  ASSERT_TRUE(r.solve);
  EXPECT_EQ(r.status, "converged");
  EXPECT_TRUE(satisfies_constraints(p, r.clustering));
  EXPECT_NEAR(r.neo_objective, neo_objective(p, r.clustering), 1e-9);

  opts.method.reset();
  const PipelineResult warm = run_pipeline(p, opts);
  EXPECT_EQ(warm.status, "iterative");
  EXPECT_FALSE(warm.solve);
  EXPECT_EQ(warm.clustering, r.warm.clustering);
}

}  // namespace
}  // namespace neoclust
