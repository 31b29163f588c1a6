#include "pgl/qp_solver.hpp"

#include <gtest/gtest.h>

#include <random>

#include "pgl/error.hpp"
#include "qp_oracle.hpp"
#include "random_problems.hpp"

namespace pgl {
namespace {

DiagQpProblem simplex_problem(double q1, double q2) {
  DiagQpProblem prob;
  prob.p = VectorXd::Constant(2, 2.0);
  prob.q.resize(2);
  prob.q << q1, q2;
  MatrixXd C(1, 2);
  C << 1.0, 1.0;
  prob.C = C.sparseView();
  prob.d = VectorXd::Ones(1);
  return prob;
}

SolverConfig tight() {
  SolverConfig cfg;
  cfg.tol = 1e-10;
  return cfg;
}

TEST(DiagQp, InteriorSolution) {
  QpSolution sol = solve_diag_qp(simplex_problem(-1.0, -2.0), tight());
  ASSERT_TRUE(sol.converged());
  EXPECT_NEAR(sol.l()(0), 0.25, 1e-9);
  EXPECT_NEAR(sol.l()(1), 0.75, 1e-9);
  EXPECT_NEAR(sol.mu()(0), -0.5, 1e-8);
}

TEST(DiagQp, BoundActiveSolution) {
  QpSolution sol = solve_diag_qp(simplex_problem(3.0, -2.0), tight());
  ASSERT_TRUE(sol.converged());
  EXPECT_EQ(sol.l()(0), 0.0);
  EXPECT_NEAR(sol.l()(1), 1.0, 1e-9);
}

TEST(DiagQp, MatchesInteriorPointOracle) {
  std::mt19937_64 rng(2024);
  SolverConfig cfg;
  cfg.tol = 1e-8;
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    DiagQpProblem prob = testing::random_feasible_qp(rng);
    testing::OracleSolution ref = testing::interior_point_qp(prob);
    ASSERT_TRUE(ref.converged) << "oracle failed on trial " << trial;
    QpSolution sol = solve_diag_qp(prob, cfg);
    EXPECT_TRUE(sol.converged()) << "trial " << trial << " status " << to_string(sol.status());
    EXPECT_LT((sol.l() - ref.l).cwiseAbs().maxCoeff(), 1e-5) << "trial " << trial;
    ++checked;
  }
  EXPECT_EQ(checked, 120);
}

TEST(DiagQp, ResidualDecreasesOverRun) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    DiagQpProblem prob = testing::random_feasible_qp(rng);
    SolverConfig cfg;
    cfg.max_iter = 200;
    cfg.record_trace = true;
    cfg.tol = 1e-14;
    QpSolution sol = solve_diag_qp(prob, cfg);
    ASSERT_FALSE(sol.trace().empty());
    if (sol.trace().front() == 0.0) continue;
    EXPECT_LT(sol.trace().back(), sol.trace().front()) << "trial " << trial;
  }
}

TEST(DiagQp, InvariantToObjectiveScaling) {
  std::mt19937_64 rng(31);
  SolverConfig cfg;
  cfg.tol = 1e-11;
  for (int trial = 0; trial < 20; ++trial) {
    DiagQpProblem prob = testing::random_feasible_qp(rng);
    DiagQpProblem scaled = prob;
    scaled.p *= 7.5;
    scaled.q *= 7.5;
    QpSolution a = solve_diag_qp(prob, cfg);
    QpSolution b = solve_diag_qp(scaled, cfg);
    EXPECT_LT((a.l() - b.l()).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(DiagQp, KktResidualsVanishAtOptimum) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    DiagQpProblem prob = testing::random_feasible_qp(rng);
    QpSolution sol = solve_diag_qp(prob, tight());
    ASSERT_TRUE(sol.converged());
    KktResiduals r = kkt_residuals(prob, sol);
    EXPECT_LT(r.stationarity, 1e-12);
    EXPECT_LT(r.primal_feasibility, 1e-10);
    EXPECT_GE(r.min_l, 0.0);
    EXPECT_LT(r.complementarity, 1e-12);

    testing::OracleSolution ref = testing::interior_point_qp(prob);
    KktResiduals ro = kkt_residuals(prob, ref.l, ref.mu);
    EXPECT_LT(ro.stationarity, 1e-8);
    EXPECT_LT(ro.complementarity, 1e-8);
  }
}

TEST(DiagQp, KktFlagsNonOptimalPoint) {
  DiagQpProblem prob = simplex_problem(-1.0, -2.0);
  VectorXd l(2);
  l << 0.5, 0.5;
  KktResiduals r = kkt_residuals(prob, l, VectorXd::Zero(1));
  EXPECT_GT(r.stationarity, 0.1);
  EXPECT_EQ(r.primal_feasibility, 0.0);
}

TEST(DiagQp, InfeasibleProblemReturnsFlaggedBestIterate) {
  DiagQpProblem prob = simplex_problem(0.0, 0.0);
  prob.d(0) = -1.0;
  SolverConfig cfg;
  cfg.max_iter = 50000;
  QpSolution sol = solve_diag_qp(prob, cfg);
  EXPECT_FALSE(sol.converged());
  EXPECT_EQ(sol.status(), SolverStatus::kStalled);
  EXPECT_GE(sol.l().minCoeff(), 0.0);
  EXPECT_NEAR(sol.feas_residual(), 1.0, 1e-9);
}

TEST(DiagQp, IterationCapIsReported) {
  std::mt19937_64 rng(5);
  DiagQpProblem prob = testing::random_feasible_qp(rng);
  SolverConfig cfg;
  cfg.max_iter = 3;
  cfg.tol = 1e-15;
  QpSolution sol = solve_diag_qp(prob, cfg);
  EXPECT_EQ(sol.status(), SolverStatus::kMaxIterations);
  EXPECT_EQ(sol.iterations(), 3);
}

TEST(DiagQp, DefaultStepMatchesSpectralNorm) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    DiagQpProblem prob = testing::random_feasible_qp(rng);
    MatrixXd B = MatrixXd(prob.C) * prob.p.cwiseInverse().cwiseSqrt().asDiagonal();
    const double smax = Eigen::JacobiSVD<MatrixXd>(B).singularValues()(0);
    const double rho = default_step_size(prob);
    EXPECT_NEAR(rho * smax * smax, 1.0 / 1.01, 1e-6);
  }
}

TEST(DiagQp, RejectsMalformedInput) {
  DiagQpProblem prob = simplex_problem(1.0, 1.0);
  DiagQpProblem bad = prob;
  bad.p(0) = 0.0;
  EXPECT_THROW(solve_diag_qp(bad), ValidationError);
  bad = prob;
  bad.q.resize(3);
  EXPECT_THROW(solve_diag_qp(bad), DimensionError);
  SolverConfig cfg;
  cfg.tol = 0.0;
  EXPECT_THROW(solve_diag_qp(prob, cfg), ConfigError);
  VectorXd neg(2);
  neg << -1.0, 0.0;
  EXPECT_THROW(QpSolution(neg, VectorXd::Zero(1), 0.0, 1, SolverStatus::kConverged, 1.0), ValidationError);
}

}  // namespace
}  // namespace pgl
