#pragma once

#include "pgl/graph_learning.hpp"
#include "pgl/laplacian.hpp"
#include "pgl/qp_solver.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

// Rearrangement of a PQ x PQ matrix into Q^2 rows, one per P x P block. Row
// m + n Q holds vec(L_N[block(m, n)])^T, i.e. blocks (0,0), (1,0), ..., (Q-1,0),
// (0,1), ... in order.
class TildeMatrix {
 public:
  TildeMatrix(const MatrixXd& L_N, Index P, Index Q);

  Index P() const { return P_; }
  Index Q() const { return Q_; }
  const MatrixXd& matrix() const { return tilde_; }

  // Inverse rearrangement.
  MatrixXd reconstruct() const;

 private:
  Index P_;
  Index Q_;
  MatrixXd tilde_;
};

struct KronFactProblems {
  DiagQpProblem P;
  DiagQpProblem Q;
};

// p_P = 2 Q diag(D_P^T D_P), q_P = -2 D_P^T Ltilde^T vec(I_Q), and the mirrored pair for Q.
KronFactProblems assemble_kronfact(const MatrixXd& L_N, Index P, Index Q);

// ||L_N - L_P ⊕ L_Q||_F^2
double kronfact_objective(const MatrixXd& L_N, const MatrixXd& L_P, const MatrixXd& L_Q);

struct KronFactResult {
  GraphLaplacian L_P;
  GraphLaplacian L_Q;
  QpSolution solution_P;
  QpSolution solution_Q;
  double objective = 0.0;

  bool converged() const { return solution_P.converged() && solution_Q.converged(); }
};

KronFactResult factorize(const MatrixXd& L_N, Index P, Index Q, const SolverConfig& solver = {});

struct RKronFactConfig {
  Index K_P = 1;
  Index K_Q = 1;
  double gamma1 = 10.0;
  double gamma2 = 10.0;
  SolverConfig solver = {};
  int max_outer = 200;
  double outer_tol = 1e-6;

  void validate() const;
};

struct RKronFactResult {
  GraphLaplacian L_P;
  GraphLaplacian L_Q;
  EmbeddingPair embedding;
  AlternationTrace trace;
  ComponentReport components_P;
  ComponentReport components_Q;
};

// Factorization objective plus gamma1 ||V_P||^2_{L_P} + gamma2 ||V_Q||^2_{L_Q}.
double rkronfact_objective(const MatrixXd& L_N, const GraphLaplacian& L_P,
                           const GraphLaplacian& L_Q, const EmbeddingPair& V,
                           const RKronFactConfig& config);

RKronFactResult factorize_rank_constrained(const MatrixXd& L_N, Index P, Index Q,
                                           const RKronFactConfig& config);

struct ProjectionResult {
  GraphLaplacian L;
  QpSolution solution;
};

// Nearest Laplacian in Frobenius norm: p = 2 diag(D^T D), q = -2 D^T vec(M), null-space rows only.
ProjectionResult project_to_laplacian(const MatrixXd& M, const SolverConfig& solver = {});

}  // namespace pgl
