#include "pgl/kron_factorization.hpp"

#include "pgl/error.hpp"
#include "pgl/metrics.hpp"

namespace pgl {

TildeMatrix::TildeMatrix(const MatrixXd& L_N, Index P, Index Q) : P_(P), Q_(Q) {
  if (P < 1 || Q < 1) throw DimensionError("factor sizes must be positive");
  if (L_N.rows() != P * Q || L_N.cols() != P * Q)
    throw DimensionError("product matrix must be PQ x PQ");
  tilde_.resize(Q * Q, P * P);
  for (Index n = 0; n < Q; ++n)
    for (Index m = 0; m < Q; ++m)
      tilde_.row(m + n * Q) = L_N.block(m * P, n * P, P, P).reshaped().transpose();
}

MatrixXd TildeMatrix::reconstruct() const {
  MatrixXd L(P_ * Q_, P_ * Q_);
  for (Index n = 0; n < Q_; ++n)
    for (Index m = 0; m < Q_; ++m)
      L.block(m * P_, n * P_, P_, P_) = tilde_.row(m + n * Q_).reshaped(P_, P_);
  return L;
}

KronFactProblems assemble_kronfact(const MatrixXd& L_N, Index P, Index Q) {
  const TildeMatrix tilde(L_N, P, Q);
  const MatrixXd& Lt = tilde.matrix();
  const VectorXd vec_IQ = MatrixXd::Identity(Q, Q).reshaped();
  const VectorXd vec_IP = MatrixXd::Identity(P, P).reshaped();
  // Sum of diagonal blocks (P x P) and matrix of block traces (Q x Q).
  const MatrixXd block_sum = (Lt.transpose() * vec_IQ).reshaped(P, P);
  const MatrixXd block_trace = (Lt * vec_IP).reshaped(Q, Q);

  KronFactProblems out;
  out.P.p = 2.0 * static_cast<double>(Q) * duplication_gram_diagonal(P);
  out.P.q = -2.0 * duplication_adjoint(block_sum);
  out.P.C = laplacian_constraints(P);
  out.P.d = laplacian_constraint_rhs(P);
  out.Q.p = 2.0 * static_cast<double>(P) * duplication_gram_diagonal(Q);
  out.Q.q = -2.0 * duplication_adjoint(block_trace);
  out.Q.C = laplacian_constraints(Q);
  out.Q.d = laplacian_constraint_rhs(Q);
  return out;
}

double kronfact_objective(const MatrixXd& L_N, const MatrixXd& L_P, const MatrixXd& L_Q) {
  return (L_N - kron_sum(L_P, L_Q)).squaredNorm();
}

KronFactResult factorize(const MatrixXd& L_N, Index P, Index Q, const SolverConfig& solver) {
  KronFactProblems probs = assemble_kronfact(L_N, P, Q);
  KronFactResult out;
  out.solution_P = solve_diag_qp(probs.P, solver);
  out.solution_Q = solve_diag_qp(probs.Q, solver);
  out.L_P = GraphLaplacian::from_solution(out.solution_P.l(), P);
  out.L_Q = GraphLaplacian::from_solution(out.solution_Q.l(), Q);
  out.objective = kronfact_objective(L_N, out.L_P.dense(), out.L_Q.dense());
  return out;
}

void RKronFactConfig::validate() const {
  solver.validate();
  if (gamma1 < 0.0 || gamma2 < 0.0) throw ConfigError("gamma must be nonnegative");
  if (K_P < 1 || K_Q < 1) throw ConfigError("K_P and K_Q must be positive");
  if (max_outer < 1) throw ConfigError("max_outer must be positive");
  if (!(outer_tol > 0.0)) throw ConfigError("outer_tol must be positive");
}

double rkronfact_objective(const MatrixXd& L_N, const GraphLaplacian& L_P,
                           const GraphLaplacian& L_Q, const EmbeddingPair& V,
                           const RKronFactConfig& config) {
  double obj = kronfact_objective(L_N, L_P.dense(), L_Q.dense());
  if (V.V_P.size()) obj += config.gamma1 * (V.V_P.transpose() * L_P.dense() * V.V_P).trace();
  if (V.V_Q.size()) obj += config.gamma2 * (V.V_Q.transpose() * L_Q.dense() * V.V_Q).trace();
  return obj;
}

RKronFactResult factorize_rank_constrained(const MatrixXd& L_N, Index P, Index Q,
                                           const RKronFactConfig& config) {
  config.validate();
  if (config.K_P > P || config.K_Q > Q) throw ConfigError("K exceeds the factor size");
  KronFactProblems probs = assemble_kronfact(L_N, P, Q);
  const VectorXd q_P = probs.P.q;
  const VectorXd q_Q = probs.Q.q;

  RKronFactResult out;
  EmbeddingPair V;
  GraphLaplacian prev_P;
  GraphLaplacian prev_Q;
  for (int k = 1; k <= config.max_outer; ++k) {
    if (k > 1) {
      probs.P.q = q_P + config.gamma1 * duplication_adjoint(V.V_P * V.V_P.transpose());
      probs.Q.q = q_Q + config.gamma2 * duplication_adjoint(V.V_Q * V.V_Q.transpose());
    }
    QpSolution sol_P = solve_diag_qp(probs.P, config.solver);
    QpSolution sol_Q = solve_diag_qp(probs.Q, config.solver);
    out.trace.inner_converged = out.trace.inner_converged && sol_P.converged() && sol_Q.converged();
    GraphLaplacian L_P = GraphLaplacian::from_solution(sol_P.l(), P);
    GraphLaplacian L_Q = GraphLaplacian::from_solution(sol_Q.l(), Q);

    V.V_P = smallest_eigpairs(L_P.dense(), config.K_P).vectors;
    V.V_Q = smallest_eigpairs(L_Q.dense(), config.K_Q).vectors;
    out.trace.objective.push_back(rkronfact_objective(L_N, L_P, L_Q, V, config));
    out.trace.outer_iterations = k;

    bool done = false;
    if (k > 1) {
      const IterateError e = iterate_error({L_P.dense(), L_Q.dense()},
                                           {prev_P.dense(), prev_Q.dense()});
      out.trace.error.push_back(e.value);
      done = e.value < config.outer_tol;
    }
    prev_P = std::move(L_P);
    prev_Q = std::move(L_Q);
    if (done) {
      out.trace.converged = true;
      break;
    }
  }
  out.L_P = prev_P;
  out.L_Q = prev_Q;
  out.embedding = std::move(V);
  out.components_P = connected_components(out.L_P);
  out.components_Q = connected_components(out.L_Q);
  return out;
}

ProjectionResult project_to_laplacian(const MatrixXd& M, const SolverConfig& solver) {
  if (M.rows() != M.cols()) throw DimensionError("projection needs a square matrix");
  if (!M.allFinite()) throw ValidationError("matrix has non-finite entries");
  const Index n = M.rows();
  DiagQpProblem prob;
  prob.p = 2.0 * duplication_gram_diagonal(n);
  prob.q = -2.0 * duplication_adjoint(M);
  prob.C = laplacian_constraints(n, false);
  prob.d = laplacian_constraint_rhs(n, false);
  ProjectionResult out;
  out.solution = solve_diag_qp(prob, solver);
  out.L = GraphLaplacian::from_solution(out.solution.l(), n);
  return out;
}

}  // namespace pgl
