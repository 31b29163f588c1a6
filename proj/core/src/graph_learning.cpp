#include "pgl/graph_learning.hpp"

#include <cmath>

#include "pgl/error.hpp"
#include "pgl/metrics.hpp"

namespace pgl {

CovariancePair sample_covariances(const MultiDomainData& data) {
  CovariancePair S{MatrixXd::Zero(data.P(), data.P()), MatrixXd::Zero(data.Q(), data.Q())};
  for (const auto& X : data.snapshots()) {
    S.S_P.noalias() += X * X.transpose();
    S.S_Q.noalias() += X.transpose() * X;
  }
  return S;
}

MatrixXd scale_covariance(const MatrixXd& S, CovarianceScaling scaling) {
  if (scaling == CovarianceScaling::kSum) return S;
  const double tr = S.trace();
  if (!(tr > 0.0)) return S;
  return (static_cast<double>(S.rows()) / tr) * S;
}

CovariancePair scale_covariances(const CovariancePair& S, CovarianceScaling scaling) {
  return {scale_covariance(S.S_P, scaling), scale_covariance(S.S_Q, scaling)};
}

RowSparseMatrix laplacian_constraints(Index n, bool with_trace) {
  const Index offset = with_trace ? 1 : 0;
  RowSparseMatrix C(n + offset, vech_size(n));
  std::vector<Eigen::Triplet<double>> entries;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const Index k = vech_index(n, i, j);
      if (i == j) {
        if (with_trace) entries.emplace_back(0, k, 1.0);
        entries.emplace_back(offset + i, k, 1.0);
      } else {
        entries.emplace_back(offset + i, k, -1.0);
        entries.emplace_back(offset + j, k, -1.0);
      }
    }
  }
  C.setFromTriplets(entries.begin(), entries.end());
  return C;
}

VectorXd laplacian_constraint_rhs(Index n, bool with_trace) {
  VectorXd d = VectorXd::Zero(n + (with_trace ? 1 : 0));
  if (with_trace) d(0) = static_cast<double>(n);
  return d;
}

DiagQpProblem assemble_pgl_factor(const MatrixXd& S, double beta) {
  if (S.rows() != S.cols()) throw DimensionError("covariance must be square");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  const Index n = S.rows();
  DiagQpProblem prob;
  prob.p = 2.0 * beta * duplication_gram_diagonal(n);
  prob.q = duplication_adjoint(S);
  prob.C = laplacian_constraints(n);
  prob.d = laplacian_constraint_rhs(n);
  return prob;
}

double pgl_factor_objective(const MatrixXd& L, const MatrixXd& S, double beta) {
  return (L * S).trace() + beta * L.squaredNorm();
}

void PglConfig::validate() const {
  if (!(beta1 > 0.0) || !(beta2 > 0.0)) throw ConfigError("beta1 and beta2 must be positive");
  solver.validate();
}

namespace {

FactorSolve solve_factor(const MatrixXd& S, double beta, const SolverConfig& solver) {
  DiagQpProblem prob = assemble_pgl_factor(S, beta);
  QpSolution sol = solve_diag_qp(prob, solver);
  GraphLaplacian L = GraphLaplacian::from_solution(sol.l(), S.rows());
  return {std::move(L), std::move(sol)};
}

}  // namespace

PglResult learn_product_graph(const CovariancePair& S, const PglConfig& config) {
  config.validate();
  FactorSolve P = solve_factor(S.S_P, config.beta1, config.solver);
  FactorSolve Q = solve_factor(S.S_Q, config.beta2, config.solver);
  PglResult out;
  out.objective = pgl_factor_objective(P.L.dense(), S.S_P, config.beta1) +
                  pgl_factor_objective(Q.L.dense(), S.S_Q, config.beta2);
  out.L_P = std::move(P.L);
  out.L_Q = std::move(Q.L);
  out.solution_P = std::move(P.solution);
  out.solution_Q = std::move(Q.solution);
  return out;
}

PglResult learn_product_graph(const MultiDomainData& data, const PglConfig& config) {
  return learn_product_graph(scale_covariances(sample_covariances(data), config.scaling), config);
}

FactorSolve learn_single_graph(const MatrixXd& S, double beta, const SolverConfig& solver) {
  return solve_factor(S, beta, solver);
}

DiagQpProblem assemble_stacked_pgl(const CovariancePair& S, double beta1, double beta2) {
  DiagQpProblem a = assemble_pgl_factor(S.S_P, beta1);
  DiagQpProblem b = assemble_pgl_factor(S.S_Q, beta2);
  DiagQpProblem out;
  const Index ma = a.p.size();
  const Index mb = b.p.size();
  out.p.resize(ma + mb);
  out.p << a.p, b.p;
  out.q.resize(ma + mb);
  out.q << a.q, b.q;
  out.d.resize(a.d.size() + b.d.size());
  out.d << a.d, b.d;
  std::vector<Eigen::Triplet<double>> entries;
  for (Index r = 0; r < a.C.outerSize(); ++r)
    for (RowSparseMatrix::InnerIterator it(a.C, r); it; ++it)
      entries.emplace_back(it.row(), it.col(), it.value());
  for (Index r = 0; r < b.C.outerSize(); ++r)
    for (RowSparseMatrix::InnerIterator it(b.C, r); it; ++it)
      entries.emplace_back(a.C.rows() + it.row(), ma + it.col(), it.value());
  out.C.resize(a.C.rows() + b.C.rows(), ma + mb);
  out.C.setFromTriplets(entries.begin(), entries.end());
  return out;
}

void RpglConfig::validate() const {
  pgl.validate();
  if (gamma1 < 0.0 || gamma2 < 0.0) throw ConfigError("gamma must be nonnegative");
  if (K_P < 1 || K_Q < 1) throw ConfigError("K_P and K_Q must be positive");
  if (max_outer < 1) throw ConfigError("max_outer must be positive");
  if (!(outer_tol > 0.0)) throw ConfigError("outer_tol must be positive");
}

double rpgl_objective(const GraphLaplacian& L_P, const GraphLaplacian& L_Q,
                      const EmbeddingPair& V, const CovariancePair& S, const RpglConfig& config) {
  double obj = pgl_factor_objective(L_P.dense(), S.S_P, config.pgl.beta1) +
               pgl_factor_objective(L_Q.dense(), S.S_Q, config.pgl.beta2);
  if (V.V_P.size()) obj += config.gamma1 * (V.V_P.transpose() * L_P.dense() * V.V_P).trace();
  if (V.V_Q.size()) obj += config.gamma2 * (V.V_Q.transpose() * L_Q.dense() * V.V_Q).trace();
  return obj;
}

RpglResult learn_rank_constrained(const CovariancePair& S, const RpglConfig& config) {
  config.validate();
  const Index P = S.S_P.rows();
  const Index Q = S.S_Q.rows();
  if (config.K_P > P || config.K_Q > Q) throw ConfigError("K exceeds the factor size");

  RpglResult out;
  DiagQpProblem prob_P = assemble_pgl_factor(S.S_P, config.pgl.beta1);
  DiagQpProblem prob_Q = assemble_pgl_factor(S.S_Q, config.pgl.beta2);
  const VectorXd q_P = prob_P.q;
  const VectorXd q_Q = prob_Q.q;

  EmbeddingPair V;
  GraphLaplacian prev_P;
  GraphLaplacian prev_Q;
  for (int k = 1; k <= config.max_outer; ++k) {
    if (k > 1) {
      prob_P.q = q_P + config.gamma1 * duplication_adjoint(V.V_P * V.V_P.transpose());
      prob_Q.q = q_Q + config.gamma2 * duplication_adjoint(V.V_Q * V.V_Q.transpose());
    }
    QpSolution sol_P = solve_diag_qp(prob_P, config.pgl.solver);
    QpSolution sol_Q = solve_diag_qp(prob_Q, config.pgl.solver);
    out.trace.inner_converged = out.trace.inner_converged && sol_P.converged() && sol_Q.converged();
    GraphLaplacian L_P = GraphLaplacian::from_solution(sol_P.l(), P);
    GraphLaplacian L_Q = GraphLaplacian::from_solution(sol_Q.l(), Q);

    V.V_P = smallest_eigpairs(L_P.dense(), config.K_P).vectors;
    V.V_Q = smallest_eigpairs(L_Q.dense(), config.K_Q).vectors;
    out.trace.objective.push_back(rpgl_objective(L_P, L_Q, V, S, config));
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

RpglResult learn_rank_constrained(const MultiDomainData& data, const RpglConfig& config) {
  return learn_rank_constrained(
      scale_covariances(sample_covariances(data), config.pgl.scaling), config);
}

}  // namespace pgl
