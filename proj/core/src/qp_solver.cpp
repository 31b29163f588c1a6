#include "pgl/qp_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pgl/error.hpp"

namespace pgl {

void DiagQpProblem::validate() const {
  const Index m = p.size();
  if (q.size() != m) throw DimensionError("q length does not match p");
  if (C.cols() != m) throw DimensionError("constraint matrix column count does not match p");
  if (d.size() != C.rows()) throw DimensionError("d length does not match constraint rows");
  if (!p.allFinite() || !q.allFinite() || !d.allFinite())
    throw ValidationError("problem data has non-finite entries");
  if (m > 0 && p.minCoeff() <= 0.0) throw ValidationError("diagonal weights p must be positive");
}

double DiagQpProblem::objective(const VectorXd& l) const {
  return 0.5 * l.dot(p.cwiseProduct(l)) + q.dot(l);
}

void SolverConfig::validate() const {
  if (!std::isfinite(rho)) throw ConfigError("rho must be finite");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (stall_window < 1) throw ConfigError("stall_window must be at least 1");
  if (!(stall_improvement >= 0.0 && stall_improvement < 1.0))
    throw ConfigError("stall_improvement must lie in [0, 1)");
}

const char* to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kConverged:
      return "converged";
    case SolverStatus::kMaxIterations:
      return "max_iterations";
    case SolverStatus::kStalled:
      return "stalled";
  }
  return "unknown";
}

QpSolution::QpSolution(VectorXd l, VectorXd mu, double feas_residual, int iterations,
                       SolverStatus status, double rho, std::vector<double> trace)
    : l_(std::move(l)),
      mu_(std::move(mu)),
      feas_residual_(feas_residual),
      iterations_(iterations),
      status_(status),
      rho_(rho),
      trace_(std::move(trace)) {
  if (!l_.allFinite()) throw ValidationError("solution has non-finite entries");
  if (l_.size() > 0 && l_.minCoeff() < 0.0) throw ValidationError("solution has negative entries");
}

double default_step_size(const DiagQpProblem& problem) {
  problem.validate();
  const Index L = problem.num_constraints();
  if (L == 0) return 1.0;
  const VectorXd pinv = problem.p.cwiseInverse();
  // Power iteration on C diag(p)^{-1} C^T.
  VectorXd v = VectorXd::Ones(L) / std::sqrt(static_cast<double>(L));
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    VectorXd w = problem.C * pinv.cwiseProduct(problem.C.transpose() * v);
    const double norm = w.norm();
    if (norm == 0.0) return 1.0;
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - lambda) <= 1e-10 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  // Small safety margin against an underestimated top eigenvalue.
  return 1.0 / (1.01 * lambda);
}

VectorXd primal_from_dual(const DiagQpProblem& problem, const VectorXd& mu) {
  VectorXd r = problem.C.transpose() * mu - problem.q;
  return r.cwiseQuotient(problem.p).cwiseMax(0.0);
}

QpSolution solve_diag_qp(const DiagQpProblem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();
  const double rho = config.rho > 0.0 ? config.rho : default_step_size(problem);

  VectorXd mu = VectorXd::Zero(problem.num_constraints());
  VectorXd best_l;
  VectorXd best_mu;
  double best_res = std::numeric_limits<double>::infinity();
  double stall_ref = std::numeric_limits<double>::infinity();
  int stall_mark = 0;
  std::vector<double> trace;

  for (int k = 1; k <= config.max_iter; ++k) {
    VectorXd l = primal_from_dual(problem, mu);
    VectorXd r = problem.C * l - problem.d;
    const double res = r.norm();
    if (config.record_trace) trace.push_back(res);
    if (!std::isfinite(res)) break;
    if (res < best_res) {
      best_res = res;
      best_l = l;
      best_mu = mu;
    }
    if (res < config.tol)
      return QpSolution(std::move(l), std::move(mu), res, k, SolverStatus::kConverged, rho,
                        std::move(trace));
    if (best_res < (1.0 - config.stall_improvement) * stall_ref) {
      stall_ref = best_res;
      stall_mark = k;
    } else if (k - stall_mark >= config.stall_window) {
      return QpSolution(std::move(best_l), std::move(best_mu), best_res, k,
                        SolverStatus::kStalled, rho, std::move(trace));
    }
    mu -= rho * r;
  }
  if (best_l.size() == 0) {
    best_l = VectorXd::Zero(problem.num_variables());
    best_mu = VectorXd::Zero(problem.num_constraints());
    best_res = (problem.C * best_l - problem.d).norm();
  }
  return QpSolution(std::move(best_l), std::move(best_mu), best_res, config.max_iter,
                    SolverStatus::kMaxIterations, rho, std::move(trace));
}

KktResiduals kkt_residuals(const DiagQpProblem& problem, const VectorXd& l, const VectorXd& mu) {
  problem.validate();
  if (l.size() != problem.num_variables() || mu.size() != problem.num_constraints())
    throw DimensionError("primal or dual vector has the wrong length");
  VectorXd g = problem.p.cwiseProduct(l) + problem.q - problem.C.transpose() * mu;
  VectorXd lambda = g.cwiseMax(0.0);
  KktResiduals out;
  out.stationarity = l.size() ? (g - lambda).cwiseAbs().maxCoeff() : 0.0;
  out.primal_feasibility = (problem.C * l - problem.d).norm();
  out.min_l = l.size() ? l.minCoeff() : 0.0;
  out.complementarity = l.size() ? lambda.cwiseProduct(l).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

KktResiduals kkt_residuals(const DiagQpProblem& problem, const QpSolution& solution) {
  return kkt_residuals(problem, solution.l(), solution.mu());
}

}  // namespace pgl
