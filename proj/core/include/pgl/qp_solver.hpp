#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace pgl {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowSparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// minimize 0.5 l^T diag(p) l + q^T l  subject to  C l = d,  l >= 0.
struct DiagQpProblem {
  VectorXd p;
  VectorXd q;
  RowSparseMatrix C;
  VectorXd d;

  Index num_variables() const { return p.size(); }
  Index num_constraints() const { return C.rows(); }

  // Throws DimensionError or ValidationError on malformed data.
  void validate() const;

  double objective(const VectorXd& l) const;
};

struct SolverConfig {
  // Dual ascent step; a nonpositive value selects 1 / sigma_max^2(C diag(p)^{-1/2}).
  double rho = 0.0;
  double tol = 1e-6;
  int max_iter = 100000;
  bool record_trace = false;
  // Declare the run stalled when the best residual has not dropped by
  // stall_improvement (relative) within stall_window iterations.
  int stall_window = 10000;
  double stall_improvement = 0.01;

  void validate() const;
};

enum class SolverStatus { kConverged, kMaxIterations, kStalled };

const char* to_string(SolverStatus status);

// Primal/dual pair produced by the solver. l >= 0 is checked on construction.
class QpSolution {
 public:
  QpSolution() = default;
  QpSolution(VectorXd l, VectorXd mu, double feas_residual, int iterations, SolverStatus status,
             double rho, std::vector<double> trace = {});

  const VectorXd& l() const { return l_; }
  const VectorXd& mu() const { return mu_; }
  double feas_residual() const { return feas_residual_; }
  int iterations() const { return iterations_; }
  SolverStatus status() const { return status_; }
  bool converged() const { return status_ == SolverStatus::kConverged; }
  double rho() const { return rho_; }
  // Residual ||C l - d||_2 per iteration when tracing was requested.
  const std::vector<double>& trace() const { return trace_; }

 private:
  VectorXd l_;
  VectorXd mu_;
  double feas_residual_ = 0.0;
  int iterations_ = 0;
  SolverStatus status_ = SolverStatus::kMaxIterations;
  double rho_ = 0.0;
  std::vector<double> trace_;
};

// 1 / sigma_max^2(C diag(p)^{-1/2}) estimated by power iteration.
double default_step_size(const DiagQpProblem& problem);

// Dual ascent: l = max(0, (C^T mu - q) / p), mu <- mu - rho (C l - d).
// Returns the best iterate seen with a status flag instead of throwing on
// non-convergence.
QpSolution solve_diag_qp(const DiagQpProblem& problem, const SolverConfig& config = {});

// Closed-form primal minimizer for a fixed multiplier.
VectorXd primal_from_dual(const DiagQpProblem& problem, const VectorXd& mu);

struct KktResiduals {
  double stationarity = 0.0;
  double primal_feasibility = 0.0;
  double min_l = 0.0;
  double complementarity = 0.0;
};

// lambda = max(0, p.l + q - C^T mu); stationarity is ||p.l + q - C^T mu - lambda||_inf and
// complementarity is max |lambda_i l_i|.
KktResiduals kkt_residuals(const DiagQpProblem& problem, const VectorXd& l, const VectorXd& mu);
KktResiduals kkt_residuals(const DiagQpProblem& problem, const QpSolution& solution);

}  // namespace pgl
