#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "pgl/qp_solver.hpp"

namespace pgl::testing {

// Dense primal-dual interior point method for
//   min 0.5 l^T diag(p) l + q^T l  s.t.  C l = d, l >= 0.
// Independent of the dual ascent solver; used as a reference in tests.
struct OracleSolution {
  Eigen::VectorXd l;
  Eigen::VectorXd mu;
  bool converged = false;
};

inline OracleSolution interior_point_qp(const DiagQpProblem& prob, double tol = 1e-10,
                                        int max_iter = 500) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const Eigen::Index m = prob.p.size();
  const Eigen::Index k = prob.C.rows();
  const MatrixXd C = MatrixXd(prob.C);
  VectorXd x = VectorXd::Ones(m);
  VectorXd z = VectorXd::Ones(m);
  VectorXd y = VectorXd::Zero(k);
  OracleSolution out;
  for (int it = 0; it < max_iter; ++it) {
    const VectorXd rd = prob.p.cwiseProduct(x) + prob.q - C.transpose() * y - z;
    const VectorXd rp = C * x - prob.d;
    const double gap = x.dot(z) / static_cast<double>(m);
    const double scale = 1.0 + prob.q.cwiseAbs().maxCoeff() + prob.d.cwiseAbs().maxCoeff();
    if (rd.lpNorm<Eigen::Infinity>() < tol * scale && rp.lpNorm<Eigen::Infinity>() < tol * scale &&
        gap < tol * scale) {
      out.converged = true;
      break;
    }
    const double sigma = 0.1;
    const VectorXd rc = x.cwiseProduct(z) - VectorXd::Constant(m, sigma * gap);
    // Eliminate dz: (diag(p) + Z/X) dx - C^T dy = -rd - rc / x.
    const VectorXd h = prob.p + z.cwiseQuotient(x);
    MatrixXd K = MatrixXd::Zero(m + k, m + k);
    K.topLeftCorner(m, m) = h.asDiagonal();
    K.topRightCorner(m, k) = -C.transpose();
    K.bottomLeftCorner(k, m) = C;
    VectorXd rhs(m + k);
    rhs << -rd - rc.cwiseQuotient(x), -rp;
    const VectorXd sol = K.fullPivLu().solve(rhs);
    const VectorXd dx = sol.head(m);
    const VectorXd dy = sol.tail(k);
    const VectorXd dz = -(rc + z.cwiseProduct(dx)).cwiseQuotient(x);
    double alpha = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (dx(i) < 0.0) alpha = std::min(alpha, -0.995 * x(i) / dx(i));
      if (dz(i) < 0.0) alpha = std::min(alpha, -0.995 * z(i) / dz(i));
    }
    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
  }
  out.l = x;
  out.mu = y;
  return out;
}

}  // namespace pgl::testing
