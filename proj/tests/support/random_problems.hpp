#pragma once

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "pgl/laplacian.hpp"
#include "pgl/qp_solver.hpp"

namespace pgl::testing {

// Feasible instance: C has density ~1/2 and C diag(p)^{-1/2} has condition
// number at most max_condition; d = C l0 for some l0 > 0.
inline DiagQpProblem random_feasible_qp(std::mt19937_64& rng, Index max_vars = 20,
                                        Index max_cons = 6, double max_condition = 20.0) {
  std::uniform_int_distribution<Index> mdist(2, max_vars);
  const Index m = mdist(rng);
  std::uniform_int_distribution<Index> ldist(1, std::min<Index>(max_cons, m - 1));
  const Index L = ldist(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  std::bernoulli_distribution keep(0.5);

  DiagQpProblem prob;
  prob.p.resize(m);
  prob.q.resize(m);
  for (Index i = 0; i < m; ++i) {
    prob.p(i) = unif(rng);
    prob.q(i) = normal(rng);
  }
  Eigen::MatrixXd C;
  while (true) {
    C = Eigen::MatrixXd::Zero(L, m);
    for (Index r = 0; r < L; ++r) {
      for (Index c = 0; c < m; ++c)
        if (keep(rng)) C(r, c) = normal(rng);
      if (C.row(r).cwiseAbs().maxCoeff() == 0.0) C(r, r % m) = 1.0;
    }
    const Eigen::VectorXd sv =
        Eigen::JacobiSVD<Eigen::MatrixXd>(C * prob.p.cwiseInverse().cwiseSqrt().asDiagonal())
            .singularValues();
    if (sv(L - 1) > 0.0 && sv(0) / sv(L - 1) <= max_condition) break;
  }
  Eigen::VectorXd l0(m);
  std::uniform_real_distribution<double> pos(0.1, 1.5);
  for (Index i = 0; i < m; ++i) l0(i) = pos(rng);
  prob.C = C.sparseView();
  prob.d = C * l0;
  return prob;
}

inline MatrixXd random_laplacian(std::mt19937_64& rng, Index n, double density = 0.5) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  MatrixXd W = MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i)
      if (unif(rng) < density) W(i, j) = W(j, i) = 0.1 + unif(rng);
  return laplacian_from_adjacency(W).dense();
}

}  // namespace pgl::testing
