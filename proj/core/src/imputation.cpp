#include "pgl/imputation.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pgl/error.hpp"
#include "pgl/metrics.hpp"

namespace pgl {

void ImputeConfig::validate() const {
  if (alpha1 < 0.0 || alpha2 < 0.0 || alpha3 < 0.0)
    throw ConfigError("alpha values must be nonnegative");
  pgl.validate();
  if (!(outer_tol > 0.0)) throw ConfigError("outer_tol must be positive");
  if (max_outer < 1) throw ConfigError("max_outer must be positive");
}

namespace {

// alpha1 (I ⊗ L_P) + alpha2 (L_Q ⊗ I) + alpha3 I as a sparse matrix.
SparseMatrix regularizer(const MatrixXd& L_P, const MatrixXd& L_Q, double a1, double a2,
                         double a3) {
  const Index P = L_P.rows();
  const Index Q = L_Q.rows();
  std::vector<Eigen::Triplet<double>> entries;
  for (Index q = 0; q < Q; ++q)
    for (Index j = 0; j < P; ++j)
      for (Index i = 0; i < P; ++i)
        if (a1 != 0.0 && L_P(i, j) != 0.0)
          entries.emplace_back(q * P + i, q * P + j, a1 * L_P(i, j));
  for (Index b = 0; b < Q; ++b)
    for (Index a = 0; a < Q; ++a)
      if (a2 != 0.0 && L_Q(a, b) != 0.0)
        for (Index p = 0; p < P; ++p) entries.emplace_back(a * P + p, b * P + p, a2 * L_Q(a, b));
  for (Index i = 0; i < P * Q; ++i) entries.emplace_back(i, i, a3);
  SparseMatrix G(P * Q, P * Q);
  G.setFromTriplets(entries.begin(), entries.end());
  return G;
}

// Components of the off-diagonal pattern of G.
std::vector<int> pattern_components(const SparseMatrix& G) {
  const Index n = G.rows();
  std::vector<int> lab(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::vector<Index> stack;
  for (Index s = 0; s < n; ++s) {
    if (lab[static_cast<std::size_t>(s)] >= 0) continue;
    lab[static_cast<std::size_t>(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (SparseMatrix::InnerIterator it(G, u); it; ++it) {
        const Index v = it.row();
        if (v != u && it.value() != 0.0 && lab[static_cast<std::size_t>(v)] < 0) {
          lab[static_cast<std::size_t>(v)] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return lab;
}

void check_shapes(const MultiDomainData& observed, const std::vector<Mask>& train,
                  const GraphLaplacian& L_P, const GraphLaplacian& L_Q) {
  if (static_cast<Index>(train.size()) != observed.T()) throw DimensionError("mask count differs");
  if (L_P.n() != observed.P() || L_Q.n() != observed.Q())
    throw DimensionError("graph sizes do not match the data");
  for (const auto& m : train)
    if (m.rows() != observed.P() || m.cols() != observed.Q())
      throw DimensionError("mask shape differs");
}

}  // namespace

MultiDomainData impute_step(const MultiDomainData& observed, const std::vector<Mask>& train,
                            const GraphLaplacian& L_P, const GraphLaplacian& L_Q,
                            double alpha1, double alpha2, double alpha3) {
  check_shapes(observed, train, L_P, L_Q);
  if (alpha1 < 0.0 || alpha2 < 0.0 || alpha3 < 0.0)
    throw ConfigError("alpha values must be nonnegative");
  const Index P = observed.P();
  const Index Q = observed.Q();
  const Index N = P * Q;
  const SparseMatrix G = regularizer(L_P.dense(), L_Q.dense(), alpha1, alpha2, alpha3);

  std::vector<int> comp;
  int n_comp = 0;
  if (alpha3 == 0.0) {
    comp = pattern_components(G);
    n_comp = 1 + *std::max_element(comp.begin(), comp.end());
  }

  Eigen::SimplicialLDLT<SparseMatrix> solver;
  solver.analyzePattern(G);
  std::vector<MatrixXd> out;
  out.reserve(static_cast<std::size_t>(observed.T()));
  for (Index t = 0; t < observed.T(); ++t) {
    const VectorXd a = train[static_cast<std::size_t>(t)].reshaped().matrix();
    if (alpha3 == 0.0) {
      std::vector<bool> seen(static_cast<std::size_t>(n_comp), false);
      for (Index i = 0; i < N; ++i)
        if (a(i) != 0.0) seen[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = true;
      for (int c = 0; c < n_comp; ++c) {
        if (!seen[static_cast<std::size_t>(c)]) {
          std::ostringstream msg;
          msg << "singular system in snapshot " << t << ": product-graph component " << c
              << " has no observed entry and alpha3 = 0";
          throw SingularSystemError(msg.str());
        }
      }
    }
    SparseMatrix H = G;
    for (Index i = 0; i < N; ++i) H.coeffRef(i, i) += a(i);
    solver.factorize(H);
    if (solver.info() != Eigen::Success || (solver.vectorD().array() <= 0.0).any()) {
      std::ostringstream msg;
      msg << "imputation system for snapshot " << t << " is not positive definite";
      throw SingularSystemError(msg.str());
    }
    const VectorXd rhs = a.cwiseProduct(observed[t].reshaped());
    VectorXd x = solver.solve(rhs);
    out.emplace_back(x.reshaped(P, Q));
  }
  return MultiDomainData(P, Q, std::move(out));
}

MultiDomainData impute_step(const MultiDomainData& observed, const std::vector<Mask>& train,
                            const GraphLaplacian& L_P, const GraphLaplacian& L_Q,
                            const ImputeConfig& config) {
  return impute_step(observed, train, L_P, L_Q, config.alpha1, config.alpha2, config.alpha3);
}

double joint_objective(const MultiDomainData& X, const MultiDomainData& observed,
                       const std::vector<Mask>& train, const GraphLaplacian& L_P,
                       const GraphLaplacian& L_Q, const ImputeConfig& config) {
  check_shapes(observed, train, L_P, L_Q);
  if (X.T() != observed.T()) throw DimensionError("snapshot counts differ");
  double obj = config.pgl.beta1 * L_P.dense().squaredNorm() +
               config.pgl.beta2 * L_Q.dense().squaredNorm();
  for (Index t = 0; t < X.T(); ++t) {
    const MatrixXd& Xt = X[t];
    const auto& m = train[static_cast<std::size_t>(t)];
    obj += (m * (Xt - observed[t]).array()).matrix().squaredNorm();
    obj += config.alpha3 * Xt.squaredNorm();
    obj += config.alpha1 * (Xt.transpose() * L_P.dense() * Xt).trace();
    obj += config.alpha2 * (Xt * L_Q.dense() * Xt.transpose()).trace();
  }
  return obj;
}

PglResult update_graphs(const MultiDomainData& X, const ImputeConfig& config) {
  CovariancePair S = sample_covariances(X);
  S.S_P *= config.alpha1;
  S.S_Q *= config.alpha2;
  return learn_product_graph(S, config.pgl);
}

ImputeResult joint_impute_learn(const MultiDomainData& observed, const std::vector<Mask>& train,
                                const ImputeConfig& config) {
  config.validate();
  ImputeResult out;
  PglResult graphs = update_graphs(observed, config);
  out.inner_converged = graphs.converged();
  out.imputed = observed;
  out.objective.push_back(
      joint_objective(observed, observed, train, graphs.L_P, graphs.L_Q, config));

  for (int k = 1; k <= config.max_outer; ++k) {
    out.imputed = impute_step(observed, train, graphs.L_P, graphs.L_Q, config);
    PglResult next = update_graphs(out.imputed, config);
    out.inner_converged = out.inner_converged && next.converged();
    const IterateError e =
        iterate_error({next.L_P.dense(), next.L_Q.dense()}, {graphs.L_P.dense(), graphs.L_Q.dense()});
    graphs = std::move(next);
    out.error.push_back(e.value);
    out.objective.push_back(
        joint_objective(out.imputed, observed, train, graphs.L_P, graphs.L_Q, config));
    out.outer_iterations = k;
    if (e.value < config.outer_tol) {
      out.converged = true;
      break;
    }
  }
  out.L_P = std::move(graphs.L_P);
  out.L_Q = std::move(graphs.L_Q);
  return out;
}

GraphLaplacian knn_graph(const MatrixXd& features, int k) {
  const Index n = features.rows();
  if (k < 1) throw ConfigError("k must be positive");
  if (n < 2) return GraphLaplacian::from_solution(VectorXd::Zero(vech_size(n)), n);
  const Index kk = std::min<Index>(k, n - 1);

  MatrixXd d2(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) d2(i, j) = (features.row(i) - features.row(j)).squaredNorm();

  std::vector<std::vector<Index>> nbrs(static_cast<std::size_t>(n));
  double sigma2 = 0.0;
  for (Index i = 0; i < n; ++i) {
    std::vector<Index> order;
    for (Index j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return d2(i, a) < d2(i, b); });
    order.resize(static_cast<std::size_t>(kk));
    sigma2 += d2(i, order.back());
    nbrs[static_cast<std::size_t>(i)] = std::move(order);
  }
  sigma2 /= static_cast<double>(n);
  if (!(sigma2 > 0.0)) sigma2 = 1.0;

  MatrixXd W = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j : nbrs[static_cast<std::size_t>(i)]) {
      const double w = std::exp(-d2(i, j) / sigma2);
      W(i, j) = std::max(W(i, j), w);
      W(j, i) = std::max(W(j, i), w);
    }
  }
  GraphLaplacian L = laplacian_from_adjacency(W);
  if (L.trace() > 0.0) {
    const double s = static_cast<double>(n) / L.trace();
    L = GraphLaplacian::from_solution(s * L.vech(), n);
  }
  return L;
}

FactorGraphs knn_factor_graphs(const MultiDomainData& observed, int k) {
  const Index P = observed.P();
  const Index Q = observed.Q();
  const Index T = observed.T();
  MatrixXd fP(P, Q * T);
  MatrixXd fQ(Q, P * T);
  for (Index t = 0; t < T; ++t) {
    fP.middleCols(t * Q, Q) = observed[t];
    fQ.middleCols(t * P, P) = observed[t].transpose();
  }
  return {knn_graph(fP, k), knn_graph(fQ, k)};
}

}  // namespace pgl
