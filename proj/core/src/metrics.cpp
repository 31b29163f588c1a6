#include "pgl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "pgl/error.hpp"

namespace pgl {

EdgeSet edges_of(const MatrixXd& L, double tol) {
  if (L.rows() != L.cols()) throw DimensionError("edge extraction needs a square matrix");
  EdgeSet edges;
  for (Index j = 0; j < L.cols(); ++j)
    for (Index i = 0; i < j; ++i)
      if (-L(i, j) > tol) edges.emplace(i, j);
  return edges;
}

EdgeCounts compare_edges(const EdgeSet& truth, const EdgeSet& estimate) {
  EdgeCounts c;
  for (const auto& e : estimate) {
    if (truth.count(e))
      ++c.tp;
    else
      ++c.fp;
  }
  c.fn = truth.size() - c.tp;
  return c;
}

double f_score(const EdgeSet& truth, const EdgeSet& estimate) {
  const EdgeCounts c = compare_edges(truth, estimate);
  const std::size_t denom = 2 * c.tp + c.fn + c.fp;
  if (denom == 0) return 1.0;
  return 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double f_score(const MatrixXd& L_true, const MatrixXd& L_est, double tol) {
  if (L_true.rows() != L_est.rows() || L_true.cols() != L_est.cols())
    throw DimensionError("graphs have different sizes");
  return f_score(edges_of(L_true, tol), edges_of(L_est, tol));
}

namespace {

double entropy(const std::map<int, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts) {
    const double pr = c / n;
    h -= pr * std::log(pr);
  }
  return h;
}

// Labels renumbered by first appearance, so permuted inputs give bitwise equal sums.
std::vector<int> first_appearance(const std::vector<int>& labels) {
  std::map<int, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int lab : labels) {
    auto it = ids.emplace(lab, static_cast<int>(ids.size())).first;
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

double nmi(const std::vector<int>& a_in, const std::vector<int>& b_in) {
  if (a_in.size() != b_in.size()) throw DimensionError("label vectors have different lengths");
  if (a_in.empty()) throw DimensionError("label vectors are empty");
  const std::vector<int> a = first_appearance(a_in);
  const std::vector<int> b = first_appearance(b_in);
  const double n = static_cast<double>(a.size());
  std::map<int, double> ca;
  std::map<int, double> cb;
  std::map<std::pair<int, int>, double> cab;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
    cab[{a[i], b[i]}] += 1.0;
  }
  const double ha = entropy(ca, n);
  const double hb = entropy(cb, n);
  if (ca.size() == 1 && cb.size() == 1) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : cab) {
    const double pab = c / n;
    mi += pab * std::log(pab / ((ca[key.first] / n) * (cb[key.second] / n)));
  }
  const double denom = 0.5 * (ha + hb);
  if (denom <= 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

double nmi(const ClusterLabels& a, const ClusterLabels& b) { return nmi(a.labels, b.labels); }

IterateError iterate_error(const std::vector<MatrixXd>& current,
                           const std::vector<MatrixXd>& previous) {
  if (current.size() != previous.size()) throw DimensionError("iterate lists differ in length");
  IterateError out;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (current[i].rows() != previous[i].rows() || current[i].cols() != previous[i].cols())
      throw DimensionError("iterates differ in shape");
    const double denom = previous[i].squaredNorm();
    if (denom == 0.0) {
      out.degenerate = true;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    out.value += (current[i] - previous[i]).squaredNorm() / denom;
  }
  return out;
}

double imputation_error(const MultiDomainData& truth, const MultiDomainData& estimate,
                        const std::vector<Eigen::ArrayXXd>& mask) {
  if (truth.T() != estimate.T() || static_cast<Index>(mask.size()) != truth.T())
    throw DimensionError("snapshot counts differ");
  if (truth.P() != estimate.P() || truth.Q() != estimate.Q())
    throw DimensionError("snapshot shapes differ");
  if (truth.T() == 0) return 0.0;
  double total = 0.0;
  for (Index t = 0; t < truth.T(); ++t) {
    const auto& m = mask[static_cast<std::size_t>(t)];
    if (m.rows() != truth.P() || m.cols() != truth.Q()) throw DimensionError("mask shape differs");
    total += (m * (truth[t] - estimate[t]).array()).matrix().squaredNorm();
  }
  return total / static_cast<double>(truth.T());
}

}  // namespace pgl
