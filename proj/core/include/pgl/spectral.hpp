#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "pgl/laplacian.hpp"

namespace pgl {

struct EigenPairs {
  VectorXd values;   // ascending
  MatrixXd vectors;  // columns match values
};

// K smallest eigenpairs of a symmetric matrix. Each eigenvector is signed so
// that its largest-magnitude entry is positive.
EigenPairs smallest_eigpairs(const MatrixXd& L, Index K);

struct EmbeddingPair {
  MatrixXd V_P;
  MatrixXd V_Q;
};

// V_N = V_Q ⊗ V_P, the product-graph embedding.
MatrixXd product_embedding(const MatrixXd& V_P, const MatrixXd& V_Q);

struct ClusterLabels {
  std::vector<int> labels;
  int k = 0;
  // Set when a requested cluster could not be populated.
  bool degenerate = false;
};

struct ComponentReport {
  int count = 0;          // traversal count
  int spectral_count = 0; // eigenvalues below zero_tol * lambda_max
  ClusterLabels labels;
  bool consistent() const { return count == spectral_count; }
  std::string diagnostic;
};

// Components of the weighted graph behind L. An edge exists where -L_ij > edge_tol.
ComponentReport connected_components(const MatrixXd& L, double zero_tol = 1e-6,
                                     double edge_tol = 1e-8);
ComponentReport connected_components(const GraphLaplacian& L, double zero_tol = 1e-6,
                                     double edge_tol = 1e-8);

struct KMeansConfig {
  int restarts = 10;
  int max_iter = 300;
  std::uint64_t seed = 0;
};

// k-means++ seeded Lloyd iterations over the rows of X; the lowest-inertia
// restart wins. Empty clusters are refilled with the farthest point.
ClusterLabels kmeans(const MatrixXd& X, int k, const KMeansConfig& config = {});

// Spectral clustering of a single graph: k-means on the K smallest eigenvectors.
ClusterLabels spectral_clustering(const MatrixXd& L, int K, const KMeansConfig& config = {});

// label(p, q) = labels_Q[q] * K_P + labels_P[p], node order q * P + p.
ClusterLabels product_labels(const ClusterLabels& labels_P, const ClusterLabels& labels_Q);

}  // namespace pgl
