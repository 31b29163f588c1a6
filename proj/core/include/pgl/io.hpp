#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pgl/laplacian.hpp"
#include "pgl/spectral.hpp"
#include "pgl/synth.hpp"

namespace pgl::io {

// Edge list:
//   # laplacian n=<n>
//   i<TAB>j<TAB>w      (0-based, i < j, w > 0 means L_ij = -w)
//   i<TAB>i<TAB>d      (optional explicit diagonal)
// Without diagonal rows the diagonal is the weighted degree.
void write_laplacian(std::ostream& out, const GraphLaplacian& L, double drop_below = 0.0);
void write_laplacian(const std::string& path, const GraphLaplacian& L, double drop_below = 0.0);

// Reads either format above or a dense CSV; the format is detected from the first line.
MatrixXd read_square_matrix(std::istream& in);
MatrixXd read_square_matrix(const std::string& path);
GraphLaplacian read_laplacian(const std::string& path, const ValidationTolerances& tol = {});

void write_matrix_csv(std::ostream& out, const MatrixXd& M);
void write_matrix_csv(const std::string& path, const MatrixXd& M);
MatrixXd read_matrix_csv(std::istream& in);
MatrixXd read_matrix_csv(const std::string& path);

// N x T CSV, row q * P + p holds node (p, q).
void write_data_csv(const std::string& path, const MultiDomainData& data);
MultiDomainData read_data_csv(const std::string& path, Index P, Index Q);

// Masks share the data layout with 0/1 entries.
void write_mask_csv(const std::string& path, const std::vector<Mask>& mask);
std::vector<Mask> read_mask_csv(const std::string& path, Index P, Index Q);

// node_index,label
void write_labels_csv(const std::string& path, const ClusterLabels& labels);
ClusterLabels read_labels_csv(const std::string& path);

// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace pgl::io
