#include "pgl/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "pgl/error.hpp"

namespace pgl::io {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, std::size_t line) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    std::ostringstream msg;
    msg << "line " << line << ": cannot parse number '" << t << "'";
    throw FormatError(msg.str());
  }
  return v;
}

Index parse_index(const std::string& token, std::size_t line) {
  const std::string t = trim(token);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    std::ostringstream msg;
    msg << "line " << line << ": cannot parse index '" << t << "'";
    throw FormatError(msg.str());
  }
  return static_cast<Index>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

MatrixXd read_edge_list(std::istream& in, const std::string& header) {
  const auto pos = header.find("n=");
  if (pos == std::string::npos) throw FormatError("laplacian header lacks n=<n>");
  const Index n = parse_index(header.substr(pos + 2), 1);
  if (n < 1) throw FormatError("laplacian header has n < 1");
  MatrixXd L = MatrixXd::Zero(n, n);
  std::vector<bool> has_diag(static_cast<std::size_t>(n), false);
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields = split(t, '\t');
    if (fields.size() != 3) {
      std::ostringstream msg;
      msg << "line " << lineno << ": expected i<TAB>j<TAB>w";
      throw FormatError(msg.str());
    }
    const Index i = parse_index(fields[0], lineno);
    const Index j = parse_index(fields[1], lineno);
    const double w = parse_double(fields[2], lineno);
    if (i < 0 || j < 0 || i >= n || j >= n) {
      std::ostringstream msg;
      msg << "line " << lineno << ": node index out of range";
      throw FormatError(msg.str());
    }
    if (i == j) {
      L(i, i) = w;
      has_diag[static_cast<std::size_t>(i)] = true;
    } else {
      if (i > j) {
        std::ostringstream msg;
        msg << "line " << lineno << ": edge rows need i < j";
        throw FormatError(msg.str());
      }
      L(i, j) = L(j, i) = -w;
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (has_diag[static_cast<std::size_t>(i)]) continue;
    double deg = 0.0;
    for (Index j = 0; j < n; ++j)
      if (j != i) deg -= L(i, j);
    L(i, i) = deg;
  }
  return L;
}

MatrixXd read_csv_rows(std::istream& in, const std::string& first) {
  std::vector<std::vector<double>> rows;
  std::string line = first;
  std::size_t lineno = 1;
  bool have = true;
  while (have) {
    const std::string t = trim(line);
    if (!t.empty() && t[0] != '#') {
      std::vector<double> row;
      for (const auto& f : split(t, ',')) row.push_back(parse_double(f, lineno));
      if (!rows.empty() && row.size() != rows.front().size()) {
        std::ostringstream msg;
        msg << "line " << lineno << ": expected " << rows.front().size() << " columns, found "
            << row.size();
        throw FormatError(msg.str());
      }
      rows.push_back(std::move(row));
    }
    have = static_cast<bool>(std::getline(in, line));
    ++lineno;
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = r ? static_cast<Index>(rows.front().size()) : 0;
  MatrixXd M(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return M;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_laplacian(std::ostream& out, const GraphLaplacian& L, double drop_below) {
  const Index n = L.n();
  out << "# laplacian n=" << n << "\n";
  const MatrixXd& M = L.dense();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (-M(i, j) > drop_below && M(i, j) != 0.0)
        out << i << '\t' << j << '\t' << format_double(-M(i, j)) << "\n";
}

void write_laplacian(const std::string& path, const GraphLaplacian& L, double drop_below) {
  auto out = open_out(path);
  write_laplacian(out, L, drop_below);
}

MatrixXd read_square_matrix(std::istream& in) {
  std::string first;
  while (std::getline(in, first))
    if (!trim(first).empty()) break;
  const std::string t = trim(first);
  if (t.empty()) throw FormatError("empty matrix file");
  MatrixXd M;
  if (t.rfind("# laplacian", 0) == 0)
    M = read_edge_list(in, t);
  else
    M = read_csv_rows(in, first);
  if (M.rows() != M.cols()) throw FormatError("matrix is not square");
  return M;
}

MatrixXd read_square_matrix(const std::string& path) {
  auto in = open_in(path);
  return read_square_matrix(in);
}

GraphLaplacian read_laplacian(const std::string& path, const ValidationTolerances& tol) {
  MatrixXd M = read_square_matrix(path);
  try {
    return GraphLaplacian::from_dense(M, tol);
  } catch (const ValidationError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_matrix_csv(std::ostream& out, const MatrixXd& M) {
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << format_double(M(i, j));
    }
    out << "\n";
  }
}

void write_matrix_csv(const std::string& path, const MatrixXd& M) {
  auto out = open_out(path);
  write_matrix_csv(out, M);
}

MatrixXd read_matrix_csv(std::istream& in) {
  std::string first;
  if (!std::getline(in, first)) return MatrixXd(0, 0);
  return read_csv_rows(in, first);
}

MatrixXd read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_csv(in);
}

void write_data_csv(const std::string& path, const MultiDomainData& data) {
  write_matrix_csv(path, data.stacked());
}

MultiDomainData read_data_csv(const std::string& path, Index P, Index Q) {
  MatrixXd X = read_matrix_csv(path);
  if (X.rows() != P * Q) {
    std::ostringstream msg;
    msg << path << ": expected " << P * Q << " rows (P*Q), found " << X.rows();
    throw FormatError(msg.str());
  }
  return MultiDomainData::from_stacked(X, P, Q);
}

void write_mask_csv(const std::string& path, const std::vector<Mask>& mask) {
  if (mask.empty()) {
    auto out = open_out(path);
    return;
  }
  const Index N = mask.front().size();
  MatrixXd M(N, static_cast<Index>(mask.size()));
  for (std::size_t t = 0; t < mask.size(); ++t) M.col(static_cast<Index>(t)) = mask[t].reshaped().matrix();
  write_matrix_csv(path, M);
}

std::vector<Mask> read_mask_csv(const std::string& path, Index P, Index Q) {
  MatrixXd M = read_matrix_csv(path);
  if (M.rows() != P * Q) throw FormatError(path + ": mask row count is not P*Q");
  if (((M.array() != 0.0) && (M.array() != 1.0)).any())
    throw FormatError(path + ": mask entries must be 0 or 1");
  std::vector<Mask> out;
  for (Index t = 0; t < M.cols(); ++t) out.emplace_back(M.col(t).reshaped(P, Q).array());
  return out;
}

void write_labels_csv(const std::string& path, const ClusterLabels& labels) {
  auto out = open_out(path);
  out << "node_index,label\n";
  for (std::size_t i = 0; i < labels.labels.size(); ++i) out << i << ',' << labels.labels[i] << "\n";
}

ClusterLabels read_labels_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::map<Index, int> entries;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t.rfind("node_index", 0) == 0) continue;
    const auto fields = split(t, ',');
    if (fields.size() != 2) throw FormatError(path + ": expected node_index,label");
    entries[parse_index(fields[0], lineno)] = static_cast<int>(parse_index(fields[1], lineno));
  }
  ClusterLabels out;
  Index expect = 0;
  int kmax = -1;
  for (const auto& [idx, lab] : entries) {
    if (idx != expect++) throw FormatError(path + ": node indices must be 0..n-1");
    out.labels.push_back(lab);
    kmax = std::max(kmax, lab);
  }
  out.k = kmax + 1;
  return out;
}

}  // namespace pgl::io
