#include "sbm/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sbm {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

}  // namespace

void write_matrix_market(std::ostream& os, const AdjacencyMatrix& a) {
  const int n = static_cast<int>(a.rows());
  long long nnz = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (a(i, j) != 0.0) ++nnz;
  os << "%%MatrixMarket matrix coordinate pattern symmetric\n";
  os << n << ' ' << n << ' ' << nnz << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (a(i, j) != 0.0) os << i + 1 << ' ' << j + 1 << '\n';
}

void write_matrix_market_file(const std::string& path, const AdjacencyMatrix& a) {
  auto os = open_out(path);
  write_matrix_market(os, a);
}

AdjacencyMatrix read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("MatrixMarket: empty stream");
  if (line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("MatrixMarket: missing header banner");
  if (line.find("coordinate") == std::string::npos ||
      line.find("pattern") == std::string::npos ||
      line.find("symmetric") == std::string::npos)
    throw std::runtime_error("MatrixMarket: expected coordinate pattern symmetric");

  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  int rows = 0, cols = 0;
  long long nnz = 0;
  if (!(sizes >> rows >> cols >> nnz) || rows != cols || rows <= 0)
    throw std::runtime_error("MatrixMarket: bad size line");

  AdjacencyMatrix a = AdjacencyMatrix::Zero(rows, cols);
  for (long long k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    if (!(is >> i >> j)) throw std::runtime_error("MatrixMarket: truncated entries");
    if (i < 1 || j < 1 || i > rows || j > cols)
      throw std::runtime_error("MatrixMarket: entry index out of range");
    a(i - 1, j - 1) = 1.0;
    a(j - 1, i - 1) = 1.0;
  }
  return a;
}

AdjacencyMatrix read_matrix_market_file(const std::string& path) {
  auto is = open_in(path);
  return read_matrix_market(is);
}

void write_assignment(std::ostream& os, const CommunityAssignment& assignment) {
  for (int v : assignment.labels()) os << v << '\n';
}

void write_assignment_file(const std::string& path, const CommunityAssignment& assignment) {
  auto os = open_out(path);
  write_assignment(os, assignment);
}

CommunityAssignment read_assignment(std::istream& is) {
  std::vector<int> labels;
  int v = 0;
  while (is >> v) labels.push_back(v);
  if (labels.empty()) throw std::runtime_error("assignment: no labels found");
  return CommunityAssignment(std::move(labels));
}

CommunityAssignment read_assignment_file(const std::string& path) {
  auto is = open_in(path);
  return read_assignment(is);
}

}  // namespace sbm
