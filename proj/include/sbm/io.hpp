#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "sbm/model.hpp"

namespace sbm {

/// MatrixMarket coordinate pattern symmetric; only i <= j entries stored,
/// 1-indexed. The unit diagonal is written explicitly.
void write_matrix_market(std::ostream& os, const AdjacencyMatrix& a);
void write_matrix_market_file(const std::string& path, const AdjacencyMatrix& a);

AdjacencyMatrix read_matrix_market(std::istream& is);
AdjacencyMatrix read_matrix_market_file(const std::string& path);

/// Plain text, one 1-indexed integer label per line.
void write_assignment(std::ostream& os, const CommunityAssignment& assignment);
void write_assignment_file(const std::string& path, const CommunityAssignment& assignment);

CommunityAssignment read_assignment(std::istream& is);
CommunityAssignment read_assignment_file(const std::string& path);

}  // namespace sbm
