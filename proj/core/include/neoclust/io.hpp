#pragma once

#include <iosfwd>
#include <string>

#include "neoclust/kernels.hpp"

namespace neoclust::io {

// Numeric table, one point per line. Comma, tab, semicolon or blank
// separated. `skip_header` drops the first line.
MatrixXd read_features(std::istream& in, bool skip_header = false);
MatrixXd read_features(const std::string& path, bool skip_header = false);

// Undirected edge list "u v [weight]" with 1-based node ids. Lines starting
// with '#' or '%' are comments. The node count is the largest id seen.
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::string& path);

// One cluster per line, space separated 1-based ids. Empty lines are kept as
// empty clusters. Returned ids are 0-based.
ClusterList read_clusters(std::istream& in);
ClusterList read_clusters(const std::string& path);

// Inverse of read_clusters: writes 1-based ids.
void write_clusters(std::ostream& out, const ClusterList& clusters);
void write_clusters(const std::string& path, const ClusterList& clusters);

}  // namespace neoclust::io
