#include "neoclust/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace neoclust::io {
namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

bool is_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t");
  return pos != std::string::npos && (line[pos] == '#' || line[pos] == '%');
}

// Locale-independent parse of the whole token.
double parse_double(const std::string& token, std::size_t line_no) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": not a number: '" + token + "'");
  return v;
}

long long parse_id(const std::string& token, std::size_t line_no) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v < 1)
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": expected a positive 1-based id, got '" + token +
                             "'");
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == '\t' || c == ';' || c == ' ' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

MatrixXd read_features(std::istream& in, bool skip_header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (is_blank(line) || is_comment(line)) continue;
    std::vector<double> row;
    for (const auto& tok : split_fields(line))
      row.push_back(parse_double(tok, line_no));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("feature file has no data rows");
  MatrixXd X(static_cast<Index>(rows.size()),
             static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) X(i, j) = rows[i][j];
  if (!X.allFinite()) throw std::runtime_error("feature file has non-finite values");
  return X;
}

MatrixXd read_features(const std::string& path, bool skip_header) {
  auto in = open_in(path);
  return read_features(in, skip_header);
}

Graph read_edge_list(std::istream& in) {
  std::vector<Eigen::Triplet<double>> edges;
  Index n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line) || is_comment(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2 && fields.size() != 3)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected 'u v [weight]'");
    const Index u = static_cast<Index>(parse_id(fields[0], line_no)) - 1;
    const Index v = static_cast<Index>(parse_id(fields[1], line_no)) - 1;
    const double w = fields.size() == 3 ? parse_double(fields[2], line_no) : 1.0;
    edges.emplace_back(u, v, w);
    n = std::max({n, u + 1, v + 1});
  }
  if (edges.empty()) throw std::runtime_error("edge list is empty");
  return Graph::from_edges(n, edges);
}

Graph read_edge_list(const std::string& path) {
  auto in = open_in(path);
  return read_edge_list(in);
}

ClusterList read_clusters(std::istream& in) {
  ClusterList clusters;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment(line)) continue;
    std::vector<Index> members;
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok)
      members.push_back(static_cast<Index>(parse_id(tok, line_no)) - 1);
    clusters.push_back(std::move(members));
  }
  while (!clusters.empty() && clusters.back().empty()) clusters.pop_back();
  return clusters;
}

ClusterList read_clusters(const std::string& path) {
  auto in = open_in(path);
  return read_clusters(in);
}

void write_clusters(std::ostream& out, const ClusterList& clusters) {
  for (const auto& c : clusters) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i > 0) out << ' ';
      out << c[i] + 1;
    }
    out << '\n';
  }
}

void write_clusters(const std::string& path, const ClusterList& clusters) {
  auto out = open_out(path);
  write_clusters(out, clusters);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace neoclust::io
