#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "neoclust/model.hpp"

namespace neoclust {

using ClusterList = std::vector<std::vector<Index>>;

struct Dataset {
  MatrixXd X;  // n x m, one row per point
  std::optional<ClusterList> ground_truth;  // 0-based point ids

  Index n() const { return X.rows(); }
};

struct Graph {
  Eigen::SparseMatrix<double> A;  // symmetric, nonnegative
  VectorXd degrees;               // row sums of A

  Index n() const { return A.rows(); }

  // Builds a symmetric adjacency from undirected 0-based edges. Each edge is
  // listed once; repeated edges accumulate weight.
  static Graph from_edges(Index n,
                          const std::vector<Eigen::Triplet<double>>& edges);
};

struct KernelSpec {
  enum class Type { kLinear, kGaussian };
  Type type = Type::kLinear;
  double bandwidth = 1.0;

  static KernelSpec linear() { return {}; }
  static KernelSpec gaussian(double h) { return {Type::kGaussian, h}; }

  // "linear" or "gaussian:H". Throws std::invalid_argument otherwise.
  static KernelSpec parse(const std::string& text);
};

// Dense kernel matrix for the rows of X.
MatrixXd kernel_matrix(const MatrixXd& X, const KernelSpec& spec);

// Linear: K = X X^T. Gaussian: K_ij = exp(-|x_i - x_j|^2 / (2 h^2)).
// Unit weights unless `weights` is given.
KernelProblem kernel_from_data(const MatrixXd& X, const KernelSpec& spec,
                               int k, double alpha, double beta,
                               const std::optional<VectorXd>& weights = {});

struct GraphKernel {
  KernelProblem problem;
  // kept[i] is the original node id of problem row i; isolated nodes are
  // dropped.
  std::vector<Index> kept;
};

// Weighted kernel whose NEO objective is the overlapping normalized cut:
// W = diag(degrees), K = W^-1 A W^-1 + shift W^-1.
GraphKernel kernel_from_graph(const Graph& graph, int k, double alpha,
                              double beta, double shift = 0.0);

}  // namespace neoclust
