#include "neoclust/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "neoclust/log.hpp"

namespace neoclust {

Graph Graph::from_edges(Index n,
                        const std::vector<Eigen::Triplet<double>>& edges) {
  std::vector<Eigen::Triplet<double>> sym;
  sym.reserve(2 * edges.size());
  for (const auto& e : edges) {
    if (e.row() < 0 || e.row() >= n || e.col() < 0 || e.col() >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (!(e.value() >= 0.0) || !std::isfinite(e.value()))
      throw std::invalid_argument("edge weights must be finite and >= 0");
    sym.push_back(e);
    if (e.row() != e.col()) sym.emplace_back(e.col(), e.row(), e.value());
  }
  Graph g;
  g.A.resize(n, n);
  g.A.setFromTriplets(sym.begin(), sym.end());
  g.degrees = g.A * VectorXd::Ones(n);
  return g;
}

KernelSpec KernelSpec::parse(const std::string& text) {
  if (text == "linear") return linear();
  const std::string prefix = "gaussian:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double h = 0.0;
    try {
      h = std::stod(text.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - prefix.size() || !(h > 0.0))
      throw std::invalid_argument("gaussian bandwidth must be a positive number: " +
                                  text);
    return gaussian(h);
  }
  throw std::invalid_argument("unknown kernel '" + text +
                              "' (expected linear or gaussian:H)");
}

MatrixXd kernel_matrix(const MatrixXd& X, const KernelSpec& spec) {
  if (!X.allFinite()) throw std::invalid_argument("features must be finite");
  MatrixXd K = X * X.transpose();
  if (spec.type == KernelSpec::Type::kLinear) return K;

  if (!(spec.bandwidth > 0.0))
    throw std::invalid_argument("gaussian bandwidth must be > 0");
  const VectorXd sq = K.diagonal();
  const double denom = 2.0 * spec.bandwidth * spec.bandwidth;
  const Index n = X.rows();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double dist2 = std::max(0.0, sq[i] + sq[j] - 2.0 * K(i, j));
      K(i, j) = i == j ? 1.0 : std::exp(-dist2 / denom);
    }
  }
  // Exact symmetry regardless of the rounding in sq[i] + sq[j] - 2 K_ij.
  K = 0.5 * (K + K.transpose()).eval();
  return K;
}

KernelProblem kernel_from_data(const MatrixXd& X, const KernelSpec& spec,
                               int k, double alpha, double beta,
                               const std::optional<VectorXd>& weights) {
  if (X.rows() < k)
    throw std::invalid_argument("need at least k points");
  MatrixXd K = kernel_matrix(X, spec);
  if (spec.type == KernelSpec::Type::kLinear)
    K = 0.5 * (K + K.transpose()).eval();
  VectorXd w = weights ? *weights : VectorXd::Ones(X.rows());
  return KernelProblem(std::move(K), std::move(w), k, alpha, beta);
}

GraphKernel kernel_from_graph(const Graph& graph, int k, double alpha,
                              double beta, double shift) {
  if (graph.n() == 0 || graph.A.nonZeros() == 0)
    throw std::invalid_argument("graph has no edges");
  if (!(shift >= 0.0)) throw std::invalid_argument("diagonal shift must be >= 0");

  std::vector<Index> kept;
  std::vector<Index> index_of(graph.n(), -1);
  for (Index i = 0; i < graph.n(); ++i) {
    if (graph.degrees[i] > 0.0) {
      index_of[i] = static_cast<Index>(kept.size());
      kept.push_back(i);
    }
  }
  const Index dropped = graph.n() - static_cast<Index>(kept.size());
  if (dropped > 0)
    warn("dropped " + std::to_string(dropped) + " zero-degree node(s)");
  if (static_cast<Index>(kept.size()) < k)
    throw std::invalid_argument("fewer non-isolated nodes than clusters");

  const Index n = static_cast<Index>(kept.size());
  VectorXd w(n);
  for (Index i = 0; i < n; ++i) w[i] = graph.degrees[kept[i]];

  MatrixXd K = MatrixXd::Zero(n, n);
  for (Index col = 0; col < graph.A.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(graph.A, col); it; ++it) {
      const Index i = index_of[it.row()];
      const Index j = index_of[it.col()];
      if (i < 0 || j < 0) continue;
      K(i, j) = it.value() / (w[i] * w[j]);
    }
  }
  for (Index i = 0; i < n; ++i) K(i, i) += shift / w[i];

  return {KernelProblem(std::move(K), std::move(w), k, alpha, beta),
          std::move(kept)};
}

}  // namespace neoclust
