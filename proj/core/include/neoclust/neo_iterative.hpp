#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "neoclust/kernels.hpp"
#include "neoclust/model.hpp"

namespace neoclust {

// Binary n x k assignment matrix. A row of zeros marks an outlier; rows with
// several ones are overlapping points.
struct DiscreteClustering {
  Eigen::MatrixXi U;
  Eigen::VectorXi assign_count;  // row sums of U

  DiscreteClustering() = default;
  explicit DiscreteClustering(Eigen::MatrixXi assignment);

  static DiscreteClustering from_clusters(Index n, int k,
                                          const ClusterList& clusters);
  ClusterList clusters() const;

  Index n() const { return U.rows(); }
  int k() const { return static_cast<int>(U.cols()); }
  Index total_assignments() const { return assign_count.sum(); }
  Index unassigned() const { return (assign_count.array() == 0).count(); }

  friend bool operator==(const DiscreteClustering& a,
                         const DiscreteClustering& b) {
    return a.U == b.U;
  }
};

// Total assignments equal round((1 + alpha) n) and at most floor(beta n)
// points are unassigned.
bool satisfies_constraints(const KernelProblem& p, const DiscreteClustering& c);

// Weighted kernel NEO-K-Means objective, evaluated with implicit centroids.
// Throws std::invalid_argument if `c` violates the assignment constraints.
// Empty clusters contribute 0 (with a warning).
double neo_objective(const KernelProblem& p, const DiscreteClustering& c);

// Same value without the constraint check or warnings.
double clustering_cost(const KernelProblem& p, const DiscreteClustering& c);

// Squared feature-space distance from every point to every cluster centroid
// of `c`. Columns of empty clusters are +inf.
MatrixXd centroid_distances(const KernelProblem& p, const DiscreteClustering& c);

// Constrained assignment for fixed centroids: the n - floor(beta n) points with
// the smallest weighted nearest-centroid cost take their nearest cluster, then
// the remaining quota goes to the cheapest unused (point, cluster) pairs.
// Ties: lower point index, then lower cluster index.
DiscreteClustering assign_to_centroids(const KernelProblem& p,
                                       const MatrixXd& distances);

struct IterativeOptions {
  int max_iters = 100;
  std::uint64_t seed = 0;
  // When the assignment sweeps stall, try the best single swap of one
  // assignment (i, c) for another (j, c') and resume sweeping if it helps.
  bool swap_search = true;
};

struct IterativeResult {
  DiscreteClustering clustering;
  double objective = 0.0;
  std::vector<double> trace;  // objective after seeding and after each step
  int sweeps = 0;
};

// Lloyd-style NEO-K-Means. Without an initial clustering the centroids are
// seeded k-means++ style from the kernel. The objective strictly decreases
// across recorded steps (assignment sweeps and swap-search rounds); the best
// clustering seen is returned.
IterativeResult neo_iterate(const KernelProblem& p,
                            const std::optional<DiscreteClustering>& init,
                            const IterativeOptions& opts = {});

// Best of `restarts` seeded runs (seeds opts.seed, opts.seed + 1, ...).
IterativeResult neo_iterate_restarts(const KernelProblem& p, int restarts,
                                     const IterativeOptions& opts = {});

}  // namespace neoclust
