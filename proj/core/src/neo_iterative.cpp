#include "neoclust/neo_iterative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

#include "neoclust/log.hpp"

namespace neoclust {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_shape(const KernelProblem& p, const DiscreteClustering& c) {
  if (c.n() != p.n() || c.k() != p.k())
    throw std::invalid_argument("clustering shape does not match problem");
}

// Moves one member into each empty cluster: the assigned pair with the largest
// weighted distance, taken from a cluster that keeps at least one member.
void reseed_empty_clusters(const KernelProblem& p, const MatrixXd& distances,
                           DiscreteClustering& c) {
  const Index n = c.n();
  for (int e = 0; e < c.k(); ++e) {
    if (c.U.col(e).sum() > 0) continue;
    const Eigen::VectorXi sizes = c.U.colwise().sum().transpose();
    double worst = -kInf;
    Index wi = -1;
    int wc = -1;
    for (int col = 0; col < c.k(); ++col) {
      if (sizes[col] < 2) continue;
      for (Index i = 0; i < n; ++i) {
        if (c.U(i, col) == 0) continue;
        const double cost = p.weights()[i] * distances(i, col);
        if (cost > worst) {
          worst = cost;
          wi = i;
          wc = col;
        }
      }
    }
    if (wi < 0) {
      warn("cannot re-seed empty cluster " + std::to_string(e));
      continue;
    }
    c.U(wi, wc) = 0;
    c.U(wi, e) = 1;
  }
  c.assign_count = c.U.rowwise().sum();
}

Index sample_weighted(const VectorXd& mass, std::mt19937_64& rng) {
  const double total = mass.sum();
  if (!(total > 0.0) || !std::isfinite(total)) return -1;
  std::uniform_real_distribution<double> unif(0.0, total);
  const double target = unif(rng);
  double acc = 0.0;
  Index last_positive = -1;
  for (Index i = 0; i < mass.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    acc += mass[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

// k-means++ on kernel distances; returns an assignment to the seed points.
DiscreteClustering seed_clustering(const KernelProblem& p,
                                   std::mt19937_64& rng) {
  const Index n = p.n();
  const int k = p.k();
  const MatrixXd& K = p.kernel();
  std::vector<Index> seeds;
  std::vector<bool> chosen(n, false);

  auto point_dist = [&](Index i, Index j) {
    return std::max(0.0, K(i, i) - 2.0 * K(i, j) + K(j, j));
  };

  Index first = sample_weighted(p.weights(), rng);
  seeds.push_back(first);
  chosen[first] = true;
  VectorXd nearest(n);
  for (Index i = 0; i < n; ++i) nearest[i] = point_dist(i, first);

  while (static_cast<int>(seeds.size()) < k) {
    VectorXd mass = p.weights().cwiseProduct(nearest);
    for (Index i = 0; i < n; ++i)
      if (chosen[i]) mass[i] = 0.0;
    Index next = sample_weighted(mass, rng);
    if (next < 0) {
      // All remaining points coincide with a seed: pick uniformly.
      VectorXd flat = VectorXd::Zero(n);
      for (Index i = 0; i < n; ++i)
        if (!chosen[i]) flat[i] = 1.0;
      next = sample_weighted(flat, rng);
    }
    seeds.push_back(next);
    chosen[next] = true;
    for (Index i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], point_dist(i, next));
  }

  MatrixXd distances(n, k);
  for (int c = 0; c < k; ++c)
    for (Index i = 0; i < n; ++i)
      distances(i, c) = K(i, i) - 2.0 * K(i, seeds[c]) + K(seeds[c], seeds[c]);
  DiscreteClustering init = assign_to_centroids(p, distances);
  reseed_empty_clusters(p, distances, init);
  return init;
}

// Best-improvement search over single cell swaps: drop assignment (i, c) and
// add (j, c'), which keeps the assignment total. Cluster costs are updated in
// O(1) per candidate from S = K diag(w) U, cluster masses and quadratic terms.
// Returns true if the clustering changed.
bool swap_search(const KernelProblem& p, DiscreteClustering& cl) {
  const Index n = p.n();
  const int k = p.k();
  const MatrixXd& K = p.kernel();
  const VectorXd& w = p.weights();
  const VectorXd& d = p.d();
  Eigen::MatrixXi& U = cl.U;

  const MatrixXd Uw = w.asDiagonal() * U.cast<double>();
  MatrixXd S = K * Uw;
  VectorXd mass = Uw.colwise().sum().transpose();
  VectorXd quad(k);
  for (int c = 0; c < k; ++c) quad[c] = Uw.col(c).dot(S.col(c));
  Eigen::VectorXi count = U.rowwise().sum();
  Index unassigned = (count.array() == 0).count();
  const Index max_unassigned = p.max_unassigned();

  auto ratio = [](double q, double m) { return m > 0.0 ? q / m : 0.0; };
  auto cost_of = [&]() {
    double v = 0.0;
    for (int c = 0; c < k; ++c) v -= ratio(quad[c], mass[c]);
    for (Index i = 0; i < n; ++i) v += count[i] * d[i];
    return v;
  };

  bool changed = false;
  for (Index guard = 0; guard < 100 * n * k; ++guard) {
    const double tol = 1e-12 * (1.0 + std::abs(cost_of()));
    double best = -tol;
    Index bi = -1, bj = -1;
    int bc = -1, bd = -1;
    for (Index i = 0; i < n; ++i) {
      for (int c = 0; c < k; ++c) {
        if (U(i, c) == 0) continue;
        const double m_rm = mass[c] - w[i];
        const double q_rm = quad[c] - 2.0 * w[i] * S(i, c) + w[i] * w[i] * K(i, i);
        const double remove =
            -d[i] - (m_rm > 1e-12 * mass[c] ? q_rm / m_rm : 0.0) + ratio(quad[c], mass[c]);
        for (Index j = 0; j < n; ++j) {
          // Unassigned count after the move.
          const Index after = unassigned + (count[i] == 1 && j != i ? 1 : 0) -
                              (count[j] == 0 ? 1 : 0);
          if (after > max_unassigned) continue;
          for (int e = 0; e < k; ++e) {
            if (U(j, e) != 0) continue;
            double delta;
            if (e != c) {
              const double m_add = mass[e] + w[j];
              const double q_add = quad[e] + 2.0 * w[j] * S(j, e) + w[j] * w[j] * K(j, j);
              delta = remove + d[j] - q_add / m_add + ratio(quad[e], mass[e]);
            } else {
              const double m2 = mass[c] - w[i] + w[j];
              const double q2 = quad[c] - 2.0 * w[i] * S(i, c) + 2.0 * w[j] * S(j, c) +
                                w[i] * w[i] * K(i, i) + w[j] * w[j] * K(j, j) -
                                2.0 * w[i] * w[j] * K(i, j);
              delta = d[j] - d[i] - q2 / m2 + ratio(quad[c], mass[c]);
            }
            if (delta < best) {
              best = delta;
              bi = i;
              bc = c;
              bj = j;
              bd = e;
            }
          }
        }
      }
    }
    if (bi < 0) break;

    auto apply = [&](Index i, int c, int sign) {
      const double wi = sign * w[i];
      quad[c] += 2.0 * wi * S(i, c) + w[i] * w[i] * K(i, i);
      mass[c] += wi;
      S.col(c) += wi * K.col(i);
      U(i, c) = sign > 0 ? 1 : 0;
      count[i] += sign;
    };
    apply(bi, bc, -1);
    if (mass[bc] <= 1e-12 * w.maxCoeff()) {
      mass[bc] = 0.0;
      quad[bc] = 0.0;
    }
    apply(bj, bd, +1);
    unassigned = (count.array() == 0).count();
    changed = true;
  }
  cl.assign_count = U.rowwise().sum();
  return changed;
}

}  // namespace

DiscreteClustering::DiscreteClustering(Eigen::MatrixXi assignment)
    : U(std::move(assignment)) {
  if ((U.array() != 0 && U.array() != 1).any())
    throw std::invalid_argument("assignment matrix must be binary");
  assign_count = U.rowwise().sum();
}

DiscreteClustering DiscreteClustering::from_clusters(
    Index n, int k, const ClusterList& clusters) {
  if (static_cast<int>(clusters.size()) > k)
    throw std::invalid_argument("more clusters than k");
  Eigen::MatrixXi U = Eigen::MatrixXi::Zero(n, k);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (Index i : clusters[c]) {
      if (i < 0 || i >= n)
        throw std::invalid_argument("cluster member id out of range");
      U(i, static_cast<Index>(c)) = 1;
    }
  }
  return DiscreteClustering(std::move(U));
}

ClusterList DiscreteClustering::clusters() const {
  ClusterList out(static_cast<std::size_t>(k()));
  for (int c = 0; c < k(); ++c)
    for (Index i = 0; i < n(); ++i)
      if (U(i, c) != 0) out[c].push_back(i);
  return out;
}

bool satisfies_constraints(const KernelProblem& p, const DiscreteClustering& c) {
  if (c.n() != p.n() || c.k() != p.k()) return false;
  return c.total_assignments() == p.assignment_quota() &&
         c.unassigned() <= p.max_unassigned();
}

double clustering_cost(const KernelProblem& p, const DiscreteClustering& c) {
  check_shape(p, c);
  const MatrixXd& K = p.kernel();
  double total = 0.0;
  for (int col = 0; col < c.k(); ++col) {
    const VectorXd member_w =
        c.U.col(col).cast<double>().cwiseProduct(p.weights());
    const double mass = member_w.sum();
    if (mass <= 0.0) continue;
    total += c.U.col(col).cast<double>().dot(p.d()) -
             member_w.dot(K * member_w) / mass;
  }
  return total;
}

double neo_objective(const KernelProblem& p, const DiscreteClustering& c) {
  check_shape(p, c);
  if (c.total_assignments() != p.assignment_quota())
    throw std::invalid_argument(
        "clustering makes " + std::to_string(c.total_assignments()) +
        " assignments, expected " + std::to_string(p.assignment_quota()));
  if (c.unassigned() > p.max_unassigned())
    throw std::invalid_argument(
        "clustering leaves " + std::to_string(c.unassigned()) +
        " points unassigned, at most " + std::to_string(p.max_unassigned()) +
        " allowed");
  for (int col = 0; col < c.k(); ++col)
    if (c.U.col(col).sum() == 0)
      warn("cluster " + std::to_string(col) + " is empty; contributes 0");
  return clustering_cost(p, c);
}

MatrixXd centroid_distances(const KernelProblem& p,
                            const DiscreteClustering& c) {
  check_shape(p, c);
  const Index n = p.n();
  MatrixXd coef = c.U.cast<double>();
  VectorXd mass = coef.transpose() * p.weights();
  coef = p.weights().asDiagonal() * coef;
  for (int col = 0; col < c.k(); ++col)
    if (mass[col] > 0.0) coef.col(col) /= mass[col];

  const MatrixXd KC = p.kernel() * coef;
  MatrixXd out(n, c.k());
  for (int col = 0; col < c.k(); ++col) {
    if (mass[col] <= 0.0) {
      out.col(col).setConstant(kInf);
      continue;
    }
    const double self = coef.col(col).dot(KC.col(col));
    out.col(col) = p.kernel().diagonal() - 2.0 * KC.col(col) +
                   VectorXd::Constant(n, self);
  }
  return out;
}

DiscreteClustering assign_to_centroids(const KernelProblem& p,
                                       const MatrixXd& distances) {
  const Index n = p.n();
  const int k = p.k();
  if (distances.rows() != n || distances.cols() != k)
    throw std::invalid_argument("distance matrix shape does not match problem");

  MatrixXd cost = p.weights().asDiagonal() * distances;
  // 0 * inf would be nan; weights are positive so this only guards overflow.
  for (Index i = 0; i < n; ++i)
    for (int c = 0; c < k; ++c)
      if (std::isinf(distances(i, c))) cost(i, c) = kInf;

  std::vector<int> nearest(n);
  std::vector<double> nearest_cost(n);
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    for (int c = 1; c < k; ++c)
      if (cost(i, c) < cost(i, best)) best = c;
    nearest[i] = best;
    nearest_cost[i] = cost(i, best);
  }

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return nearest_cost[a] < nearest_cost[b];
  });

  Eigen::MatrixXi U = Eigen::MatrixXi::Zero(n, k);
  const Index must = n - p.max_unassigned();
  for (Index j = 0; j < must; ++j) U(order[j], nearest[order[j]]) = 1;

  Index remaining = p.assignment_quota() - must;
  if (remaining > 0) {
    std::vector<std::tuple<double, Index, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n * k));
    for (Index i = 0; i < n; ++i)
      for (int c = 0; c < k; ++c)
        if (U(i, c) == 0) pairs.emplace_back(cost(i, c), i, c);
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [value, i, c] : pairs) {
      if (remaining == 0) break;
      U(i, c) = 1;
      --remaining;
    }
  }
  return DiscreteClustering(std::move(U));
}

IterativeResult neo_iterate(const KernelProblem& p,
                            const std::optional<DiscreteClustering>& init,
                            const IterativeOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  DiscreteClustering current;
  if (init) {
    check_shape(p, *init);
    if (!satisfies_constraints(p, *init))
      throw std::invalid_argument("initial clustering violates constraints");
    current = *init;
  } else {
    current = seed_clustering(p, rng);
  }

  IterativeResult result;
  double objective = clustering_cost(p, current);
  result.trace.push_back(objective);

  for (int sweep = 0; sweep < opts.max_iters; ++sweep) {
    const MatrixXd distances = centroid_distances(p, current);
    DiscreteClustering next = assign_to_centroids(p, distances);
    reseed_empty_clusters(p, distances, next);
    bool accepted = false;
    if (!(next == current)) {
      const double next_objective = clustering_cost(p, next);
      // Strict decrease only; guards against cycling between ties and
      // against a re-seed that does not pay for itself.
      if (next_objective < objective) {
        current = std::move(next);
        objective = next_objective;
        accepted = true;
      }
    }
    if (!accepted && opts.swap_search) {
      DiscreteClustering refined = current;
      if (swap_search(p, refined)) {
        const double refined_objective = clustering_cost(p, refined);
        if (refined_objective < objective) {
          current = std::move(refined);
          objective = refined_objective;
          accepted = true;
        }
      }
    }
    if (!accepted) break;
    result.trace.push_back(objective);
    ++result.sweeps;
  }

  result.clustering = std::move(current);
  result.objective = objective;
  return result;
}

IterativeResult neo_iterate_restarts(const KernelProblem& p, int restarts,
                                     const IterativeOptions& opts) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  IterativeResult best;
  for (int r = 0; r < restarts; ++r) {
    IterativeOptions o = opts;
    o.seed = opts.seed + static_cast<std::uint64_t>(r);
    IterativeResult run = neo_iterate(p, std::nullopt, o);
    if (r == 0 || run.objective < best.objective) best = std::move(run);
  }
  return best;
}

}  // namespace neoclust
