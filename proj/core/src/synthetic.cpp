#include "neoclust/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace neoclust {

Dataset overlapping_blobs(const BlobSpec& spec) {
  if (spec.n < 1 || spec.k < 1 || spec.dim < 1)
    throw std::invalid_argument("n, k and dim must be positive");
  if (spec.overlap_frac < 0.0 || spec.outlier_frac < 0.0 ||
      spec.overlap_frac + spec.outlier_frac > 1.0)
    throw std::invalid_argument("overlap and outlier fractions must sum to <= 1");
  if (spec.overlap_frac > 0.0 && spec.k < 2)
    throw std::invalid_argument("overlap needs at least two clusters");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.spread);

  MatrixXd centers = MatrixXd::Zero(spec.k, spec.dim);
  for (int c = 0; c < spec.k; ++c) {
    const double angle = 2.0 * std::numbers::pi * c / spec.k;
    centers(c, 0) = spec.radius * std::cos(angle);
    if (spec.dim > 1) centers(c, 1) = spec.radius * std::sin(angle);
  }

  const auto n_out = static_cast<Index>(std::floor(spec.outlier_frac * spec.n));
  const auto n_ovl = static_cast<Index>(std::floor(spec.overlap_frac * spec.n));
  const Index n_core = spec.n - n_out - n_ovl;

  Dataset d;
  d.X.resize(spec.n, spec.dim);
  ClusterList truth(spec.k);
  Index i = 0;

  for (; i < n_core; ++i) {
    const int c = static_cast<int>(i % spec.k);
    for (int j = 0; j < spec.dim; ++j) d.X(i, j) = centers(c, j) + noise(rng);
    truth[c].push_back(i);
  }
  // Overlap points sit near the midpoint of two adjacent centers.
  for (Index o = 0; o < n_ovl; ++o, ++i) {
    const int a = static_cast<int>(o % spec.k);
    const int b = (a + 1) % spec.k;
    for (int j = 0; j < spec.dim; ++j)
      d.X(i, j) = 0.5 * (centers(a, j) + centers(b, j)) + 0.5 * noise(rng);
    truth[std::min(a, b)].push_back(i);
    truth[std::max(a, b)].push_back(i);
  }
  const double box = spec.radius + 4.0 * spec.spread;
  std::uniform_real_distribution<double> uniform(-box, box);
  for (; i < spec.n; ++i)
    for (int j = 0; j < spec.dim; ++j) d.X(i, j) = uniform(rng);

  for (auto& c : truth) std::sort(c.begin(), c.end());
  d.ground_truth = std::move(truth);
  return d;
}

}  // namespace neoclust
