#pragma once

#include <string>
#include <vector>

#include "neoclust/kernels.hpp"

namespace neoclust {

// Harmonic mean of precision and recall of `found` against `truth`.
double set_f1(const std::vector<Index>& found, const std::vector<Index>& truth);

// Symmetrised average best-match F1:
//   1/2 [mean_t max_f F1(f, t) + mean_f max_t F1(f, t)]
// Empty found clusters are skipped with a warning; an empty found list
// scores 0. Throws std::invalid_argument if `truth` has no nonempty cluster.
double f1_score(const ClusterList& found, const ClusterList& truth);

struct Quartiles {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Box-plot statistics with linear interpolation between order statistics.
Quartiles quartiles(std::vector<double> values);

}  // namespace neoclust
