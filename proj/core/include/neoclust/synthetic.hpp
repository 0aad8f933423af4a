#pragma once

#include <cstdint>

#include "neoclust/kernels.hpp"

namespace neoclust {

struct BlobSpec {
  Index n = 300;
  int k = 3;
  int dim = 2;
  double radius = 6.0;         // centers sit on a circle (first two coords)
  double spread = 1.0;         // per-coordinate standard deviation
  double overlap_frac = 0.1;   // points drawn between two centers
  double outlier_frac = 0.05;  // uniform background points
  std::uint64_t seed = 0;
};

// Gaussian blobs with planted overlap and outliers. Ground truth lists each
// overlap point in both parent clusters and leaves outliers out.
Dataset overlapping_blobs(const BlobSpec& spec);

}  // namespace neoclust
