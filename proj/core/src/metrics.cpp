#include "neoclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "neoclust/log.hpp"

namespace neoclust {

double set_f1(const std::vector<Index>& found, const std::vector<Index>& truth) {
  if (found.empty() || truth.empty()) return 0.0;
  const std::unordered_set<Index> truth_set(truth.begin(), truth.end());
  const std::unordered_set<Index> found_set(found.begin(), found.end());
  std::size_t overlap = 0;
  for (Index i : found_set) overlap += truth_set.count(i);
  if (overlap == 0) return 0.0;
  const double precision = double(overlap) / double(found_set.size());
  const double recall = double(overlap) / double(truth_set.size());
  return 2.0 * precision * recall / (precision + recall);
}

double f1_score(const ClusterList& found, const ClusterList& truth) {
  ClusterList t;
  for (const auto& c : truth)
    if (!c.empty()) t.push_back(c);
  if (t.empty()) throw std::invalid_argument("ground truth has no clusters");

  ClusterList f;
  for (const auto& c : found)
    if (!c.empty()) f.push_back(c);
  if (f.size() < found.size())
    warn("skipping " + std::to_string(found.size() - f.size()) +
         " empty found cluster(s) in F1");
  if (f.empty()) {
    warn("no nonempty found clusters; F1 is 0");
    return 0.0;
  }

  std::vector<double> best_for_truth(t.size(), 0.0);
  std::vector<double> best_for_found(f.size(), 0.0);
  for (std::size_t a = 0; a < f.size(); ++a) {
    for (std::size_t b = 0; b < t.size(); ++b) {
      const double v = set_f1(f[a], t[b]);
      best_for_found[a] = std::max(best_for_found[a], v);
      best_for_truth[b] = std::max(best_for_truth[b], v);
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
  };
  return 0.5 * (mean(best_for_truth) + mean(best_for_found));
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("no values");
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double pos = q * double(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - double(lo)) * (values[hi] - values[lo]);
  };
  return {values.front(), at(0.25), at(0.5), at(0.75), values.back()};
}

}  // namespace neoclust
