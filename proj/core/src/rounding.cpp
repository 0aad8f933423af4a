#include "neoclust/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "neoclust/log.hpp"

namespace neoclust {

DiscreteClustering round_solution(const KernelProblem& p,
                                  const LowRankState& st,
                                  const DiscreteClustering* fallback) {
  check_dimensions(p, st);
  if (!st.all_finite()) throw std::invalid_argument("state is not finite");
  const Index n = p.n();
  const int k = p.k();

  if (st.Y.cwiseAbs().maxCoeff() == 0.0) {
    if (fallback != nullptr && satisfies_constraints(p, *fallback)) {
      warn("relaxed Y is identically zero; using the warm-start clustering");
      return *fallback;
    }
    warn("relaxed Y is identically zero; rounding by g and f only");
  }

  std::vector<Index> by_g(n);
  std::iota(by_g.begin(), by_g.end(), Index{0});
  std::stable_sort(by_g.begin(), by_g.end(), [&](Index a, Index b) {
    if (st.g[a] != st.g[b]) return st.g[a] > st.g[b];
    return st.f[a] > st.f[b];
  });
  const Index must_count = n - p.max_unassigned();
  std::vector<bool> must(n, false);
  for (Index j = 0; j < must_count; ++j) must[by_g[j]] = true;

  std::vector<int> target(n);
  for (Index i = 0; i < n; ++i) {
    const long rounded = std::lround(st.f[i]);
    target[i] = static_cast<int>(
        std::clamp<long>(rounded, must[i] ? 1 : 0, static_cast<long>(k)));
  }

  const Index quota = p.assignment_quota();
  Eigen::MatrixXi U = Eigen::MatrixXi::Zero(n, k);
  std::vector<int> count(n, 0);
  Index total = 0;

  for (Index i = 0; i < n; ++i) {
    if (!must[i]) continue;
    Index best = 0;
    st.Y.row(i).maxCoeff(&best);
    U(i, best) = 1;
    ++count[i];
    ++total;
  }

  std::vector<Index> pairs(static_cast<std::size_t>(n * k));
  std::iota(pairs.begin(), pairs.end(), Index{0});
  // Pair id = i * k + c, so index order is (lower i, lower c).
  std::stable_sort(pairs.begin(), pairs.end(), [&](Index a, Index b) {
    return st.Y(a / k, a % k) > st.Y(b / k, b % k);
  });

  for (Index id : pairs) {
    if (total >= quota) break;
    const Index i = id / k;
    const Index c = id % k;
    if (U(i, c) != 0 || count[i] >= target[i]) continue;
    U(i, c) = 1;
    ++count[i];
    ++total;
  }
  for (Index id : pairs) {
    if (total >= quota) break;
    const Index i = id / k;
    const Index c = id % k;
    if (U(i, c) != 0) continue;
    U(i, c) = 1;
    ++count[i];
    ++total;
  }
  return DiscreteClustering(std::move(U));
}

}  // namespace neoclust
