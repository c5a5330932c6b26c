#pragma once

#include <cstddef>

#include "subspace/model.hpp"

namespace subspace {

/// sum over f of min over j of distance_sq(f, V_j). With a single subspace
/// this is exactly cost_single.
double cost_union(const DataSet& f, const UnionModel& m);

/// Maps each vector to its nearest subspace; ties pick the lowest index.
Partition assign(const DataSet& f, const UnionModel& m);

/// Refits each block of the partition with best_subspace; empty blocks yield
/// the zero subspace. The returned model has exactly `count` subspaces.
UnionModel fit_partition(const DataSet& f, const Partition& p, std::size_t count,
                         std::size_t rank);

/// Visits every set partition of {0..n-1} into at most max_blocks nonempty
/// blocks, encoded as a restricted growth string (assignment[0] == 0 and each
/// value is at most one above the running maximum). Label symmetry is thereby
/// removed. The callback receives the assignment and the block count.
template <typename Visitor>
void for_each_set_partition(std::size_t n, std::size_t max_blocks, Visitor&& visit) {
  if (n == 0 || max_blocks == 0) return;
  std::vector<std::size_t> a(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);  // max of a[0..i]
  for (;;) {
    visit(static_cast<const std::vector<std::size_t>&>(a), prefix_max[n - 1] + 1);
    // advance to the next restricted growth string in lexicographic order
    std::size_t i = n - 1;
    for (; i >= 1; --i) {
      const std::size_t cap = std::min(prefix_max[i - 1] + 1, max_blocks - 1);
      if (a[i] < cap) break;
    }
    if (i == 0) return;  // a[0] is pinned to 0; enumeration complete
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
  }
}

/// Globally optimal union fit by enumerating set partitions and solving each
/// block exactly. Refuses instances with more than `exhaustive_limit` points.
FitReport exhaustive_union(const DataSet& f, std::size_t count, std::size_t rank,
                           std::size_t exhaustive_limit = 12);

/// Alternating assign/refit heuristic with seeded restarts. Restart 0 uses
/// farthest-point seeding, the rest use random assignments. Empty clusters
/// are reseeded with the worst-fit point. The per-restart trace is
/// non-increasing; the best restart wins, ties to the lowest restart index.
FitReport k_subspaces(const DataSet& f, std::size_t count, std::size_t rank,
                      const SolverConfig& cfg);

}  // namespace subspace
