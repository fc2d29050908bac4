#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pushrank/graph.hpp"
#include "pushrank/types.hpp"

namespace pushrank {

enum class PartitionStrategy { contiguous, strided, degree_balanced };

inline std::string_view to_string(PartitionStrategy s) {
  switch (s) {
    case PartitionStrategy::contiguous: return "contiguous";
    case PartitionStrategy::strided: return "strided";
    case PartitionStrategy::degree_balanced: return "degree-balanced";
  }
  return "?";
}

inline PartitionStrategy parse_partition_strategy(std::string_view s) {
  if (s == "contiguous") return PartitionStrategy::contiguous;
  if (s == "strided") return PartitionStrategy::strided;
  if (s == "degree-balanced" || s == "balanced") return PartitionStrategy::degree_balanced;
  throw ConfigError("unknown partition strategy '" + std::string(s) + "'");
}

// Vertex sets owned by each worker. Every set is sorted ascending.
struct Partition {
  std::vector<std::vector<vertex_t>> sets;
  PartitionStrategy strategy = PartitionStrategy::degree_balanced;

  std::size_t workers() const noexcept { return sets.size(); }
};

namespace detail {

// Splits [0, weights.size()) into K contiguous ranges whose weight sums
// cross the ideal cut points k*W/K. Each range weighs at most W/K + max(w).
// Ranges are non-empty whenever K <= weights.size().
inline std::vector<std::size_t> balanced_cuts(std::span<const double> weights, std::size_t K) {
  const std::size_t count = weights.size();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> cuts(K + 1, 0);
  std::size_t pos = 0;
  double prefix = 0.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double goal = total * static_cast<double>(k + 1) / static_cast<double>(K);
    const std::size_t must_leave = K - k - 1;
    // Take at least one element, stop at the goal, and leave one per remaining worker.
    std::size_t end = pos;
    if (end + must_leave < count) {
      prefix += weights[end++];
      while (end + must_leave < count && prefix < goal) prefix += weights[end++];
    }
    cuts[k + 1] = end;
    pos = end;
  }
  cuts[K] = count;
  return cuts;
}

}  // namespace detail

// Partitions `universe` (ascending vertex ids) across K workers. Weight of a
// vertex is deg(v)+1, the work of one push from it.
inline Partition partition_vertices(const Graph& g, std::span<const vertex_t> universe, std::size_t K,
                                    PartitionStrategy strategy) {
  if (K < 1) throw ConfigError("worker count must be at least 1");
  Partition p;
  p.strategy = strategy;
  p.sets.resize(K);
  const std::size_t count = universe.size();
  switch (strategy) {
    case PartitionStrategy::contiguous: {
      for (std::size_t k = 0; k < K; ++k) {
        std::size_t b = count * k / K, e = count * (k + 1) / K;
        p.sets[k].assign(universe.begin() + b, universe.begin() + e);
      }
      break;
    }
    case PartitionStrategy::strided: {
      for (std::size_t i = 0; i < count; ++i) p.sets[i % K].push_back(universe[i]);
      break;
    }
    case PartitionStrategy::degree_balanced: {
      std::vector<double> w(count);
      for (std::size_t i = 0; i < count; ++i) w[i] = g.out_degree(universe[i]) + 1.0;
      auto cuts = detail::balanced_cuts(w, K);
      for (std::size_t k = 0; k < K; ++k)
        p.sets[k].assign(universe.begin() + cuts[k], universe.begin() + cuts[k + 1]);
      break;
    }
  }
  return p;
}

inline std::vector<vertex_t> non_dangling_vertices(const Graph& g) {
  std::vector<vertex_t> out;
  for (vertex_t v = 0; v < g.num_vertices(); ++v)
    if (!g.is_dangling(v)) out.push_back(v);
  return out;
}

// The IFP1 universe: non-dangling vertices.
inline Partition partition_vertices(const Graph& g, std::size_t K, PartitionStrategy strategy) {
  auto universe = non_dangling_vertices(g);
  return partition_vertices(g, universe, K, strategy);
}

}  // namespace pushrank
