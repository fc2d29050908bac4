#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

#include "pushrank/graph.hpp"
#include "pushrank/types.hpp"

namespace pushrank {

struct SynthParams {
  vertex_t n = 1000;
  edge_t m = 10000;
  double dangling_fraction = 0.2;
  std::uint64_t seed = 1;
  // Weakly connected; needs m >= n - 1.
  bool connected = false;
};

namespace detail {

// Unbiased bounded draw; mt19937_64 output is fixed by the standard, the
// std distributions are not, so results match across standard libraries.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

}  // namespace detail

inline void validate(const SynthParams& s) {
  if (s.n < 1) throw ConfigError("synthetic graph needs n >= 1");
  if (!(s.dangling_fraction >= 0.0 && s.dangling_fraction < 1.0))
    throw ConfigError("dangling fraction must lie in [0,1)");
  const auto nd = static_cast<vertex_t>(std::llround(s.dangling_fraction * s.n));
  const vertex_t live = s.n - nd;
  if (live == 0) throw ConfigError("dangling fraction leaves no non-dangling vertex");
  if (s.n == 1) {
    if (s.m != 0) throw ConfigError("a single vertex admits no edges without self-loops");
    return;
  }
  // Every non-dangling vertex needs an out-edge, every dangling vertex an in-edge.
  if (s.m < std::max<edge_t>(live, nd))
    throw ConfigError("m too small: each non-dangling vertex needs an out-edge and each dangling vertex an in-edge");
  if (s.m > static_cast<edge_t>(live) * (s.n - 1)) throw ConfigError("m exceeds the number of possible edges");
  if (s.connected && s.m + 1 < s.n) throw ConfigError("a connected graph needs m >= n - 1");
}

// Seed-deterministic random directed graph without self-loops or repeated
// edges. Dangling vertices are a random subset of size round(f*n); every
// vertex has at least one incident edge so edge-list round trips keep n.
inline std::vector<Edge> synth_edges(const SynthParams& s) {
  validate(s);
  std::mt19937_64 rng(s.seed);
  const vertex_t n = s.n;
  const auto nd = static_cast<vertex_t>(std::llround(s.dangling_fraction * n));

  std::vector<vertex_t> order(n);
  for (vertex_t v = 0; v < n; ++v) order[v] = v;
  for (vertex_t i = n; i > 1; --i) std::swap(order[i - 1], order[detail::bounded(rng, i)]);
  std::vector<char> dangling(n, 0);
  for (vertex_t i = 0; i < nd; ++i) dangling[order[i]] = 1;
  std::vector<vertex_t> live;
  for (vertex_t v = 0; v < n; ++v)
    if (!dangling[v]) live.push_back(v);

  auto random_live = [&] { return live[detail::bounded(rng, live.size())]; };
  auto random_other = [&](vertex_t a) {
    vertex_t b;
    do b = static_cast<vertex_t>(detail::bounded(rng, n));
    while (b == a);
    return b;
  };

  std::vector<Edge> edges;
  edges.reserve(s.m);
  std::vector<char> has_out(n, 0), has_in(n, 0);
  auto add = [&](vertex_t a, vertex_t b) {
    edges.push_back({a, b});
    has_out[a] = 1;
    has_in[b] = 1;
  };

  if (s.connected) {
    // Attach vertices in shuffled order to a random earlier non-dangling vertex.
    std::vector<vertex_t> attach_order;
    attach_order.reserve(n);
    for (vertex_t v : order)
      if (!dangling[v]) attach_order.push_back(v);
    for (vertex_t v : order)
      if (dangling[v]) attach_order.push_back(v);
    std::vector<vertex_t> placed_live{attach_order[0]};
    for (std::size_t i = 1; i < attach_order.size(); ++i) {
      const vertex_t v = attach_order[i];
      add(placed_live[detail::bounded(rng, placed_live.size())], v);
      if (!dangling[v]) placed_live.push_back(v);
    }
  }
  // One edge per dangling vertex, drawn from sources that still lack an
  // out-edge first, so a single edge can serve both requirements.
  std::size_t cursor = 0;
  for (vertex_t v : order) {
    if (!dangling[v] || has_in[v]) continue;
    while (cursor < live.size() && has_out[live[cursor]]) ++cursor;
    add(cursor < live.size() ? live[cursor] : random_live(), v);
  }
  for (vertex_t v : live)
    if (!has_out[v]) add(v, random_other(v));

  // Repeated draws are removed and replaced until exactly m edges remain.
  auto dedup = [&] {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  };
  dedup();
  if (edges.size() > s.m) throw ConfigError("m too small for the mandatory edges of this graph");
  while (edges.size() < s.m) {
    const std::size_t missing = s.m - edges.size();
    for (std::size_t k = 0; k < missing; ++k) {
      const vertex_t a = random_live();
      edges.push_back({a, random_other(a)});
    }
    dedup();
  }
  return edges;
}

inline Graph synth_graph(const SynthParams& s) { return Graph::from_edges(s.n, synth_edges(s)); }

inline void write_edge_list(std::ostream& out, std::span<const Edge> edges, const std::string& comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  for (const Edge& e : edges) out << e.source << '\t' << e.target << '\n';
}

}  // namespace pushrank
