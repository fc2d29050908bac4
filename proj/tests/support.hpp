#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pushrank/graph.hpp"
#include "pushrank/pagerank.hpp"

namespace testsupport {

using pushrank::Edge;
using pushrank::Graph;
using pushrank::vertex_t;

inline Graph chain3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }
inline Graph cycle2() { return Graph::from_edges(2, {{0, 1}, {1, 0}}); }
inline Graph star3() { return Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}); }
inline Graph fan_in() { return Graph::from_edges(3, {{0, 2}, {1, 2}}); }

// Solves (I - c P') x = (1 - c) p by Gauss-Jordan with partial pivoting,
// building P' column by column straight from the edge list.
inline std::vector<double> gauss_pagerank(const Graph& g, double c, std::vector<double> p = {}) {
  const std::size_t n = g.num_vertices();
  if (p.empty()) p.assign(n, 1.0 / static_cast<double>(n));
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto v = static_cast<vertex_t>(j);
    const auto d = g.out_degree(v);
    if (d == 0) {
      for (std::size_t i = 0; i < n; ++i) a[i][j] -= c * p[i];
    } else {
      for (vertex_t t : g.targets(v)) a[t][j] -= c / static_cast<double>(d);
    }
  }
  for (std::size_t i = 0; i < n; ++i) a[i][n] = (1.0 - c) * p[i];
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::vector<double> x(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] = a[i][n] / a[i][i];
  for (double& v : x) v /= s;
  return x;
}

struct Case {
  std::string label;
  Graph graph;
};

// Seeded corpus of small graphs. Densities 0.05-0.5, dangling fraction 0-0.5,
// plus disconnected unions, all-dangling-target stars and edge cases.
inline std::vector<Case> random_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Case> out;

  auto random_graph = [&](vertex_t n, double density, double dangling, vertex_t offset, std::vector<Edge>& edges) {
    for (vertex_t i = 0; i < n; ++i) {
      if (unit(rng) < dangling) continue;
      bool any = false;
      for (vertex_t j = 0; j < n; ++j) {
        if (i == j && unit(rng) < 0.9) continue;
        if (unit(rng) < density) {
          edges.push_back({offset + i, offset + j});
          any = true;
        }
      }
      if (!any) edges.push_back({offset + i, offset + static_cast<vertex_t>(rng() % n)});
    }
  };

  out.push_back({"single-vertex", Graph::from_edges(1, {})});
  out.push_back({"two-cycle", cycle2()});
  out.push_back({"chain3", chain3()});
  out.push_back({"fan-in", fan_in()});
  out.push_back({"star", star3()});
  out.push_back({"self-loop", Graph::from_edges(2, {{0, 0}, {0, 1}})});

  for (std::size_t k = 0; out.size() < count; ++k) {
    std::vector<Edge> edges;
    std::string label;
    vertex_t n = 0;
    switch (k % 4) {
      case 0:
      case 1: {
        n = 2 + static_cast<vertex_t>(rng() % 49);
        const double density = 0.05 + 0.45 * unit(rng);
        const double dangling = 0.5 * unit(rng);
        random_graph(n, density, dangling, 0, edges);
        label = "random n=" + std::to_string(n);
        break;
      }
      case 2: {
        const vertex_t a = 2 + static_cast<vertex_t>(rng() % 24);
        const vertex_t b = 2 + static_cast<vertex_t>(rng() % 24);
        n = a + b;
        random_graph(a, 0.05 + 0.45 * unit(rng), 0.5 * unit(rng), 0, edges);
        random_graph(b, 0.05 + 0.45 * unit(rng), 0.5 * unit(rng), a, edges);
        label = "disconnected n=" + std::to_string(n);
        break;
      }
      default: {
        // Every edge lands on a dangling vertex.
        const vertex_t live = 1 + static_cast<vertex_t>(rng() % 20);
        const vertex_t dead = 1 + static_cast<vertex_t>(rng() % 20);
        n = live + dead;
        for (vertex_t i = 0; i < live; ++i) {
          edges.push_back({i, live + static_cast<vertex_t>(rng() % dead)});
          for (vertex_t j = 0; j < dead; ++j)
            if (unit(rng) < 0.3) edges.push_back({i, live + j});
        }
        label = "all-dangling-target n=" + std::to_string(n);
        break;
      }
    }
    out.push_back({label, Graph::from_edges(n, std::move(edges))});
  }
  return out;
}

}  // namespace testsupport
