#pragma once

#include <barrier>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "pushrank/graph.hpp"
#include "pushrank/pagerank.hpp"
#include "pushrank/partition.hpp"
#include "pushrank/types.hpp"

namespace pushrank {

inline constexpr vertex_t kDenseOracleLimit = 2000;
inline constexpr vertex_t kRedistributeLimit = 100000;

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace detail

// Exact PageRank by a dense LU solve of (I - cP')pi = (1-c)p, where P'
// sends the mass of dangling columns along p. Only for small graphs.
inline PageRankVector dense_oracle(const Graph& g, const SolverConfig& cfg) {
  const vertex_t n = g.num_vertices();
  cfg.validate(n);
  if (n > kDenseOracleLimit)
    throw LimitError("dense oracle refuses n = " + std::to_string(n) + " (limit " +
                     std::to_string(kDenseOracleLimit) + ")");
  const auto p = cfg.restart(n);

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs(n);
  for (vertex_t j = 0; j < n; ++j) {
    rhs[j] = (1.0 - cfg.c) * p[j];
    if (g.is_dangling(j)) {
      for (vertex_t i = 0; i < n; ++i) system(i, j) -= cfg.c * p[i];
    } else {
      const double w = cfg.c / g.out_degree(j);
      for (vertex_t i : g.targets(j)) system(i, j) -= w;
    }
  }
  Eigen::VectorXd x = system.partialPivLu().solve(rhs);

  PageRankVector out;
  out.values.assign(x.data(), x.data() + n);
  out.meta.algorithm = "dense";
  out.meta.c = cfg.c;
  out.meta.raw_total = out.sum();
  out.normalize();
  return out;
}

// Called with (iteration, iterate) after every iteration, including 0.
// Returning true stops the run early.
using PowerObserver = std::function<bool(std::size_t, std::span<const double>)>;

// Power iteration pi <- cP pi + (c * sum_{dangling} pi + (1-c)) p.
//
// With workers > 1 the product is split by destination vertex; partial sums
// are combined in worker order, so a fixed worker count gives identical
// results on every run.
inline std::pair<PageRankVector, RunTrace> power_method(const Graph& g, const SolverConfig& cfg,
                                                        std::size_t workers = 1,
                                                        const PowerObserver& observe = {}) {
  const vertex_t n = g.num_vertices();
  cfg.validate(n);
  if (workers < 1) throw ConfigError("worker count must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const auto p = cfg.restart(n);
  const double c = cfg.c;

  RunTrace trace;
  PageRankVector out;
  out.meta.algorithm = workers > 1 ? "mpi" : "spi";
  out.meta.c = c;
  std::vector<double> x = p;

  if (n == 0 || cfg.max_iterations == 0 || (observe && observe(0, x))) {
    out.values = std::move(x);
    out.meta.raw_total = out.sum();
    trace.wall_ms = detail::elapsed_ms(start);
    return {std::move(out), std::move(trace)};
  }

  auto [in_off, in_src] = g.transpose();
  edge_t dangling_in = 0;
  for (vertex_t v = 0; v < n; ++v)
    if (g.is_dangling(v)) dangling_in += in_off[v + 1] - in_off[v];

  const std::size_t K = std::min<std::size_t>(workers, n);
  std::vector<double> weight(n);
  for (vertex_t v = 0; v < n; ++v) weight[v] = static_cast<double>(in_off[v + 1] - in_off[v]) + 1.0;
  const auto cuts = detail::balanced_cuts(weight, K);
  trace.preprocessing_ms = detail::elapsed_ms(start);

  std::vector<double> next(n, 0.0), contrib(n, 0.0);
  std::vector<double> dangling_part(K, 0.0), diff_part(K, 0.0);
  double teleport = 0.0;
  std::size_t iteration = 0;
  bool done = false;
  bool after_gather = false;
  std::exception_ptr failure;

  auto scatter = [&](std::size_t k) {
    double d = 0.0;
    for (std::size_t v = cuts[k]; v < cuts[k + 1]; ++v) {
      const vertex_t deg = g.out_degree(static_cast<vertex_t>(v));
      if (deg == 0) {
        contrib[v] = 0.0;
        d += x[v];
      } else {
        contrib[v] = x[v] / deg;
      }
    }
    dangling_part[k] = d;
  };
  auto gather = [&](std::size_t k) {
    double diff = 0.0;
    for (std::size_t i = cuts[k]; i < cuts[k + 1]; ++i) {
      double s = 0.0;
      for (edge_t e = in_off[i]; e < in_off[i + 1]; ++e) s += contrib[in_src[e]];
      next[i] = c * s + teleport * p[i];
      diff += std::abs(next[i] - x[i]);
    }
    diff_part[k] = diff;
  };
  // Runs single-threaded between phases.
  auto between_phases = [&]() noexcept {
    if (!after_gather) {
      double d = 0.0;
      for (double part : dangling_part) d += part;
      teleport = c * d + (1.0 - c);
    } else {
      double diff = 0.0;
      for (double part : diff_part) diff += part;
      x.swap(next);
      ++iteration;
      TraceRow row;
      row.t = iteration;
      row.h_l1 = diff;
      row.work = g.num_edges() + n;
      row.push_ops = g.num_edges();
      row.push_ops_dangling = dangling_in;
      row.wall_ms = detail::elapsed_ms(start);
      trace.rows.push_back(row);
      bool stop = iteration >= cfg.max_iterations || (cfg.tolerance > 0.0 && diff < cfg.tolerance);
      if (!stop && observe) {
        try {
          stop = observe(iteration, x);
        } catch (...) {
          failure = std::current_exception();
          stop = true;
        }
      }
      done = stop;
    }
    after_gather = !after_gather;
  };

  if (K == 1) {
    while (!done) {
      scatter(0);
      between_phases();
      gather(0);
      between_phases();
    }
  } else {
    std::barrier sync(static_cast<std::ptrdiff_t>(K), between_phases);
    {
      std::vector<std::jthread> pool;
      pool.reserve(K);
      for (std::size_t k = 0; k < K; ++k) {
        pool.emplace_back([&, k] {
          while (!done) {
            scatter(k);
            sync.arrive_and_wait();
            gather(k);
            sync.arrive_and_wait();
          }
        });
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  out.values = std::move(x);
  out.meta.iterations = iteration;
  out.meta.raw_total = out.sum();
  trace.iterations = iteration;
  trace.push_ops_total = iteration * g.num_edges();
  trace.push_ops_dangling = iteration * dangling_in;
  trace.wall_ms = detail::elapsed_ms(start);
  return {std::move(out), std::move(trace)};
}

enum class DanglingMode { terminate, redistribute };

// Called after each push with the reserved and pending arrays.
using PushObserver = std::function<void(std::span<const double>, std::span<const double>)>;

// Serial Forward Push: reserve (1-c)h_i and spread c*h_i over the targets.
//
// `terminate` drops the pushed share at dangling vertices; `redistribute`
// spreads it along p to every vertex. Vertices are scanned in ascending id
// order, pass after pass, until no h_i exceeds xi. The returned vector is
// the raw reserved mass; meta.raw_total and meta.residual_total hold the
// reserved and pending totals.
inline PageRankVector forward_push_ppr(const Graph& g, const SolverConfig& cfg, DanglingMode mode,
                                       const PushObserver& observe = {}) {
  const vertex_t n = g.num_vertices();
  cfg.validate(n);
  if (mode == DanglingMode::redistribute && n > kRedistributeLimit)
    throw LimitError("redistributing forward push refuses n = " + std::to_string(n) +
                     " (O(n) work per dangling push; limit " + std::to_string(kRedistributeLimit) + ")");
  const auto p = cfg.restart(n);
  const double c = cfg.c;
  std::vector<double> reserved(n, 0.0);
  std::vector<double> h = p;

  std::size_t passes = 0;
  for (bool pushed = true; pushed;) {
    pushed = false;
    ++passes;
    for (vertex_t i = 0; i < n; ++i) {
      if (!(h[i] > cfg.xi)) continue;
      pushed = true;
      const double hi = h[i];
      h[i] = 0.0;
      reserved[i] += (1.0 - c) * hi;
      const vertex_t deg = g.out_degree(i);
      if (deg > 0) {
        const double w = c * hi / deg;
        for (vertex_t u : g.targets(i)) h[u] += w;
      } else if (mode == DanglingMode::redistribute) {
        for (vertex_t j = 0; j < n; ++j) h[j] += c * hi * p[j];
      }
      if (observe) observe(reserved, h);
    }
  }

  PageRankVector out;
  out.values = std::move(reserved);
  out.meta.algorithm = mode == DanglingMode::redistribute ? "fp" : "fp-terminate";
  out.meta.c = c;
  out.meta.xi = cfg.xi;
  out.meta.iterations = passes;
  out.meta.raw_total = out.sum();
  for (double x : h) out.meta.residual_total += x;
  return out;
}

// Unnormalized truncated series sum_{r=0}^{terms} (cP)^r p. Mass reaching a
// dangling vertex stops there.
inline std::vector<double> series_mass(const Graph& g, const SolverConfig& cfg, std::size_t terms) {
  const vertex_t n = g.num_vertices();
  cfg.validate(n);
  std::vector<double> term = cfg.restart(n);
  std::vector<double> total = term;
  std::vector<double> next(n);
  for (std::size_t r = 1; r <= terms; ++r) {
    std::fill(next.begin(), next.end(), 0.0);
    for (vertex_t j = 0; j < n; ++j) {
      const vertex_t deg = g.out_degree(j);
      if (deg == 0 || term[j] == 0.0) continue;
      const double w = cfg.c * term[j] / deg;
      for (vertex_t i : g.targets(j)) next[i] += w;
    }
    term.swap(next);
    for (vertex_t i = 0; i < n; ++i) total[i] += term[i];
  }
  return total;
}

inline PageRankVector series_pagerank(const Graph& g, const SolverConfig& cfg, std::size_t terms) {
  PageRankVector out;
  out.values = series_mass(g, cfg, terms);
  out.meta.algorithm = "series";
  out.meta.c = cfg.c;
  out.meta.iterations = terms;
  out.meta.raw_total = out.sum();
  out.normalize();
  return out;
}

}  // namespace pushrank
