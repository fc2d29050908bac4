#pragma once

#include <chrono>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pushrank/graph.hpp"
#include "pushrank/ifp.hpp"
#include "pushrank/pagerank.hpp"
#include "pushrank/types.hpp"

namespace pushrank {

// IFP1: full reservation, dangling vertices absorb their pending mass.
// IFP2: phase 1 on live targets only, then one pass over dangling vertices.
// FPFull: Forward Push with (1-c) reservation; dangling mass is spread along p.
enum class SimVariant { IFP1, IFP2, FPFull };

inline std::string_view to_string(SimVariant v) {
  switch (v) {
    case SimVariant::IFP1: return "ifp1";
    case SimVariant::IFP2: return "ifp2";
    case SimVariant::FPFull: return "fp-full";
  }
  return "?";
}

inline SimVariant parse_sim_variant(std::string_view s) {
  if (s == "ifp1") return SimVariant::IFP1;
  if (s == "ifp2") return SimVariant::IFP2;
  if (s == "fp-full" || s == "fp") return SimVariant::FPFull;
  throw ConfigError("unknown simulator variant '" + std::string(s) + "'");
}

inline constexpr std::size_t kSimIterationCap = 100000;

// Called after each synchronous iteration with (t, reserved, pending).
using SimObserver = std::function<void(std::size_t, std::span<const double>, std::span<const double>)>;

namespace detail {

// One synchronous run. Iteration t reads the snapshot h(t) and writes
// h(t+1); every vertex with h_i(t) > xi is processed, all others carry
// their mass over. Single-threaded with a fixed visiting order, so the
// output is bit-identical across runs.
inline std::pair<PageRankVector, RunTrace> simulate(const Graph& g, const IFP2Graph* pg, const SolverConfig& cfg,
                                                    SimVariant variant, const SimObserver& observe) {
  cfg.validate(g.num_vertices());
  const auto start = std::chrono::steady_clock::now();
  const vertex_t n = g.num_vertices();
  const double c = cfg.c;
  const double xi = cfg.xi;
  const auto p = cfg.restart(n);
  const bool live_only = variant == SimVariant::IFP2;
  const double keep = variant == SimVariant::FPFull ? 1.0 - c : 1.0;

  std::vector<double> h = initial_pending(n, cfg);
  std::vector<double> next(n);
  std::vector<double> reserved(n, 0.0);
  std::size_t dangling_count = 0;
  for (vertex_t i = 0; i < n; ++i) dangling_count += g.is_dangling(i) ? 1 : 0;
  RunTrace trace;

  for (std::size_t t = 0; t < kSimIterationCap; ++t) {
    TraceRow row;
    row.t = t;
    std::fill(next.begin(), next.end(), 0.0);
    double onward = 0.0;
    double spread = 0.0;  // FPFull: mass leaving dangling vertices along p
    std::size_t active = 0;
    for (vertex_t i = 0; i < n; ++i) {
      const bool dangling = g.is_dangling(i);
      // IFP2 leaves dangling vertices alone until phase 2.
      if (live_only && dangling) continue;
      const double hi = h[i];
      row.h_l1 += hi;
      if (!(hi > xi)) {
        next[i] += hi;
        row.carry_mass += hi;
        ++row.converged;
        continue;
      }
      ++active;
      row.active_mass += hi;
      reserved[i] += keep * hi;
      const vertex_t deg = g.out_degree(i);
      if (deg > 0) {
        const double w = c * hi / deg;
        const auto targets = live_only ? pg->live_targets(i) : g.targets(i);
        for (vertex_t u : targets) {
          next[u] += w;
          if (g.is_dangling(u)) ++row.push_ops_dangling;
        }
        row.push_ops += targets.size();
        row.work += deg + 1;
        onward += hi * static_cast<double>(targets.size()) / deg;
      } else if (variant == SimVariant::FPFull) {
        spread += c * hi;
        onward += hi;
        row.push_ops += n;
        row.push_ops_dangling += dangling_count;
        row.work += static_cast<std::uint64_t>(n) + 1;
      } else {
        row.work += 1;
      }
    }
    if (spread > 0.0)
      for (vertex_t j = 0; j < n; ++j) next[j] += spread * p[j];
    row.alpha = row.active_mass > 0.0 ? onward / row.active_mass : 0.0;
    row.wall_ms = elapsed_ms(start);
    trace.push_ops_total += row.push_ops;
    trace.push_ops_dangling += row.push_ops_dangling;
    trace.vertex_pushes += active;
    trace.rows.push_back(row);
    if (active == 0) break;
    // IFP2 keeps the untouched dangling entries of h.
    if (live_only)
      for (vertex_t i = 0; i < n; ++i)
        if (g.is_dangling(i)) next[i] = h[i];
    h.swap(next);
    if (observe) observe(t, reserved, h);
  }
  trace.iterations = trace.rows.size();

  PageRankVector out;
  out.values.resize(n);
  out.meta.algorithm = "sync-" + std::string(to_string(variant));
  out.meta.c = c;
  out.meta.xi = xi;
  out.meta.iterations = trace.iterations;

  if (variant == SimVariant::IFP2) {
    const auto dangling = pg->dangling_vertices();
    TraceRow row;
    row.t = trace.rows.size();
    for (std::size_t s = 0; s < dangling.size(); ++s) {
      const vertex_t v = dangling[s];
      double acc = h[v];
      row.h_l1 += h[v];
      const auto sources = pg->dangling_sources_at(s);
      for (vertex_t u : sources) acc += c * reserved[u] / g.out_degree(u);
      reserved[v] = acc;
      h[v] = 0.0;
      row.push_ops += sources.size();
      row.work += sources.size() + 1;
    }
    row.push_ops_dangling = row.push_ops;
    row.active_mass = row.h_l1;
    row.alpha = 0.0;
    row.converged = n - dangling.size();
    row.wall_ms = elapsed_ms(start);
    trace.push_ops_total += row.push_ops;
    trace.push_ops_dangling += row.push_ops_dangling;
    trace.rows.push_back(row);
    if (observe) observe(row.t, reserved, h);
    for (vertex_t v = 0; v < n; ++v) {
      out.values[v] = reserved[v];
      out.meta.residual_total += h[v];
    }
  } else if (variant == SimVariant::IFP1) {
    for (vertex_t v = 0; v < n; ++v) {
      out.values[v] = reserved[v] + h[v];
      out.meta.residual_total += h[v];
    }
  } else {
    for (vertex_t v = 0; v < n; ++v) {
      out.values[v] = reserved[v];
      out.meta.residual_total += h[v];
    }
  }
  out.meta.raw_total = out.sum();
  out.normalize();
  trace.wall_ms = elapsed_ms(start);
  return {std::move(out), std::move(trace)};
}

}  // namespace detail

// Iteration-synchronous reference execution of the push engines. Trace rows
// satisfy h_l1(t+1) = c * alpha(t) * active_mass(t) + carry_mass(t) up to
// rounding (IFP1 and FPFull; IFP2 rows cover phase 1 plus one phase-2 row).
inline std::pair<PageRankVector, RunTrace> sync_simulate(const Graph& g, const SolverConfig& cfg,
                                                        SimVariant variant, const SimObserver& observe = {}) {
  if (variant == SimVariant::IFP2) {
    const auto cls = classify(g);
    const IFP2Graph pg(g, cls);
    return detail::simulate(g, &pg, cfg, variant, observe);
  }
  return detail::simulate(g, nullptr, cfg, variant, observe);
}

inline std::pair<PageRankVector, RunTrace> sync_simulate(const IFP2Graph& pg, const SolverConfig& cfg,
                                                        const SimObserver& observe = {}) {
  return detail::simulate(pg.base(), &pg, cfg, SimVariant::IFP2, observe);
}

}  // namespace pushrank
