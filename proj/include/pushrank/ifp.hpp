#pragma once

#include <atomic>
#include <barrier>
#include <chrono>
#include <memory>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "pushrank/graph.hpp"
#include "pushrank/pagerank.hpp"
#include "pushrank/partition.hpp"
#include "pushrank/reference.hpp"
#include "pushrank/types.hpp"

namespace pushrank {

struct EngineOptions {
  std::size_t workers = 1;
  PartitionStrategy strategy = PartitionStrategy::degree_balanced;
  // Minimum spacing of trace samples taken by the monitor.
  std::chrono::microseconds sample_interval{5000};
  bool record_trace = true;
};

// Per-vertex <reserved, pending> mass. Pending entries take concurrent
// fetch_add from any worker; reserved entries are written by one owner.
class MassState {
 public:
  explicit MassState(std::span<const double> initial_pending)
      : n_(initial_pending.size()),
        reserved_(n_, 0.0),
        pending_(std::make_unique<std::atomic<double>[]>(n_)) {
    for (std::size_t i = 0; i < n_; ++i) pending_[i].store(initial_pending[i], std::memory_order_relaxed);
  }

  std::size_t size() const noexcept { return n_; }

  double& reserved(vertex_t v) { return reserved_[v]; }
  double reserved(vertex_t v) const { return reserved_[v]; }
  std::atomic<double>& pending(vertex_t v) { return pending_[v]; }
  double pending_value(vertex_t v) const { return pending_[v].load(); }

 private:
  std::size_t n_;
  std::vector<double> reserved_;
  std::unique_ptr<std::atomic<double>[]> pending_;
};

namespace detail {

struct alignas(64) WorkerSlot {
  // Pushes begun / finished. A push bumps `started` before it takes h_i and
  // bumps `completed` after its last increment lands.
  std::atomic<std::uint64_t> started{0};
  std::atomic<std::uint64_t> completed{0};
  std::atomic<std::uint64_t> edge_pushes{0};
  std::atomic<std::uint64_t> dangling_pushes{0};
  std::atomic<std::uint64_t> work{0};
  std::atomic<std::uint64_t> vertex_pushes{0};
  std::atomic<bool> idle_pass{false};
};

// Pending mass scaled so that uniform p gives h_i = 1.
inline std::vector<double> initial_pending(vertex_t n, const SolverConfig& cfg) {
  auto p = cfg.restart(n);
  for (double& x : p) x *= n;
  return p;
}

inline std::vector<vertex_t> dangling_target_counts(const Graph& g) {
  std::vector<vertex_t> out(g.num_vertices(), 0);
  for (vertex_t v = 0; v < g.num_vertices(); ++v)
    for (vertex_t u : g.targets(v)) out[v] += g.is_dangling(u) ? 1 : 0;
  return out;
}

// Runs the push phase on K workers until the monitor (the calling thread)
// certifies that no vertex of `universe` holds more than xi, then lets each
// worker run `finish(k)` once after a barrier.
//
// Termination: the monitor sums `completed` over workers, scans the
// universe, then sums `started`. Equal sums mean no push was in flight or
// began during the scan, so the scan saw a frozen state; if that state has
// every h_i <= xi, no push can ever fire again.
template <class TargetsFn, class FinishFn>
void run_push_phase(const Graph& g, MassState& state, const Partition& part, std::span<const vertex_t> universe,
                    TargetsFn targets_of, std::span<const vertex_t> dangling_targets, const SolverConfig& cfg,
                    const EngineOptions& opt, RunTrace& trace, std::chrono::steady_clock::time_point start,
                    FinishFn finish) {
  const std::size_t K = part.workers();
  const double c = cfg.c;
  const double xi = cfg.xi;
  auto slots = std::make_unique<WorkerSlot[]>(K);
  std::atomic<bool> stop{false};
  std::barrier phase_end(static_cast<std::ptrdiff_t>(K));

  auto worker = [&](std::size_t k) {
    WorkerSlot& slot = slots[k];
    const auto& mine = part.sets[k];
    std::uint64_t edges = 0, dangling = 0, work = 0, vertices = 0;
    while (!stop.load(std::memory_order_acquire)) {
      bool pushed = false;
      for (vertex_t v : mine) {
        std::atomic<double>& hv_slot = state.pending(v);
        if (!(hv_slot.load(std::memory_order_relaxed) > xi)) continue;
        slot.started.fetch_add(1);
        const double hv = hv_slot.exchange(0.0);
        state.reserved(v) += hv;
        const auto targets = targets_of(v);
        const double w = c * hv / g.out_degree(v);
        for (vertex_t u : targets) state.pending(u).fetch_add(w, std::memory_order_relaxed);
        slot.completed.fetch_add(1);
        pushed = true;
        edges += targets.size();
        dangling += dangling_targets.empty() ? 0 : dangling_targets[v];
        work += targets.size() + 1;
        ++vertices;
      }
      slot.edge_pushes.store(edges, std::memory_order_relaxed);
      slot.dangling_pushes.store(dangling, std::memory_order_relaxed);
      slot.work.store(work, std::memory_order_relaxed);
      slot.vertex_pushes.store(vertices, std::memory_order_relaxed);
      slot.idle_pass.store(!pushed, std::memory_order_release);
      if (!pushed) std::this_thread::yield();
    }
    phase_end.arrive_and_wait();
    finish(k);
  };

  auto sample = [&](std::size_t t) {
    TraceRow row;
    row.t = t;
    double nd_mass = 0.0;
    for (vertex_t v = 0; v < g.num_vertices(); ++v) {
      const double h = state.pending(v).load(std::memory_order_relaxed);
      row.h_l1 += h;
      if (!g.is_dangling(v)) nd_mass += h;
    }
    for (vertex_t v : universe)
      if (!(state.pending(v).load(std::memory_order_relaxed) > xi)) ++row.converged;
    row.alpha = row.h_l1 > 0.0 ? nd_mass / row.h_l1 : 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      row.work += slots[k].work.load(std::memory_order_relaxed);
      row.push_ops += slots[k].edge_pushes.load(std::memory_order_relaxed);
      row.push_ops_dangling += slots[k].dangling_pushes.load(std::memory_order_relaxed);
    }
    row.wall_ms = elapsed_ms(start);
    trace.rows.push_back(row);
  };

  {
    std::vector<std::jthread> pool;
    pool.reserve(K);
    for (std::size_t k = 0; k < K; ++k) pool.emplace_back(worker, k);

    auto last_sample = std::chrono::steady_clock::now();
    std::size_t samples = 0;
    if (opt.record_trace) sample(samples++);
    while (true) {
      std::this_thread::sleep_for(std::chrono::microseconds(20));
      if (opt.record_trace && std::chrono::steady_clock::now() - last_sample >= opt.sample_interval) {
        sample(samples++);
        last_sample = std::chrono::steady_clock::now();
      }
      bool all_idle = true;
      for (std::size_t k = 0; k < K && all_idle; ++k) all_idle = slots[k].idle_pass.load(std::memory_order_acquire);
      if (!all_idle) continue;

      std::uint64_t completed = 0, started = 0;
      for (std::size_t k = 0; k < K; ++k) completed += slots[k].completed.load();
      bool quiet = true;
      for (vertex_t v : universe) {
        if (state.pending(v).load() > xi) {
          quiet = false;
          break;
        }
      }
      for (std::size_t k = 0; k < K; ++k) started += slots[k].started.load();
      if (quiet && started == completed) break;
    }
    stop.store(true, std::memory_order_release);
    if (opt.record_trace) sample(samples);
  }

  for (std::size_t k = 0; k < K; ++k) {
    trace.push_ops_total += slots[k].edge_pushes.load();
    trace.push_ops_dangling += slots[k].dangling_pushes.load();
    trace.vertex_pushes += slots[k].vertex_pushes.load();
  }
  trace.iterations = trace.rows.size();
}

inline void check_engine(const Graph& g, const SolverConfig& cfg, const EngineOptions& opt) {
  cfg.validate(g.num_vertices());
  if (opt.workers < 1) throw ConfigError("worker count must be at least 1");
}

}  // namespace detail

// Concurrent IFP1: K workers circularly scan their non-dangling vertices,
// reserve all of h_i and push c*h_i/deg(v_i) to every target, dangling
// targets included. Result: (reserved + pending) normalized.
inline std::pair<PageRankVector, RunTrace> ifp1_run(const Graph& g, const VertexClassification& cls,
                                                   const SolverConfig& cfg, const EngineOptions& opt) {
  detail::check_engine(g, cfg, opt);
  const auto start = std::chrono::steady_clock::now();
  const vertex_t n = g.num_vertices();
  RunTrace trace;

  std::vector<vertex_t> universe;
  universe.reserve(n - cls.dangling.size());
  for (vertex_t v = 0; v < n; ++v)
    if (!g.is_dangling(v)) universe.push_back(v);
  const Partition part = partition_vertices(g, universe, opt.workers, opt.strategy);
  const auto dangling_targets = detail::dangling_target_counts(g);
  trace.preprocessing_ms = detail::elapsed_ms(start);

  MassState state(detail::initial_pending(n, cfg));
  detail::run_push_phase(
      g, state, part, universe, [&g](vertex_t v) { return g.targets(v); }, dangling_targets, cfg, opt, trace, start,
      [](std::size_t) {});

  PageRankVector out;
  out.values.resize(n);
  for (vertex_t v = 0; v < n; ++v) {
    const double h = state.pending_value(v);
    out.values[v] = state.reserved(v) + h;
    if (!g.is_dangling(v)) out.meta.residual_total += h;
  }
  out.meta.algorithm = "ifp1";
  out.meta.c = cfg.c;
  out.meta.xi = cfg.xi;
  out.meta.iterations = trace.iterations;
  out.meta.raw_total = out.sum();
  out.normalize();
  trace.wall_ms = detail::elapsed_ms(start);
  return {std::move(out), std::move(trace)};
}

// Concurrent IFP2. Phase 1 is IFP1 restricted to live (non-dangling)
// targets, still weighting pushes by the original out-degree. Once the
// monitor certifies phase 1, every worker passes a barrier and fills its
// share of dangling vertices once: reserved(v) = h_v + sum_{u in S(v)}
// c*reserved(u)/deg(u). Result: reserved normalized; sub-threshold pending
// mass on non-dangling vertices is dropped.
inline std::pair<PageRankVector, RunTrace> ifp2_run(const IFP2Graph& pg, const SolverConfig& cfg,
                                                   const EngineOptions& opt) {
  const Graph& g = pg.base();
  detail::check_engine(g, cfg, opt);
  const auto start = std::chrono::steady_clock::now();
  const vertex_t n = g.num_vertices();
  RunTrace trace;

  const auto universe = non_dangling_vertices(g);
  const Partition part = partition_vertices(g, universe, opt.workers, opt.strategy);
  const auto dangling = pg.dangling_vertices();
  std::vector<double> slot_weight(dangling.size());
  for (std::size_t s = 0; s < dangling.size(); ++s) slot_weight[s] = pg.dangling_sources_at(s).size() + 1.0;
  const auto dangling_cuts = detail::balanced_cuts(slot_weight, opt.workers);
  trace.preprocessing_ms = detail::elapsed_ms(start);

  MassState state(detail::initial_pending(n, cfg));
  std::vector<std::uint64_t> phase2_edges(opt.workers, 0);
  const double c = cfg.c;

  auto phase2 = [&](std::size_t k) {
    std::uint64_t edges = 0;
    for (std::size_t s = dangling_cuts[k]; s < dangling_cuts[k + 1]; ++s) {
      const vertex_t v = dangling[s];
      double acc = state.pending(v).exchange(0.0);
      const auto sources = pg.dangling_sources_at(s);
      for (vertex_t u : sources) acc += c * state.reserved(u) / g.out_degree(u);
      state.reserved(v) = acc;
      edges += sources.size();
    }
    phase2_edges[k] = edges;
  };

  detail::run_push_phase(
      g, state, part, universe, [&pg](vertex_t v) { return pg.live_targets(v); }, {}, cfg, opt, trace, start,
      phase2);

  std::uint64_t dangling_edges = 0;
  for (auto e : phase2_edges) dangling_edges += e;
  trace.push_ops_total += dangling_edges;
  trace.push_ops_dangling += dangling_edges;
  if (opt.record_trace) {
    TraceRow row;
    row.t = trace.rows.size();
    row.push_ops = trace.push_ops_total;
    row.push_ops_dangling = trace.push_ops_dangling;
    row.work = (trace.rows.empty() ? 0 : trace.rows.back().work) + dangling_edges + dangling.size();
    row.converged = universe.size();
    row.wall_ms = detail::elapsed_ms(start);
    trace.rows.push_back(row);
    trace.iterations = trace.rows.size();
  }

  PageRankVector out;
  out.values.resize(n);
  for (vertex_t v = 0; v < n; ++v) {
    out.values[v] = state.reserved(v);
    out.meta.residual_total += state.pending_value(v);
  }
  out.meta.algorithm = "ifp2";
  out.meta.c = cfg.c;
  out.meta.xi = cfg.xi;
  out.meta.iterations = trace.iterations;
  out.meta.raw_total = out.sum();
  out.normalize();
  trace.wall_ms = detail::elapsed_ms(start);
  return {std::move(out), std::move(trace)};
}

}  // namespace pushrank
