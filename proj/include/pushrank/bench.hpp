#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pushrank/graph.hpp"
#include "pushrank/ifp.hpp"
#include "pushrank/io.hpp"
#include "pushrank/metrics.hpp"
#include "pushrank/pagerank.hpp"
#include "pushrank/partition.hpp"
#include "pushrank/reference.hpp"
#include "pushrank/sync_sim.hpp"

namespace pushrank {

// spi/mpi: serial and parallel power method. fp: Forward Push spreading
// dangling mass along p. sync_sim: the synchronous simulator.
enum class Algorithm { spi, mpi, fp, ifp1, ifp2, sync_sim };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::spi: return "spi";
    case Algorithm::mpi: return "mpi";
    case Algorithm::fp: return "fp";
    case Algorithm::ifp1: return "ifp1";
    case Algorithm::ifp2: return "ifp2";
    case Algorithm::sync_sim: return "sync-sim";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::spi, Algorithm::mpi, Algorithm::fp, Algorithm::ifp1, Algorithm::ifp2, Algorithm::sync_sim})
    if (s == to_string(a)) return a;
  throw ConfigError("unknown algorithm '" + std::string(s) + "'");
}

inline bool is_push_algorithm(Algorithm a) { return a != Algorithm::spi && a != Algorithm::mpi; }

struct Dataset {
  std::string name;
  Graph graph;
  VertexClassification cls;

  static Dataset from_graph(std::string name, Graph g) {
    Dataset d{std::move(name), std::move(g), {}};
    d.cls = classify(d.graph);
    return d;
  }
};

struct RunRequest {
  Algorithm algorithm = Algorithm::ifp2;
  SolverConfig cfg;
  std::size_t workers = 1;
  PartitionStrategy strategy = PartitionStrategy::degree_balanced;
  SimVariant variant = SimVariant::IFP1;
  bool record_trace = true;
};

struct RunResult {
  PageRankVector pr;
  RunTrace trace;
  double wall_ms = 0.0;           // computation only
  double preprocessing_ms = 0.0;  // partitioning, and edge invalidation for ifp2
};

inline RunResult run_algorithm(const Dataset& ds, const RunRequest& req) {
  RunResult r;
  EngineOptions opt;
  opt.workers = req.workers;
  opt.strategy = req.strategy;
  opt.record_trace = req.record_trace;
  switch (req.algorithm) {
    case Algorithm::spi:
    case Algorithm::mpi: {
      auto [pr, trace] = power_method(ds.graph, req.cfg, req.algorithm == Algorithm::spi ? 1 : req.workers);
      r.pr = std::move(pr);
      r.trace = std::move(trace);
      break;
    }
    case Algorithm::fp: {
      const auto start = std::chrono::steady_clock::now();
      r.pr = forward_push_ppr(ds.graph, req.cfg, DanglingMode::redistribute);
      r.pr.normalize();
      r.trace.wall_ms = detail::elapsed_ms(start);
      r.trace.iterations = r.pr.meta.iterations;
      break;
    }
    case Algorithm::ifp1: {
      auto [pr, trace] = ifp1_run(ds.graph, ds.cls, req.cfg, opt);
      r.pr = std::move(pr);
      r.trace = std::move(trace);
      break;
    }
    case Algorithm::ifp2: {
      const auto start = std::chrono::steady_clock::now();
      const IFP2Graph pg(ds.graph, ds.cls);
      const double invalidate_ms = detail::elapsed_ms(start);
      auto [pr, trace] = ifp2_run(pg, req.cfg, opt);
      r.pr = std::move(pr);
      r.trace = std::move(trace);
      r.trace.preprocessing_ms += invalidate_ms;
      r.trace.wall_ms += invalidate_ms;
      break;
    }
    case Algorithm::sync_sim: {
      auto [pr, trace] = sync_simulate(ds.graph, req.cfg, req.variant);
      r.pr = std::move(pr);
      r.trace = std::move(trace);
      break;
    }
  }
  r.preprocessing_ms = r.trace.preprocessing_ms;
  r.wall_ms = std::max(0.0, r.trace.wall_ms - r.trace.preprocessing_ms);
  return r;
}

// Runs `repetitions` times; wall and preprocessing times are medians, the
// vector comes from the last run.
inline RunResult run_timed(const Dataset& ds, const RunRequest& req, std::size_t repetitions = 3) {
  std::vector<double> walls, preps;
  RunResult last;
  for (std::size_t i = 0; i < std::max<std::size_t>(repetitions, 1); ++i) {
    last = run_algorithm(ds, req);
    walls.push_back(last.wall_ms);
    preps.push_back(last.preprocessing_ms);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  last.wall_ms = median(walls);
  last.preprocessing_ms = median(preps);
  return last;
}

inline std::size_t hardware_threads() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// The ERR reference: power method at exactly 210 iterations, K = 1. With a
// cache directory the vector is stored as a binary file keyed by the graph
// content hash, c and the iteration count.
inline PageRankVector reference_vector(const Dataset& ds, double c, const std::filesystem::path& cache_dir = {}) {
  SolverConfig cfg;
  cfg.c = c;
  cfg.max_iterations = kReferenceIterations;
  std::filesystem::path file;
  if (!cache_dir.empty()) {
    char name[96];
    std::snprintf(name, sizeof name, "ref-%016llx-c%.6g-%zu.bin",
                  static_cast<unsigned long long>(ds.graph.content_hash()), c, kReferenceIterations);
    file = cache_dir / name;
    std::ifstream in(file, std::ios::binary);
    if (in) {
      PageRankVector pr;
      pr.values = read_vector_binary(in);
      if (pr.values.size() == ds.graph.num_vertices()) {
        pr.meta.algorithm = "spi";
        pr.meta.c = c;
        pr.meta.iterations = kReferenceIterations;
        return pr;
      }
    }
  }
  auto [pr, trace] = power_method(ds.graph, cfg, 1);
  if (!file.empty()) {
    std::filesystem::create_directories(cache_dir);
    std::ofstream out(file, std::ios::binary);
    write_vector_binary(out, pr.values);
  }
  return pr;
}

struct SweepRow {
  std::string dataset;
  std::string algorithm;
  double xi = 0.0;
  std::size_t threads = 1;
  double err = 0.0;
  double wall_ms = 0.0;
  double preprocessing_ms = 0.0;
  std::size_t iterations = 0;
  bool oversubscribed = false;
};

struct SweepOptions {
  std::size_t repetitions = 3;
  PartitionStrategy strategy = PartitionStrategy::degree_balanced;
  double c = kDefaultDamping;
  SimVariant variant = SimVariant::IFP1;
};

inline SweepRow make_row(const Dataset& ds, Algorithm algo, double xi, std::size_t K, const RunResult& r,
                         const PageRankVector& ref) {
  SweepRow row;
  row.dataset = ds.name;
  row.algorithm = std::string(to_string(algo));
  row.xi = xi;
  row.threads = K;
  row.err = max_relative_error(r.pr, ref).max_relative_error;
  row.wall_ms = r.wall_ms;
  row.preprocessing_ms = r.preprocessing_ms;
  row.iterations = r.trace.iterations;
  row.oversubscribed = K > hardware_threads();
  return row;
}

// One row per (algorithm, xi), in the order given.
inline std::vector<SweepRow> sweep_xi(const Dataset& ds, std::span<const Algorithm> algorithms,
                                      std::span<const double> xis, std::size_t K, const PageRankVector& reference,
                                      const SweepOptions& opt = {}) {
  std::vector<SweepRow> rows;
  for (Algorithm a : algorithms) {
    if (!is_push_algorithm(a))
      throw ConfigError("xi sweep needs a push algorithm, got '" + std::string(to_string(a)) + "'");
    for (double xi : xis) {
      RunRequest req;
      req.algorithm = a;
      req.cfg.c = opt.c;
      req.cfg.xi = xi;
      req.workers = K;
      req.strategy = opt.strategy;
      req.variant = opt.variant;
      req.record_trace = false;
      rows.push_back(make_row(ds, a, xi, K, run_timed(ds, req, opt.repetitions), reference));
    }
  }
  return rows;
}

inline std::vector<SweepRow> sweep_parallelism(const Dataset& ds, Algorithm algorithm, std::span<const std::size_t> Ks,
                                               double xi, const PageRankVector& reference,
                                               const SweepOptions& opt = {}) {
  std::vector<SweepRow> rows;
  for (std::size_t K : Ks) {
    RunRequest req;
    req.algorithm = algorithm;
    req.cfg.c = opt.c;
    req.cfg.xi = xi;
    req.workers = K;
    req.strategy = opt.strategy;
    req.variant = opt.variant;
    req.record_trace = false;
    rows.push_back(make_row(ds, algorithm, xi, K, run_timed(ds, req, opt.repetitions), reference));
  }
  return rows;
}

struct ComparisonRow {
  std::string dataset;
  std::string algorithm;
  std::size_t threads = 1;
  double target_err = 0.0;
  double err = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = std::numeric_limits<double>::quiet_NaN();
  double preprocessing_ms = 0.0;
  std::string setting;  // "iterations=N" or "xi=X"
  bool qualified = false;
};

struct CompareOptions {
  std::size_t repetitions = 3;
  PartitionStrategy strategy = PartitionStrategy::degree_balanced;
  double c = kDefaultDamping;
  std::size_t max_power_iterations = 1000;
  std::vector<double> xi_ladder = {1.0,  1e-1, 1e-2,  1e-3,  1e-4,  1e-5,  1e-6, 1e-7,
                                   1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14, 1e-15};
};

// For SPI, MPI, IFP1 and IFP2: the cheapest setting that reaches
// ERR < target, timed as a median of repetitions. Power methods use the
// smallest iteration count; push engines the largest xi on the ladder.
inline std::vector<ComparisonRow> compare_algorithms(const Dataset& ds, double target_err, std::size_t K,
                                                     const PageRankVector& reference,
                                                     const CompareOptions& opt = {}) {
  std::vector<ComparisonRow> rows;
  for (Algorithm a : {Algorithm::spi, Algorithm::mpi, Algorithm::ifp1, Algorithm::ifp2}) {
    ComparisonRow row;
    row.dataset = ds.name;
    row.algorithm = std::string(to_string(a));
    row.threads = a == Algorithm::spi ? 1 : K;
    row.target_err = target_err;
    RunRequest req;
    req.algorithm = a;
    req.cfg.c = opt.c;
    req.workers = row.threads;
    req.strategy = opt.strategy;
    req.record_trace = false;

    std::optional<RunRequest> chosen;
    if (!is_push_algorithm(a)) {
      std::optional<std::size_t> found;
      SolverConfig probe = req.cfg;
      probe.max_iterations = opt.max_power_iterations;
      power_method(ds.graph, probe, 1, [&](std::size_t k, std::span<const double> x) {
        if (max_relative_error(x, reference.values).max_relative_error < target_err) {
          found = k;
          return true;
        }
        return false;
      });
      if (found) {
        req.cfg.max_iterations = *found;
        row.setting = "iterations=" + std::to_string(*found);
        chosen = req;
      }
    } else {
      for (double xi : opt.xi_ladder) {
        req.cfg.xi = xi;
        if (max_relative_error(run_algorithm(ds, req).pr, reference).max_relative_error < target_err) {
          row.setting = "xi=" + detail::format_double(xi);
          chosen = req;
          break;
        }
      }
    }
    if (chosen) {
      const RunResult r = run_timed(ds, *chosen, opt.repetitions);
      row.err = max_relative_error(r.pr, reference).max_relative_error;
      row.wall_ms = r.wall_ms;
      row.preprocessing_ms = r.preprocessing_ms;
      row.qualified = row.err < target_err;
    }
    rows.push_back(row);
  }
  return rows;
}

// T(ifp2) <= T(ifp1) < T(mpi) < T(spi) among the rows of one comparison.
inline bool ordering_holds(std::span<const ComparisonRow> rows) {
  auto time_of = [&](std::string_view algo) {
    for (const auto& r : rows)
      if (r.algorithm == algo && r.qualified) return r.wall_ms;
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double spi = time_of("spi"), mpi = time_of("mpi"), ifp1 = time_of("ifp1"), ifp2 = time_of("ifp2");
  return ifp2 <= ifp1 && ifp1 < mpi && mpi < spi;
}

inline void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "dataset,algorithm,xi,threads,err,wall_ms,preprocess_ms,iterations,oversubscribed\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.algorithm << ',' << detail::format_double(r.xi) << ',' << r.threads << ','
        << detail::format_double(r.err) << ',' << detail::format_double(r.wall_ms) << ','
        << detail::format_double(r.preprocessing_ms) << ',' << r.iterations << ',' << (r.oversubscribed ? 1 : 0)
        << '\n';
  }
}

inline void write_compare_csv(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << "dataset,algorithm,threads,target_err,err,wall_ms,preprocess_ms,setting,qualified\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.algorithm << ',' << r.threads << ',' << detail::format_double(r.target_err) << ','
        << detail::format_double(r.err) << ',' << detail::format_double(r.wall_ms) << ','
        << detail::format_double(r.preprocessing_ms) << ',' << r.setting << ',' << (r.qualified ? 1 : 0) << '\n';
  }
}

}  // namespace pushrank
