#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pushrank/bench.hpp"
#include "pushrank/graph.hpp"
#include "pushrank/io.hpp"
#include "pushrank/synth.hpp"

namespace pushrank::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kRuntime = 3 };

struct CliConfig {
  std::string command;
  std::string data;
  std::string algorithm = "ifp2";
  double c = kDefaultDamping;
  double xi = 1e-10;
  std::size_t threads = hardware_threads();
  std::string out = ".";
  std::uint64_t seed = 1;
  std::string strategy = "degree-balanced";
};

namespace detail {

inline std::size_t default_threads() {
  if (const char* env = std::getenv("PUSHRANK_THREADS")) {
    try {
      const long k = std::stol(env);
      if (k >= 1) return static_cast<std::size_t>(k);
    } catch (...) {
    }
  }
  return hardware_threads();
}

inline Dataset load_dataset(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("dataset not found: " + path);
  return Dataset::from_graph(std::filesystem::path(path).stem().string(), load_edge_list(path));
}

inline std::ofstream open_out(const std::filesystem::path& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / file);
  if (!out) throw Error("cannot write " + (dir / file).string());
  return out;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel PageRank via improved Forward Push"};
  app.require_subcommand(1);
  CliConfig cfg;
  cfg.threads = detail::default_threads();

  auto add_common = [&](CLI::App* sub, bool needs_data) {
    auto* data = sub->add_option("--data", cfg.data, "edge-list file (SNAP format)");
    if (needs_data) data->required();
    sub->add_option("--c", cfg.c, "damping factor")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    sub->add_option("--xi", cfg.xi, "push threshold")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker count (env PUSHRANK_THREADS)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
    sub->add_option("--strategy", cfg.strategy, "contiguous | strided | degree-balanced")
        ->check(CLI::IsMember({"contiguous", "strided", "degree-balanced"}))
        ->capture_default_str();
  };

  auto* info = app.add_subcommand("info", "graph statistics (stats.csv)");
  add_common(info, true);

  auto* run = app.add_subcommand("run", "compute PageRank; writes ranking.csv and trace.csv");
  add_common(run, true);
  run->add_option("--algo", cfg.algorithm, "spi | mpi | fp | ifp1 | ifp2 | sync-sim")->capture_default_str();
  std::size_t iterations = kReferenceIterations;
  std::string variant = "ifp1";
  run->add_option("--iterations", iterations, "power-method iterations")->capture_default_str();
  run->add_option("--variant", variant, "sync-sim variant: ifp1 | ifp2 | fp-full")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "xi or parallelism sweep; writes sweeps.csv");
  add_common(sweep, true);
  std::vector<std::string> algos = {"ifp1", "ifp2"};
  std::vector<double> xis = {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12};
  std::vector<std::size_t> thread_list = {1, 2, 4, 8};
  std::string kind = "xi";
  std::size_t reps = 3;
  sweep->add_option("--algos", algos, "algorithms")->delimiter(',')->capture_default_str();
  sweep->add_option("--xis", xis, "thresholds")->delimiter(',')->capture_default_str();
  sweep->add_option("--thread-list", thread_list, "worker counts for --kind parallelism")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--kind", kind, "xi | parallelism")->check(CLI::IsMember({"xi", "parallelism"}));
  sweep->add_option("--reps", reps, "timed repetitions (median)")->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "time to reach a target ERR; writes compare.csv");
  add_common(compare, true);
  double target_err = 1e-3;
  compare->add_option("--target-err", target_err, "ERR target")->check(CLI::PositiveNumber)->capture_default_str();
  compare->add_option("--reps", reps, "timed repetitions (median)")->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "write a seeded random edge list");
  SynthParams sp;
  std::string synth_out = "synth.txt";
  synth->add_option("--n", sp.n, "vertices")->required();
  synth->add_option("--m", sp.m, "edges")->required();
  synth->add_option("--dangling", sp.dangling_fraction, "dangling fraction")->capture_default_str();
  synth->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  synth->add_flag("--connected", sp.connected, "force weak connectivity");
  synth->add_option("--out", synth_out, "output file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    SolverConfig solver;
    solver.c = cfg.c;
    solver.xi = cfg.xi;
    const auto strategy = parse_partition_strategy(cfg.strategy);

    if (info->parsed()) {
      cfg.command = "info";
      const Dataset ds = detail::load_dataset(cfg.data);
      const StatsRow row = stats(ds.graph, ds.cls);
      const LoadInfo& li = ds.graph.load_info();
      out << std::left << std::setw(20) << "dataset" << ds.name << '\n'
          << std::setw(20) << "n" << row.n << '\n'
          << std::setw(20) << "m" << row.m << '\n'
          << std::setw(20) << "n_d" << row.n_d << '\n'
          << std::setw(20) << "m_d" << row.m_d << '\n'
          << std::setw(20) << "deg" << std::fixed << std::setprecision(2) << row.deg << std::defaultfloat << '\n'
          << std::setw(20) << "raw edge lines" << li.raw_edges << '\n'
          << std::setw(20) << "duplicates dropped" << li.duplicates << '\n'
          << std::setw(20) << "self-loops kept" << li.self_loops << '\n'
          << std::setw(20) << "unreferenced" << ds.cls.unreferenced.size() << '\n'
          << std::setw(20) << "weak dangling" << ds.cls.weak_dangling.size() << '\n'
          << std::setw(20) << "weak unreferenced" << ds.cls.weak_unreferenced.size() << '\n';
      auto csv = detail::open_out(cfg.out, "stats.csv");
      write_stats_header(csv);
      write_stats_row(csv, ds.name, row);
      return kOk;
    }

    if (run->parsed()) {
      cfg.command = "run";
      RunRequest req;
      req.algorithm = parse_algorithm(cfg.algorithm);
      req.cfg = solver;
      req.cfg.max_iterations = iterations;
      req.workers = cfg.threads;
      req.strategy = strategy;
      req.variant = parse_sim_variant(variant);
      const Dataset ds = detail::load_dataset(cfg.data);
      const RunResult r = run_algorithm(ds, req);
      auto ranking = detail::open_out(cfg.out, "ranking.csv");
      write_ranking_csv(ranking, ds.graph, r.pr);
      auto trace = detail::open_out(cfg.out, "trace.csv");
      write_trace_csv(trace, r.trace);
      out << cfg.algorithm << ": n=" << ds.graph.num_vertices() << " threads=" << cfg.threads
          << " iterations=" << r.trace.iterations << " push_ops=" << r.trace.push_ops_total
          << " wall_ms=" << r.wall_ms << " preprocess_ms=" << r.preprocessing_ms << '\n';
      return kOk;
    }

    if (sweep->parsed()) {
      cfg.command = "sweep";
      std::vector<Algorithm> parsed;
      for (const auto& a : algos) parsed.push_back(parse_algorithm(a));
      const Dataset ds = detail::load_dataset(cfg.data);
      const auto ref = reference_vector(ds, cfg.c, std::filesystem::path(cfg.out) / "cache");
      SweepOptions so;
      so.repetitions = reps;
      so.strategy = strategy;
      so.c = cfg.c;
      std::vector<SweepRow> rows;
      if (kind == "xi") {
        rows = sweep_xi(ds, parsed, xis, cfg.threads, ref, so);
      } else {
        for (Algorithm a : parsed) {
          auto part = sweep_parallelism(ds, a, thread_list, cfg.xi, ref, so);
          rows.insert(rows.end(), part.begin(), part.end());
        }
      }
      auto csv = detail::open_out(cfg.out, "sweeps.csv");
      write_sweep_csv(csv, rows);
      write_sweep_csv(out, rows);
      return kOk;
    }

    if (compare->parsed()) {
      cfg.command = "compare";
      const Dataset ds = detail::load_dataset(cfg.data);
      const auto ref = reference_vector(ds, cfg.c, std::filesystem::path(cfg.out) / "cache");
      CompareOptions co;
      co.repetitions = reps;
      co.strategy = strategy;
      co.c = cfg.c;
      const auto rows = compare_algorithms(ds, target_err, cfg.threads, ref, co);
      auto csv = detail::open_out(cfg.out, "compare.csv");
      write_compare_csv(csv, rows);
      write_compare_csv(out, rows);
      out << "ordering ifp2 <= ifp1 < mpi < spi: " << (ordering_holds(rows) ? "holds" : "does not hold") << '\n';
      return kOk;
    }

    if (synth->parsed()) {
      cfg.command = "synth";
      sp.seed = cfg.seed;
      const auto edges = synth_edges(sp);
      const auto parent = std::filesystem::path(synth_out).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      std::ofstream file(synth_out);
      if (!file) throw Error("cannot write " + synth_out);
      write_edge_list(file, edges,
                      "synthetic n=" + std::to_string(sp.n) + " m=" + std::to_string(sp.m) +
                          " dangling=" + pushrank::detail::format_double(sp.dangling_fraction) +
                          " seed=" + std::to_string(sp.seed));
      out << "wrote " << edges.size() << " edges to " << synth_out << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace pushrank::cli
