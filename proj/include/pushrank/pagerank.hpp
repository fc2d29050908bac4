#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pushrank/types.hpp"

namespace pushrank {

inline constexpr double kDefaultDamping = 0.85;
inline constexpr std::size_t kReferenceIterations = 210;

struct SolverConfig {
  double c = kDefaultDamping;
  // Restart distribution p. Empty means uniform e/n.
  std::vector<double> personalization;
  double xi = 1e-10;
  std::size_t max_iterations = kReferenceIterations;
  // Power method only: stop early once the L1 change drops below this. 0 disables.
  double tolerance = 0.0;

  void validate(vertex_t n) const {
    if (!(c > 0.0 && c < 1.0)) throw ConfigError("damping factor c must lie in (0,1)");
    if (!(xi > 0.0)) throw ConfigError("push threshold xi must be positive");
    if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
    if (!personalization.empty()) {
      if (personalization.size() != n) throw ConfigError("personalization vector has wrong length");
      double sum = 0.0;
      for (double x : personalization) {
        if (!(x >= 0.0)) throw ConfigError("personalization entries must be non-negative");
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("personalization vector must sum to 1");
    }
  }

  // Materialized p.
  std::vector<double> restart(vertex_t n) const {
    if (!personalization.empty()) return personalization;
    return std::vector<double>(n, n == 0 ? 0.0 : 1.0 / n);
  }
};

struct PageRankMeta {
  std::string algorithm;
  double c = kDefaultDamping;
  double xi = 0.0;
  std::size_t iterations = 0;
  // Total mass before normalization, and the pending mass left behind.
  double raw_total = 0.0;
  double residual_total = 0.0;
};

struct PageRankVector {
  std::vector<double> values;
  PageRankMeta meta;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }

  double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

  void normalize() {
    double s = sum();
    if (s > 0.0)
      for (double& x : values) x /= s;
  }
};

// One row per synchronous iteration, or per monitor sample in the
// concurrent engines.
struct TraceRow {
  std::size_t t = 0;
  double h_l1 = 0.0;          // total pending mass at the start of the row
  std::size_t converged = 0;  // |V_U(t)|: vertices holding h <= xi
  double alpha = 0.0;         // share of active mass pushed onward
  std::uint64_t work = 0;     // m(t) = sum over active v of deg(v)+1
  std::uint64_t push_ops = 0;
  std::uint64_t push_ops_dangling = 0;
  double wall_ms = 0.0;
  // Synchronous runs only: mass above / at-or-below xi at the start of t.
  double active_mass = 0.0;
  double carry_mass = 0.0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::uint64_t push_ops_total = 0;     // edge pushes
  std::uint64_t push_ops_dangling = 0;  // edge pushes whose target is dangling
  std::uint64_t vertex_pushes = 0;
  std::size_t iterations = 0;
  double wall_ms = 0.0;
  double preprocessing_ms = 0.0;

  // beta(t) = m(t+1) / m(t) over consecutive rows.
  std::vector<double> work_ratios() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
      out.push_back(rows[i].work == 0 ? 0.0 : static_cast<double>(rows[i + 1].work) / rows[i].work);
    return out;
  }

  std::uint64_t total_work() const {
    std::uint64_t m = 0;
    for (const auto& r : rows) m += r.work;
    return m;
  }
};

}  // namespace pushrank
