#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "pushrank/pagerank.hpp"
#include "pushrank/types.hpp"

namespace pushrank {

struct ErrorReport {
  double max_relative_error = 0.0;  // ERR
  double l1_error = 0.0;
  std::size_t worst_vertex = 0;
  std::string reference;
};

// ERR = max_i |est_i - ref_i| / ref_i over every vertex.
inline ErrorReport max_relative_error(std::span<const double> est, std::span<const double> ref) {
  if (est.size() != ref.size())
    throw ConfigError("dimension mismatch: " + std::to_string(est.size()) + " vs " + std::to_string(ref.size()));
  ErrorReport r;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (!(ref[i] > 0.0)) throw ConfigError("reference entry " + std::to_string(i) + " is not positive");
    const double diff = std::abs(est[i] - ref[i]);
    r.l1_error += diff;
    const double rel = diff / ref[i];
    if (rel > r.max_relative_error || std::isnan(rel)) {
      r.max_relative_error = rel;
      r.worst_vertex = i;
    }
  }
  return r;
}

inline ErrorReport max_relative_error(const PageRankVector& est, const PageRankVector& ref) {
  auto r = max_relative_error(std::span<const double>(est.values), std::span<const double>(ref.values));
  r.reference = ref.meta.algorithm;
  return r;
}

// Largest componentwise absolute difference.
inline double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Least-squares slope of log(y) against log(x).
inline double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("log-log fit needs two or more paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace pushrank
