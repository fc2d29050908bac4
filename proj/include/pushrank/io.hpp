#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pushrank/graph.hpp"
#include "pushrank/pagerank.hpp"
#include "pushrank/types.hpp"

namespace pushrank {

namespace detail {

// Shortest text that reads back to the same double.
inline std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

inline void put_u64_le(std::ostream& out, std::uint64_t x) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xffU);
  out.write(b.data(), 8);
}

inline std::uint64_t get_u64_le(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw ParseError(0, "truncated binary vector");
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return x;
}

}  // namespace detail

// "name,n,m,n_d,m_d,deg"
inline void write_stats_header(std::ostream& out) { out << "name,n,m,n_d,m_d,deg\n"; }

inline void write_stats_row(std::ostream& out, const std::string& name, const StatsRow& row) {
  out << name << ',' << row.n << ',' << row.m << ',' << row.n_d << ',' << row.m_d << ',' << std::fixed
      << std::setprecision(2) << row.deg << std::defaultfloat << '\n';
}

// "vertex_original_id,score", highest score first; ties by vertex id.
inline void write_ranking_csv(std::ostream& out, const Graph& g, const PageRankVector& pr) {
  std::vector<vertex_t> order(pr.size());
  std::iota(order.begin(), order.end(), vertex_t{0});
  std::stable_sort(order.begin(), order.end(), [&](vertex_t a, vertex_t b) { return pr[a] > pr[b]; });
  out << "vertex_original_id,score\n";
  for (vertex_t v : order) out << g.original_id(v) << ',' << detail::format_double(pr[v]) << '\n';
}

// Little-endian: u64 n, then n IEEE-754 doubles.
inline void write_vector_binary(std::ostream& out, std::span<const double> values) {
  detail::put_u64_le(out, values.size());
  for (double x : values) detail::put_u64_le(out, std::bit_cast<std::uint64_t>(x));
}

inline std::vector<double> read_vector_binary(std::istream& in) {
  const std::uint64_t n = detail::get_u64_le(in);
  std::vector<double> values;
  values.reserve(std::min<std::uint64_t>(n, 1u << 26));
  for (std::uint64_t i = 0; i < n; ++i) values.push_back(std::bit_cast<double>(detail::get_u64_le(in)));
  return values;
}

inline void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "t,h_l1,converged,alpha,work,push_ops,push_ops_dangling,wall_ms\n";
  for (const auto& r : trace.rows) {
    out << r.t << ',' << detail::format_double(r.h_l1) << ',' << r.converged << ',' << detail::format_double(r.alpha)
        << ',' << r.work << ',' << r.push_ops << ',' << r.push_ops_dangling << ',' << detail::format_double(r.wall_ms)
        << '\n';
  }
}

}  // namespace pushrank
