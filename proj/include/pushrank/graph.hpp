#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pushrank/types.hpp"

namespace pushrank {

// Counts observed while loading, before cleaning.
struct LoadInfo {
  edge_t raw_edges = 0;    // edge lines read
  edge_t duplicates = 0;   // lines dropped as repeated (source, target) pairs
  edge_t self_loops = 0;   // kept, but counted
};

// Immutable directed graph in compressed out-adjacency form.
//
// Targets of each vertex are sorted ascending and unique. Self-loops are
// kept. Vertex ids are dense in [0, n); the id each vertex had in the input
// file is available through original_id().
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  // Builds a graph from an arbitrary edge list. Repeated edges are dropped.
  static Graph from_edges(vertex_t n, std::vector<Edge> edges) {
    Graph g;
    g.info_.raw_edges = edges.size();
    for (const Edge& e : edges) {
      if (e.source >= n || e.target >= n) throw ConfigError("edge endpoint out of range");
      if (e.source == e.target) ++g.info_.self_loops;
    }
    std::sort(edges.begin(), edges.end());
    auto last = std::unique(edges.begin(), edges.end());
    g.info_.duplicates = static_cast<edge_t>(std::distance(last, edges.end()));
    edges.erase(last, edges.end());
    // self_loops above counted repeats too; recount on the cleaned list.
    g.info_.self_loops = static_cast<edge_t>(
        std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.source == e.target; }));

    g.n_ = n;
    g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    g.degree_.assign(n, 0);
    g.targets_.resize(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      ++g.degree_[edges[k].source];
      g.targets_[k] = edges[k].target;
    }
    for (vertex_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + g.degree_[v];
    return g;
  }

  vertex_t num_vertices() const noexcept { return n_; }
  edge_t num_edges() const noexcept { return targets_.size(); }

  vertex_t out_degree(vertex_t v) const { return degree_[v]; }
  bool is_dangling(vertex_t v) const { return degree_[v] == 0; }

  std::span<const vertex_t> targets(vertex_t v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }

  std::span<const edge_t> offsets() const noexcept { return offsets_; }
  std::span<const vertex_t> all_targets() const noexcept { return targets_; }
  std::span<const vertex_t> degrees() const noexcept { return degree_; }

  std::uint64_t original_id(vertex_t v) const { return original_ids_.empty() ? v : original_ids_[v]; }
  void set_original_ids(std::vector<std::uint64_t> ids) {
    if (ids.size() != n_) throw ConfigError("original id table has wrong size");
    original_ids_ = std::move(ids);
  }

  const LoadInfo& load_info() const noexcept { return info_; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(targets_.size());
    for (vertex_t v = 0; v < n_; ++v)
      for (vertex_t u : targets(v)) out.push_back({v, u});
    return out;
  }

  // In-adjacency (transpose) in the same compressed layout.
  std::pair<std::vector<edge_t>, std::vector<vertex_t>> transpose() const {
    std::vector<edge_t> in_offsets(static_cast<std::size_t>(n_) + 1, 0);
    for (vertex_t u : targets_) ++in_offsets[u + 1];
    std::partial_sum(in_offsets.begin(), in_offsets.end(), in_offsets.begin());
    std::vector<vertex_t> sources(targets_.size());
    std::vector<edge_t> cursor(in_offsets.begin(), in_offsets.end() - 1);
    for (vertex_t v = 0; v < n_; ++v)
      for (vertex_t u : targets(v)) sources[cursor[u]++] = v;
    return {std::move(in_offsets), std::move(sources)};
  }

  std::vector<vertex_t> in_degrees() const {
    std::vector<vertex_t> indeg(n_, 0);
    for (vertex_t u : targets_) ++indeg[u];
    return indeg;
  }

  // FNV-1a over the adjacency arrays; stable across runs and platforms.
  std::uint64_t content_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t x) {
      for (int b = 0; b < 8; ++b) {
        h ^= (x >> (8 * b)) & 0xffU;
        h *= 1099511628211ULL;
      }
    };
    mix(n_);
    mix(targets_.size());
    for (edge_t o : offsets_) mix(o);
    for (vertex_t t : targets_) mix(t);
    return h;
  }

 private:
  vertex_t n_ = 0;
  std::vector<edge_t> offsets_;
  std::vector<vertex_t> targets_;
  std::vector<vertex_t> degree_;
  std::vector<std::uint64_t> original_ids_;
  LoadInfo info_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline bool parse_id(std::string_view& rest, std::uint64_t& out) {
  rest = trim(rest);
  if (rest.empty()) return false;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), out);
  if (ec != std::errc{}) return false;
  rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
  return rest.empty() || rest.front() == ' ' || rest.front() == '\t';
}

}  // namespace detail

// Reads a SNAP-style edge list: one "src dst" pair per line, '#' comments,
// blank lines ignored. Ids are remapped densely in order of first appearance.
inline Graph load_edge_list(std::istream& in) {
  std::unordered_map<std::uint64_t, vertex_t> remap;
  std::vector<std::uint64_t> original;
  std::vector<Edge> edges;
  auto id_of = [&](std::uint64_t raw) {
    auto [it, inserted] = remap.try_emplace(raw, static_cast<vertex_t>(original.size()));
    if (inserted) original.push_back(raw);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::uint64_t src = 0, dst = 0;
    if (!detail::parse_id(view, src) || !detail::parse_id(view, dst))
      throw ParseError(line_no, "expected two non-negative integer vertex ids");
    if (!detail::trim(view).empty()) throw ParseError(line_no, "unexpected trailing token");
    vertex_t s = id_of(src);
    vertex_t d = id_of(dst);
    edges.push_back({s, d});
  }
  if (in.bad()) throw Error("read error on edge-list stream");
  if (edges.empty()) throw ParseError(0, "edge list contains no edges");

  Graph g = Graph::from_edges(static_cast<vertex_t>(original.size()), std::move(edges));
  g.set_original_ids(std::move(original));
  return g;
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_edge_list(in);
}

inline Graph load_edge_list_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_edge_list(in);
}

// Dangling / unreferenced vertices and their weak variants.
//
// Weak sets come from peeling: repeatedly delete dangling (resp.
// unreferenced) vertices and collect those that become dangling (resp.
// unreferenced) as a result. A vertex that already belongs to either base
// set is never reported as weak.
struct VertexClassification {
  std::vector<vertex_t> dangling;
  std::vector<vertex_t> unreferenced;
  std::vector<vertex_t> weak_dangling;
  std::vector<vertex_t> weak_unreferenced;
  edge_t dangling_edge_count = 0;  // sum over dangling v of |S(v)|
  std::size_t peel_rounds = 0;     // rounds of the longer of the two peels
};

namespace detail {

// Layered peel. `fwd` lists, for each vertex, the vertices whose remaining
// count drops when it is deleted; `count` is that remaining count.
inline std::vector<vertex_t> peel(vertex_t n, std::span<const edge_t> fwd_off, std::span<const vertex_t> fwd,
                                  std::vector<vertex_t> count, const std::vector<char>& base_any,
                                  std::size_t& rounds) {
  std::vector<char> removed(n, 0);
  std::vector<vertex_t> layer;
  for (vertex_t v = 0; v < n; ++v)
    if (count[v] == 0) layer.push_back(v);
  std::vector<vertex_t> weak;
  rounds = 0;
  while (!layer.empty()) {
    ++rounds;
    for (vertex_t v : layer) removed[v] = 1;
    std::vector<vertex_t> next;
    for (vertex_t v : layer) {
      for (edge_t k = fwd_off[v]; k < fwd_off[v + 1]; ++k) {
        vertex_t u = fwd[k];
        if (removed[u]) continue;
        if (--count[u] == 0) {
          next.push_back(u);
          removed[u] = 1;
        }
      }
    }
    for (vertex_t u : next)
      if (!base_any[u]) weak.push_back(u);
    layer = std::move(next);
  }
  std::sort(weak.begin(), weak.end());
  return weak;
}

}  // namespace detail

inline VertexClassification classify(const Graph& g) {
  const vertex_t n = g.num_vertices();
  VertexClassification cls;
  auto indeg = g.in_degrees();
  std::vector<char> base_any(n, 0);
  for (vertex_t v = 0; v < n; ++v) {
    if (g.out_degree(v) == 0) {
      cls.dangling.push_back(v);
      cls.dangling_edge_count += indeg[v];
      base_any[v] = 1;
    }
    if (indeg[v] == 0) {
      cls.unreferenced.push_back(v);
      base_any[v] = 1;
    }
  }

  auto [in_off, in_src] = g.transpose();
  std::vector<vertex_t> outdeg(g.degrees().begin(), g.degrees().end());
  std::size_t r1 = 0, r2 = 0;
  // Deleting a dangling vertex lowers the out-degree of its sources.
  cls.weak_dangling = detail::peel(n, in_off, in_src, std::move(outdeg), base_any, r1);
  // Deleting an unreferenced vertex lowers the in-degree of its targets.
  cls.weak_unreferenced = detail::peel(n, g.offsets(), g.all_targets(), std::move(indeg), base_any, r2);
  cls.peel_rounds = std::max(r1, r2);
  return cls;
}

struct StatsRow {
  vertex_t n = 0;
  edge_t m = 0;
  std::size_t n_d = 0;
  edge_t m_d = 0;
  double deg = 0.0;
};

inline StatsRow stats(const Graph& g, const VertexClassification& cls) {
  StatsRow row;
  row.n = g.num_vertices();
  row.m = g.num_edges();
  row.n_d = cls.dangling.size();
  row.m_d = cls.dangling_edge_count;
  row.deg = row.n == 0 ? 0.0 : static_cast<double>(row.m) / row.n;
  return row;
}

// A graph with edges into dangling vertices split off.
//
// live_targets(v) holds only the non-dangling targets of v; the edges into
// dangling vertices are kept per dangling vertex as its source list S(v).
// Push weights must keep using base().out_degree(v). The base graph must
// outlive this object.
class IFP2Graph {
 public:
  IFP2Graph(const Graph& base, const VertexClassification& cls) : base_(&base) {
    const vertex_t n = base.num_vertices();
    slot_.assign(n, kNoSlot);
    dangling_ = cls.dangling;
    for (std::size_t k = 0; k < dangling_.size(); ++k) slot_[dangling_[k]] = static_cast<vertex_t>(k);

    live_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    src_offsets_.assign(dangling_.size() + 1, 0);
    for (vertex_t v = 0; v < n; ++v) {
      edge_t live = 0;
      for (vertex_t u : base.targets(v)) {
        if (slot_[u] == kNoSlot) ++live;
        else ++src_offsets_[slot_[u] + 1];
      }
      live_offsets_[v + 1] = live_offsets_[v] + live;
    }
    std::partial_sum(src_offsets_.begin(), src_offsets_.end(), src_offsets_.begin());
    live_targets_.resize(live_offsets_[n]);
    sources_.resize(src_offsets_.back());
    std::vector<edge_t> cursor(src_offsets_.begin(), src_offsets_.end() - 1);
    edge_t w = 0;
    for (vertex_t v = 0; v < n; ++v) {
      for (vertex_t u : base.targets(v)) {
        if (slot_[u] == kNoSlot) live_targets_[w++] = u;
        else sources_[cursor[slot_[u]]++] = v;
      }
    }
  }

  const Graph& base() const noexcept { return *base_; }

  std::span<const vertex_t> live_targets(vertex_t v) const {
    return {live_targets_.data() + live_offsets_[v], live_targets_.data() + live_offsets_[v + 1]};
  }
  edge_t num_live_edges() const noexcept { return live_targets_.size(); }

  std::span<const vertex_t> dangling_vertices() const noexcept { return dangling_; }

  // S(v) for the dangling vertex stored at position `slot` of dangling_vertices().
  std::span<const vertex_t> dangling_sources_at(std::size_t slot) const {
    return {sources_.data() + src_offsets_[slot], sources_.data() + src_offsets_[slot + 1]};
  }

  // S(v) by vertex id; empty for non-dangling vertices.
  std::span<const vertex_t> dangling_sources(vertex_t v) const {
    if (slot_[v] == kNoSlot) return {};
    return dangling_sources_at(slot_[v]);
  }

  edge_t num_dangling_edges() const noexcept { return sources_.size(); }

 private:
  static constexpr vertex_t kNoSlot = ~vertex_t{0};

  const Graph* base_;
  std::vector<vertex_t> slot_;
  std::vector<vertex_t> dangling_;
  std::vector<edge_t> live_offsets_;
  std::vector<vertex_t> live_targets_;
  std::vector<edge_t> src_offsets_;
  std::vector<vertex_t> sources_;
};

inline IFP2Graph preprocess_ifp2(const Graph& g, const VertexClassification& cls) { return IFP2Graph(g, cls); }

}  // namespace pushrank
