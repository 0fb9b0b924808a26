#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qradon/errors.hpp"
#include "qradon/index_set.hpp"

namespace qradon {

// Simple undirected graph on vertices [0, n). Edges are stored with the
// smaller index first, sorted, without duplicates. Vertex names are
// optional; unnamed vertices render as v0, v1, ...
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> names;

  static Graph empty(int n) {
    Graph g;
    g.n = n;
    return g;
  }

  static Graph complete(int n) {
    Graph g = empty(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    return g;
  }

  static Graph complete_bipartite(int m, int n) {
    Graph g = empty(m + n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) g.edges.emplace_back(i, m + j);
    return g;
  }

  static Graph cycle(int n) {
    Graph g = empty(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    g.normalize();
    return g;
  }

  void add_edge(int u, int v) {
    if (u == v) throw InputError("loops are not allowed in a simple graph");
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
  }

  // Sorts and validates the edge list.
  void normalize() {
    for (auto& [u, v] : edges) {
      if (u > v) std::swap(u, v);
      if (u == v) throw InputError("loops are not allowed in a simple graph");
      if (u < 0 || v >= n) throw InputError("edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }

  bool has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
  }

  int edge_count() const { return static_cast<int>(edges.size()); }

  int degree(int v) const {
    int d = 0;
    for (const auto& [a, b] : edges)
      if (a == v || b == v) ++d;
    return d;
  }

  std::string vertex_name(int i) const {
    if (!names.empty()) return names[static_cast<std::size_t>(i)];
    return "v" + std::to_string(i);
  }

  bool operator==(const Graph& o) const { return n == o.n && edges == o.edges; }
};

// True iff `map` is an injective vertex map g -> h carrying every edge of g
// to an edge of h (not necessarily induced).
inline bool check_embedding(const Graph& g, const Graph& h, const std::vector<int>& map) {
  if (static_cast<int>(map.size()) != g.n) return false;
  std::vector<bool> used(static_cast<std::size_t>(h.n), false);
  for (int im : map) {
    if (im < 0 || im >= h.n || used[static_cast<std::size_t>(im)]) return false;
    used[static_cast<std::size_t>(im)] = true;
  }
  for (const auto& [u, v] : g.edges)
    if (!h.has_edge(map[static_cast<std::size_t>(u)], map[static_cast<std::size_t>(v)])) return false;
  return true;
}

// Backtracking subgraph-embedding search in deterministic vertex order:
// pattern vertices are assigned in index order, candidates tried ascending,
// so the returned injection is the lexicographically first one.
inline std::optional<std::vector<int>> subgraph_embed(const Graph& g, const Graph& h) {
  if (g.n > 12)
    throw SizeLimitError("subgraph embedding guard: pattern has " + std::to_string(g.n) +
                         " vertices, limit is 12");
  if (g.n > h.n) return std::nullopt;

  std::vector<std::vector<int>> back_neighbors(static_cast<std::size_t>(g.n));
  for (const auto& [u, v] : g.edges) back_neighbors[static_cast<std::size_t>(v)].push_back(u);

  std::vector<int> gdeg(static_cast<std::size_t>(g.n), 0), hdeg(static_cast<std::size_t>(h.n), 0);
  for (const auto& [u, v] : g.edges) ++gdeg[static_cast<std::size_t>(u)], ++gdeg[static_cast<std::size_t>(v)];
  for (const auto& [u, v] : h.edges) ++hdeg[static_cast<std::size_t>(u)], ++hdeg[static_cast<std::size_t>(v)];

  std::vector<int> assign(static_cast<std::size_t>(g.n), -1);
  std::vector<bool> used(static_cast<std::size_t>(h.n), false);

  auto rec = [&](auto&& self, int next) -> bool {
    if (next == g.n) return true;
    for (int cand = 0; cand < h.n; ++cand) {
      if (used[static_cast<std::size_t>(cand)]) continue;
      if (hdeg[static_cast<std::size_t>(cand)] < gdeg[static_cast<std::size_t>(next)]) continue;
      bool ok = true;
      for (int u : back_neighbors[static_cast<std::size_t>(next)])
        if (!h.has_edge(assign[static_cast<std::size_t>(u)], cand)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      assign[static_cast<std::size_t>(next)] = cand;
      used[static_cast<std::size_t>(cand)] = true;
      if (self(self, next + 1)) return true;
      used[static_cast<std::size_t>(cand)] = false;
      assign[static_cast<std::size_t>(next)] = -1;
    }
    return false;
  };

  if (rec(rec, 0)) return assign;
  return std::nullopt;
}

}  // namespace qradon
