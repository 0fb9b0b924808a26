#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qradon/bounds.hpp"
#include "qradon/errors.hpp"
#include "qradon/graph.hpp"
#include "qradon/graph_expr.hpp"
#include "qradon/space.hpp"

namespace qradon {

// Discrete stand-in for a continuous path: a vertex sequence with
// consecutive adjacency in the ambient space. A single vertex is a walk of
// length zero.
struct Walk {
  std::vector<int> verts;

  std::vector<int> edge_indices(const DiscreteSpace& sp) const {
    std::vector<int> out;
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
      const int e = sp.edge_index(verts[i], verts[i + 1]);
      if (e < 0) throw InputError("walk uses a non-edge of the space");
      out.push_back(e);
    }
    return out;
  }
};

// Evaluatable closure operator over point subsets of one space, memoized.
// The family operator and its wrapped variants (M -> conv(M + {s})) both
// fit here.
class ClosureOracle {
 public:
  ClosureOracle(SpacePtr space, std::function<Region(const IndexSet&)> fn)
      : space_(std::move(space)),
        fn_(std::move(fn)),
        memo_(std::make_shared<std::unordered_map<IndexSet, Region, IndexSetHash>>()) {}

  const SpacePtr& space() const { return space_; }

  IndexSet empty_point_set() const {
    return IndexSet(static_cast<std::size_t>(space_->vertex_count()));
  }

  const Region& operator()(const IndexSet& pts) const {
    auto it = memo_->find(pts);
    if (it == memo_->end()) it = memo_->emplace(pts, fn_(pts)).first;
    return it->second;
  }

 private:
  SpacePtr space_;
  std::function<Region(const IndexSet&)> fn_;
  std::shared_ptr<std::unordered_map<IndexSet, Region, IndexSetHash>> memo_;
};

inline ClosureOracle family_oracle(SetFamily fam) {
  SpacePtr sp = fam.space;
  return ClosureOracle(sp, [fam = std::move(fam)](const IndexSet& pts) { return closure(fam, pts); });
}

inline ClosureOracle wrap_point(ClosureOracle inner, int s) {
  SpacePtr sp = inner.space();
  return ClosureOracle(sp, [inner = std::move(inner), s](const IndexSet& pts) {
    IndexSet with = pts;
    with.set(static_cast<std::size_t>(s));
    return inner(with);
  });
}

// Vertex placements, edge walks and the label map Phi of a drawing
// constrained by (conv, P). All constructors keep the map vertex-anchored:
// the image of a vertex is the unique point of its label.
struct ConstrainedMap {
  Graph graph;
  SpacePtr space;
  std::vector<int> vertex_image;                       // graph vertex -> space vertex
  std::map<std::pair<int, int>, Walk> edge_image;      // key: endpoints, smaller first
  std::vector<IndexSet> phi_vertex;
  std::map<std::pair<int, int>, IndexSet> phi_edge;
  IndexSet points;

  std::string vertex_label(int v) const { return graph.vertex_name(v); }
};

struct ValidationResult {
  bool ok = true;
  std::string condition;  // "structure", "i", "ii", "iii", "iv", "a", "b", "c"
  std::string detail;

  explicit operator bool() const { return ok; }
};

inline ValidationResult validation_failure(std::string condition, std::string detail) {
  return {false, std::move(condition), std::move(detail)};
}

namespace detail {

inline std::string edge_key_label(const ConstrainedMap& cm, const std::pair<int, int>& e) {
  return cm.vertex_label(e.first) + "-" + cm.vertex_label(e.second);
}

// BFS from `from` restricted to the region. Deterministic: neighbors are
// scanned ascending, so the walk is the lexicographically first shortest
// path.
inline std::optional<Walk> walk_in_region(const Region& r, int from, int to) {
  if (!r.verts.test(static_cast<std::size_t>(from)) || !r.verts.test(static_cast<std::size_t>(to)))
    return std::nullopt;
  const DiscreteSpace& sp = *r.space;
  std::vector<int> parent(static_cast<std::size_t>(sp.vertex_count()), -2);
  std::deque<int> queue{from};
  parent[static_cast<std::size_t>(from)] = -1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (int u : sp.adj[static_cast<std::size_t>(v)]) {
      if (parent[static_cast<std::size_t>(u)] != -2) continue;
      if (!r.verts.test(static_cast<std::size_t>(u))) continue;
      const int e = sp.edge_index(v, u);
      if (e < 0 || !r.edg.test(static_cast<std::size_t>(e))) continue;
      parent[static_cast<std::size_t>(u)] = v;
      queue.push_back(u);
    }
  }
  if (parent[static_cast<std::size_t>(to)] == -2) return std::nullopt;
  Walk w;
  for (int v = to; v != -1; v = parent[static_cast<std::size_t>(v)]) w.verts.push_back(v);
  std::reverse(w.verts.begin(), w.verts.end());
  return w;
}

inline bool walk_inside_region(const Walk& w, const Region& r) {
  for (int v : w.verts)
    if (!r.verts.test(static_cast<std::size_t>(v))) return false;
  for (std::size_t i = 0; i + 1 < w.verts.size(); ++i) {
    const int e = r.space->edge_index(w.verts[i], w.verts[i + 1]);
    if (e < 0 || !r.edg.test(static_cast<std::size_t>(e))) return false;
  }
  return true;
}

inline bool co_component(const Region& r, int x, int y) {
  return walk_in_region(r, x, y).has_value();
}

inline ValidationResult check_structure(const ConstrainedMap& cm) {
  const int n = cm.graph.n;
  if (static_cast<int>(cm.vertex_image.size()) != n ||
      static_cast<int>(cm.phi_vertex.size()) != n)
    return validation_failure("structure", "vertex arrays do not match the graph order");
  for (int v = 0; v < n; ++v) {
    const int im = cm.vertex_image[static_cast<std::size_t>(v)];
    if (im < 0 || im >= cm.space->vertex_count())
      return validation_failure("structure", "vertex " + cm.vertex_label(v) + " has no image");
  }
  for (const auto& e : cm.graph.edges) {
    auto wit = cm.edge_image.find(e);
    auto pit = cm.phi_edge.find(e);
    if (wit == cm.edge_image.end() || pit == cm.phi_edge.end())
      return validation_failure("structure", "edge " + edge_key_label(cm, e) + " has no image or label");
    const Walk& w = wit->second;
    if (w.verts.empty())
      return validation_failure("structure", "edge " + edge_key_label(cm, e) + " has an empty walk");
    const int a = cm.vertex_image[static_cast<std::size_t>(e.first)];
    const int b = cm.vertex_image[static_cast<std::size_t>(e.second)];
    const bool ends_match = (w.verts.front() == a && w.verts.back() == b) ||
                            (w.verts.front() == b && w.verts.back() == a);
    if (!ends_match)
      return validation_failure("structure",
                                "walk of edge " + edge_key_label(cm, e) + " does not join the endpoint images");
    for (std::size_t i = 0; i + 1 < w.verts.size(); ++i)
      if (cm.space->edge_index(w.verts[i], w.verts[i + 1]) < 0)
        return validation_failure("structure", "walk of edge " + edge_key_label(cm, e) + " uses a non-edge");
  }
  return {};
}

}  // namespace detail

// Checks conditions (i)-(iv) of a constrained map against the oracle and
// reports the first violated condition with the offending pair.
inline ValidationResult validate_constrained(const ConstrainedMap& cm, const ClosureOracle& oracle) {
  if (auto s = detail::check_structure(cm); !s) return s;

  const auto& edges = cm.graph.edges;

  // (i) disjoint simplices have disjoint labels.
  for (int u = 0; u < cm.graph.n; ++u)
    for (int v = u + 1; v < cm.graph.n; ++v)
      if (cm.phi_vertex[static_cast<std::size_t>(u)].intersects(cm.phi_vertex[static_cast<std::size_t>(v)]))
        return validation_failure("i", "vertices " + cm.vertex_label(u) + ", " + cm.vertex_label(v) +
                                           " share a label point");
  for (const auto& e : edges)
    for (int v = 0; v < cm.graph.n; ++v) {
      if (v == e.first || v == e.second) continue;
      if (cm.phi_vertex[static_cast<std::size_t>(v)].intersects(cm.phi_edge.at(e)))
        return validation_failure("i", "vertex " + cm.vertex_label(v) + " and edge " +
                                           detail::edge_key_label(cm, e) + " share a label point");
    }
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const auto& e = edges[i];
      const auto& f = edges[j];
      if (e.first == f.first || e.first == f.second || e.second == f.first || e.second == f.second)
        continue;
      if (cm.phi_edge.at(e).intersects(cm.phi_edge.at(f)))
        return validation_failure("i", "disjoint edges " + detail::edge_key_label(cm, e) + ", " +
                                           detail::edge_key_label(cm, f) + " share a label point");
    }

  // (ii) labels are monotone under face containment.
  for (const auto& e : edges) {
    const IndexSet& label = cm.phi_edge.at(e);
    for (int v : {e.first, e.second})
      if (!cm.phi_vertex[static_cast<std::size_t>(v)].subset_of(label))
        return validation_failure("ii", "label of vertex " + cm.vertex_label(v) +
                                            " is not contained in the label of edge " +
                                            detail::edge_key_label(cm, e));
  }

  // (iii) images stay inside the closure of their labels.
  for (int v = 0; v < cm.graph.n; ++v) {
    const Region& hull = oracle(cm.phi_vertex[static_cast<std::size_t>(v)]);
    if (!hull.verts.test(static_cast<std::size_t>(cm.vertex_image[static_cast<std::size_t>(v)])))
      return validation_failure("iii", "image of vertex " + cm.vertex_label(v) +
                                           " lies outside the closure of its label");
  }
  for (const auto& e : edges) {
    const Region& hull = oracle(cm.phi_edge.at(e));
    if (!detail::walk_inside_region(cm.edge_image.at(e), hull))
      return validation_failure("iii", "walk of edge " + detail::edge_key_label(cm, e) +
                                           " leaves the closure of its label");
  }

  // (iv) vertex labels are singletons.
  for (int v = 0; v < cm.graph.n; ++v)
    if (cm.phi_vertex[static_cast<std::size_t>(v)].count() != 1)
      return validation_failure("iv", "label of vertex " + cm.vertex_label(v) + " is not a single point");

  return {};
}

// Vertex-anchored strengthening: the image of each vertex equals the unique
// point of its label. All constructors maintain it.
inline bool is_vertex_anchored(const ConstrainedMap& cm) {
  for (int v = 0; v < cm.graph.n; ++v) {
    const IndexSet& label = cm.phi_vertex[static_cast<std::size_t>(v)];
    if (label.count() != 1 || label.first() != cm.vertex_image[static_cast<std::size_t>(v)]) return false;
  }
  return true;
}

// Almost-embedding: distinct vertices land apart, vertices avoid walks of
// non-incident edges, and disjoint edges have disjoint walks.
inline ValidationResult validate_almost_embedding(const ConstrainedMap& cm) {
  if (auto s = detail::check_structure(cm); !s) return s;

  for (int u = 0; u < cm.graph.n; ++u)
    for (int v = u + 1; v < cm.graph.n; ++v)
      if (cm.vertex_image[static_cast<std::size_t>(u)] == cm.vertex_image[static_cast<std::size_t>(v)])
        return validation_failure("a", "vertices " + cm.vertex_label(u) + ", " + cm.vertex_label(v) +
                                           " are drawn on the same spot");

  for (const auto& e : cm.graph.edges) {
    const Walk& w = cm.edge_image.at(e);
    for (int v = 0; v < cm.graph.n; ++v) {
      if (v == e.first || v == e.second) continue;
      const int im = cm.vertex_image[static_cast<std::size_t>(v)];
      if (std::find(w.verts.begin(), w.verts.end(), im) != w.verts.end())
        return validation_failure("b", "vertex " + cm.vertex_label(v) + " is drawn on edge " +
                                           detail::edge_key_label(cm, e));
    }
  }

  const auto& edges = cm.graph.edges;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const auto& e = edges[i];
      const auto& f = edges[j];
      if (e.first == f.first || e.first == f.second || e.second == f.first || e.second == f.second)
        continue;
      const Walk& we = cm.edge_image.at(e);
      const Walk& wf = cm.edge_image.at(f);
      for (int v : we.verts)
        if (std::find(wf.verts.begin(), wf.verts.end(), v) != wf.verts.end())
          return validation_failure("c", "disjoint edges " + detail::edge_key_label(cm, e) + ", " +
                                             detail::edge_key_label(cm, f) + " share a point");
      const std::vector<int> ee = we.edge_indices(*cm.space);
      const std::vector<int> fe = wf.edge_indices(*cm.space);
      for (int x : ee)
        if (std::find(fe.begin(), fe.end(), x) != fe.end())
          return validation_failure("c", "disjoint edges " + detail::edge_key_label(cm, e) + ", " +
                                             detail::edge_key_label(cm, f) + " share a space edge");
    }

  return {};
}

namespace detail {

// Offending (b+1)-subset whose hull keeps every pair in distinct
// components, if any. Subsets are scanned in lexicographic order.
inline std::optional<IndexSet> hypothesis_violation(const ClosureOracle& oracle,
                                                    const std::vector<int>& pts, int b) {
  const int k = static_cast<int>(pts.size());
  const int need = b + 1;
  if (need > k) return std::nullopt;
  std::vector<int> idx(static_cast<std::size_t>(need));
  for (int i = 0; i < need; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    IndexSet subset = oracle.empty_point_set();
    for (int i : idx) subset.set(static_cast<std::size_t>(pts[static_cast<std::size_t>(i)]));
    const Region& hull = oracle(subset);
    bool pair_found = false;
    const std::vector<std::vector<int>> comps = components(hull);
    for (const auto& comp : comps) {
      int inside = 0;
      for (int v : comp)
        if (subset.test(static_cast<std::size_t>(v))) ++inside;
      if (inside >= 2) {
        pair_found = true;
        break;
      }
    }
    if (!pair_found) return subset;
    int pos = need - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - need + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < need; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return std::nullopt;
}

inline std::vector<std::string> point_names(const SpacePtr& sp, const IndexSet& s) {
  std::vector<std::string> out;
  s.for_each([&](int v) { out.push_back(sp->vertices[static_cast<std::size_t>(v)]); });
  return out;
}

}  // namespace detail

// True iff every (b+1)-subset of pts has two points in one path-component
// of its hull.
inline bool star_hypothesis_check(const ClosureOracle& oracle, const IndexSet& pts, int b) {
  if (b < 1) throw InputError("star hypothesis needs b >= 1");
  if (pts.count() > 16)
    throw SizeLimitError("star hypothesis guard: |pts| = " + std::to_string(pts.count()) +
                         ", limit is 16");
  return !detail::hypothesis_violation(oracle, pts.to_vector(), b).has_value();
}

inline long long star_min_points(int n, int b) {
  return static_cast<long long>(n - 1) * (static_cast<long long>(b) * b - b + 1) + b + 1;
}

inline long long star_trim_size(int n, int b) {
  return static_cast<long long>(n - 1) * (static_cast<long long>(b) * b - b) + b + n;
}

namespace detail {

struct StarContext {
  // Witnesses for auxiliary-graph edges through the chosen center: the
  // first (b-1)-subset of S minus the pair, in lexicographic order, whose
  // hull together with the pair joins them into one component.
  std::map<std::pair<int, int>, std::optional<IndexSet>> witness_cache;

  const std::optional<IndexSet>& witness(const ClosureOracle& oracle, const std::vector<int>& pool,
                                         int x, int y, int b) {
    const std::pair<int, int> key = std::minmax(x, y);
    auto it = witness_cache.find(key);
    if (it != witness_cache.end()) return it->second;

    std::optional<IndexSet> found;
    std::vector<int> cands;
    for (int p : pool)
      if (p != x && p != y) cands.push_back(p);
    const int need = b - 1;
    const int k = static_cast<int>(cands.size());
    if (need <= k) {
      std::vector<int> idx(static_cast<std::size_t>(need));
      for (int i = 0; i < need; ++i) idx[static_cast<std::size_t>(i)] = i;
      while (true) {
        IndexSet w = oracle.empty_point_set();
        for (int i : idx) w.set(static_cast<std::size_t>(cands[static_cast<std::size_t>(i)]));
        IndexSet query = w;
        query.set(static_cast<std::size_t>(x));
        query.set(static_cast<std::size_t>(y));
        if (co_component(oracle(query), x, y)) {
          found = w;
          break;
        }
        if (need == 0) break;
        int pos = need - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - need + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < need; ++i)
          idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
      }
    }
    return witness_cache.emplace(key, std::move(found)).first->second;
  }
};

inline ConstrainedMap make_star_map(const ClosureOracle& oracle, const IndexSet& points, int n) {
  ConstrainedMap cm;
  cm.graph = Graph::complete_bipartite(1, n);  // vertex 0 is the center
  cm.space = oracle.space();
  cm.vertex_image.assign(static_cast<std::size_t>(n + 1), -1);
  cm.phi_vertex.assign(static_cast<std::size_t>(n + 1), oracle.empty_point_set());
  cm.points = points;
  return cm;
}

}  // namespace detail

// Lemma-style star builder: returns a constrained drawing of K_{1,n} whose
// labels live inside S. Branches: base case at b = 1; otherwise either
// recursion on the non-neighbors of the first point with a wrapped oracle,
// or greedy leaf selection among its neighbors.
inline ConstrainedMap build_star(const ClosureOracle& oracle, const IndexSet& s_input, int n, int b) {
  if (n < 1 || b < 1) throw InputError("build_star needs n >= 1 and b >= 1");
  const long long have = static_cast<long long>(s_input.count());
  if (have < star_min_points(n, b))
    throw InsufficientPointsError("build_star needs at least " + std::to_string(star_min_points(n, b)) +
                                  " points for n = " + std::to_string(n) + ", b = " + std::to_string(b) +
                                  ", got " + std::to_string(have));

  // Throw superfluous points away: keep the lexicographically smallest.
  const long long keep = star_trim_size(n, b);
  std::vector<int> pts;
  s_input.for_each([&](int v) {
    if (static_cast<long long>(pts.size()) < keep) pts.push_back(v);
  });
  IndexSet trimmed = oracle.empty_point_set();
  for (int v : pts) trimmed.set(static_cast<std::size_t>(v));

  // Eager hypothesis check while the subset sweep is affordable; otherwise
  // violations surface as failed path searches below.
  double combos = 1.0;
  for (int i = 0; i < b + 1; ++i) combos *= static_cast<double>(pts.size() - i) / (i + 1);
  if (combos <= 200000.0) {
    if (auto bad = detail::hypothesis_violation(oracle, pts, b))
      throw HypothesisError("star hypothesis violated: a " + std::to_string(b + 1) +
                                "-point set has no two points in one hull component",
                            detail::point_names(oracle.space(), *bad));
  }

  if (b == 1) {
    // n+1 points: the first is the center, paths run inside pair hulls.
    ConstrainedMap cm = detail::make_star_map(oracle, s_input, n);
    const int center = pts[0];
    cm.vertex_image[0] = center;
    cm.phi_vertex[0].set(static_cast<std::size_t>(center));
    for (int i = 1; i <= n; ++i) {
      const int leaf = pts[static_cast<std::size_t>(i)];
      cm.vertex_image[static_cast<std::size_t>(i)] = leaf;
      cm.phi_vertex[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(leaf));
      IndexSet label = oracle.empty_point_set();
      label.set(static_cast<std::size_t>(center));
      label.set(static_cast<std::size_t>(leaf));
      auto walk = detail::walk_in_region(oracle(label), center, leaf);
      if (!walk)
        throw HypothesisError("star hypothesis violated: pair hull is disconnected",
                              detail::point_names(oracle.space(), label));
      cm.edge_image[{0, i}] = std::move(*walk);
      cm.phi_edge[{0, i}] = std::move(label);
    }
    return cm;
  }

  detail::StarContext ctx;
  const int s = pts[0];
  std::vector<int> neighbors, non_neighbors;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const int x = pts[i];
    if (ctx.witness(oracle, pts, s, x, b))
      neighbors.push_back(x);
    else
      non_neighbors.push_back(x);
  }

  const long long recursion_size = star_trim_size(n, b - 1);
  if (static_cast<long long>(non_neighbors.size()) >= recursion_size) {
    // Non-neighbor branch: recurse one level down with the wrapped oracle,
    // then add s to every edge label.
    IndexSet sub = oracle.empty_point_set();
    for (int v : non_neighbors) sub.set(static_cast<std::size_t>(v));
    ConstrainedMap cm = build_star(wrap_point(oracle, s), sub, n, b - 1);
    for (auto& [e, label] : cm.phi_edge) label.set(static_cast<std::size_t>(s));
    cm.points = s_input;
    return cm;
  }

  // Neighbor branch, guaranteed by the counting identity.
  const long long neighbor_need = 2LL * (b - 1) * (n - 1) + 1;
  if (static_cast<long long>(neighbors.size()) < neighbor_need)
    throw Error("internal: neither star branch is available (counting identity violated)");

  auto hits = [&](int x, int y) {  // x hits y iff y lies in the witness of (s,x)
    const auto& w = ctx.witness(oracle, pts, s, x, b);
    return w && w->test(static_cast<std::size_t>(y));
  };

  std::vector<int> surviving = neighbors;
  std::vector<int> leaves;
  for (int round = 0; round < n; ++round) {
    if (surviving.empty()) throw Error("internal: greedy leaf selection ran out of points");
    int chosen = -1;
    for (int y : surviving) {
      int hit_count = 0;
      for (int x : surviving)
        if (x != y && hits(x, y)) ++hit_count;
      if (hit_count <= b - 1) {
        chosen = y;
        break;
      }
    }
    if (chosen < 0) throw Error("internal: no point is hit at most b-1 times");
    leaves.push_back(chosen);
    std::vector<int> next;
    for (int x : surviving) {
      if (x == chosen || hits(chosen, x) || hits(x, chosen)) continue;
      next.push_back(x);
    }
    surviving = std::move(next);
  }

  // Selected leaves are pairwise non-hitting, so witnesses avoid the leaf set.
  for (int x : leaves)
    for (int y : leaves)
      if (x != y && hits(x, y)) throw Error("internal: greedy leaves are not hit-free");

  ConstrainedMap cm = detail::make_star_map(oracle, s_input, n);
  cm.vertex_image[0] = s;
  cm.phi_vertex[0].set(static_cast<std::size_t>(s));
  for (int i = 1; i <= n; ++i) {
    const int x = leaves[static_cast<std::size_t>(i - 1)];
    cm.vertex_image[static_cast<std::size_t>(i)] = x;
    cm.phi_vertex[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(x));
    IndexSet label = *ctx.witness(oracle, pts, s, x, b);
    label.set(static_cast<std::size_t>(s));
    label.set(static_cast<std::size_t>(x));
    auto walk = detail::walk_in_region(oracle(label), s, x);
    if (!walk) throw Error("internal: witnessed pair is not co-component");
    cm.edge_image[{0, i}] = std::move(*walk);
    cm.phi_edge[{0, i}] = std::move(label);
  }
  return cm;
}

namespace detail {

// One flattened join operand: either a single K1 leaf at a global vertex
// offset, or the unique non-K1 operand covering a contiguous vertex range.
struct JoinUnit {
  bool is_k1 = true;
  int offset = 0;
  int count = 1;
  ExprPtr inner;  // set when !is_k1
};

inline void flatten_units(const ExprPtr& e, int offset, std::vector<JoinUnit>& out) {
  switch (e->kind) {
    case GraphExpr::Kind::K:
      for (int i = 0; i < e->kn; ++i) out.push_back({true, offset + i, 1, nullptr});
      break;
    case GraphExpr::Kind::B: {
      std::vector<ExprPtr> ones(static_cast<std::size_t>(e->bm), GraphExpr::k(1));
      out.push_back({false, offset, e->bm, GraphExpr::disjoint_union(std::move(ones))});
      for (int i = 0; i < e->bn; ++i) out.push_back({true, offset + e->bm + i, 1, nullptr});
      break;
    }
    case GraphExpr::Kind::Join: {
      int off = offset;
      for (const auto& c : e->children) {
        flatten_units(c, off, out);
        off += expr_vertex_count(c);
      }
      break;
    }
    default:
      out.push_back({false, offset, expr_vertex_count(e), e});
      break;
  }
}

struct ConstrainedBuilder {
  const ClosureOracle& oracle;
  BigInt b;
  ConstrainedMap& cm;

  BigInt q_value_units(const std::vector<JoinUnit>& units) const {
    const JoinUnit* inner = nullptr;
    int k1 = 0;
    for (const auto& u : units) {
      if (u.is_k1)
        ++k1;
      else
        inner = &u;
    }
    BigInt v = inner ? q_value_expr(inner->inner) : BigInt(1);
    const int joins = inner ? k1 : k1 - 1;
    for (int i = 0; i < joins; ++i) v = join_rule_value(v, b);
    return v;
  }

  BigInt q_value_expr(const ExprPtr& e) const {
    if (e->kind == GraphExpr::Kind::Union) {
      BigInt sum = 0;
      for (const auto& c : e->children) sum += q_value_expr(c);
      return sum;
    }
    std::vector<JoinUnit> units;
    flatten_units(e, 0, units);
    return q_value_units(units);
  }

  // Consumes the lexicographically smallest `take` points of the block.
  static std::vector<int> first_points(const IndexSet& block, long long take) {
    std::vector<int> out;
    block.for_each([&](int v) {
      if (static_cast<long long>(out.size()) < take) out.push_back(v);
    });
    if (static_cast<long long>(out.size()) < take)
      throw InsufficientPointsError("point block is smaller than the recursion requires");
    return out;
  }

  void build_node(const ExprPtr& e, int offset, const IndexSet& block) {
    if (e->kind == GraphExpr::Kind::Union) {
      // Split the block by lexicographic order into child-sized slices.
      std::vector<int> pool = block.to_vector();
      std::size_t cursor = 0;
      int off = offset;
      for (const auto& c : e->children) {
        const BigInt need_big = q_value_expr(c);
        const long long need = need_big.convert_to<long long>();
        if (cursor + static_cast<std::size_t>(need) > pool.size())
          throw InsufficientPointsError("point block is smaller than the union split requires");
        IndexSet slice = oracle.empty_point_set();
        for (long long i = 0; i < need; ++i) slice.set(static_cast<std::size_t>(pool[cursor++]));
        build_node(c, off, slice);
        off += expr_vertex_count(c);
      }
      return;
    }
    std::vector<JoinUnit> units;
    flatten_units(e, offset, units);
    build_join(units, block);
  }

  void build_join(std::vector<JoinUnit> units, const IndexSet& block) {
    int non_k1 = 0;
    for (const auto& u : units)
      if (!u.is_k1) ++non_k1;
    if (non_k1 > 1) throw JoinRuleError("join with two non-K1 operands reached the builder");

    if (units.size() == 1) {
      const JoinUnit& u = units.front();
      if (u.is_k1) {
        const int p = first_points(block, 1).front();
        place_vertex(u.offset, p);
      } else {
        build_node(u.inner, u.offset, block);
      }
      return;
    }

    if (units.size() == 2 && units[0].is_k1 && units[1].is_k1) {
      build_edge_case(units[0].offset, units[1].offset, block);
      return;
    }

    // Peel the rightmost K1 as the join apex and star it to the rest.
    std::size_t peeled = units.size();
    for (std::size_t i = units.size(); i-- > 0;)
      if (units[i].is_k1) {
        peeled = i;
        break;
      }
    if (peeled == units.size()) throw Error("internal: join node without a K1 operand to peel");
    const int center_vertex = units[peeled].offset;
    std::vector<JoinUnit> rest = units;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(peeled));

    const BigInt leaf_count_big = q_value_units(rest);
    const int leaf_count = leaf_count_big.convert_to<int>();
    ConstrainedMap star = build_star(oracle, block, leaf_count, b.convert_to<int>());

    IndexSet leaf_points = oracle.empty_point_set();
    std::vector<int> leaf_of_point(static_cast<std::size_t>(oracle.space()->vertex_count()), -1);
    for (int i = 1; i <= leaf_count; ++i) {
      const int p = star.vertex_image[static_cast<std::size_t>(i)];
      leaf_points.set(static_cast<std::size_t>(p));
      leaf_of_point[static_cast<std::size_t>(p)] = i;
    }

    build_join(rest, leaf_points);

    // Attach the apex: each inner vertex anchors at a leaf point, so it
    // inherits that star edge.
    place_vertex(center_vertex, star.vertex_image[0]);
    for (const auto& u : rest) {
      for (int v = u.offset; v < u.offset + u.count; ++v) {
        const int anchor = cm.vertex_image[static_cast<std::size_t>(v)];
        const int leaf = leaf_of_point[static_cast<std::size_t>(anchor)];
        if (leaf < 0) throw Error("internal: inner vertex is not anchored at a star leaf");
        const std::pair<int, int> ekey = std::minmax(center_vertex, v);
        cm.edge_image[ekey] = star.edge_image.at({0, leaf});
        cm.phi_edge[ekey] = star.phi_edge.at({0, leaf});
      }
    }
  }

  void build_edge_case(int u_vertex, int v_vertex, const IndexSet& block) {
    // Trim to b+1 points; the hull has at most b components, so two of the
    // points share one and a walk joins them.
    const long long need = (b + 1).convert_to<long long>();
    const std::vector<int> pts = first_points(block, need);
    IndexSet label = oracle.empty_point_set();
    for (int p : pts) label.set(static_cast<std::size_t>(p));
    const Region& hull = oracle(label);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        auto walk = detail::walk_in_region(hull, pts[i], pts[j]);
        if (!walk) continue;
        place_vertex(u_vertex, pts[i]);
        place_vertex(v_vertex, pts[j]);
        const std::pair<int, int> ekey = std::minmax(u_vertex, v_vertex);
        cm.edge_image[ekey] = std::move(*walk);
        cm.phi_edge[ekey] = label;
        return;
      }
    throw HypothesisError("pigeonhole failed: no two points share a hull component",
                          point_names(oracle.space(), label));
  }

  void place_vertex(int vertex, int point) {
    cm.vertex_image[static_cast<std::size_t>(vertex)] = point;
    cm.phi_vertex[static_cast<std::size_t>(vertex)] = oracle.empty_point_set();
    cm.phi_vertex[static_cast<std::size_t>(vertex)].set(static_cast<std::size_t>(point));
  }
};

}  // namespace detail

// Constructive recursion mirroring the bound calculus: K1 places a vertex,
// K2 uses the pigeonhole pair, unions split the point block, joins peel one
// K1 through the star builder. The output is constrained by (family, P).
inline ConstrainedMap build_constrained(const ExprPtr& e, const SetFamily& fam, const IndexSet& p) {
  const int b = tc1(fam) + 1;
  BoundDerivation d = q_poly(e);  // rejects expressions the calculus cannot handle
  const BigInt need = d.poly.eval(BigInt(b));
  if (BigInt(p.count()) < need)
    throw InsufficientPointsError("build_constrained needs " + need.str() + " points, got " +
                                  std::to_string(p.count()));

  ConstrainedMap cm;
  cm.graph = realize(e);
  cm.space = fam.space;
  cm.vertex_image.assign(static_cast<std::size_t>(cm.graph.n), -1);
  cm.phi_vertex.assign(static_cast<std::size_t>(cm.graph.n),
                       IndexSet(static_cast<std::size_t>(fam.space->vertex_count())));
  cm.points = p;

  const ClosureOracle oracle = family_oracle(fam);
  detail::ConstrainedBuilder builder{oracle, BigInt(b), cm};
  builder.build_node(e, 0, p);
  return cm;
}

// Restriction of a constrained map to an embedded subgraph: keeps only the
// images and labels of simplices in the embedded copy.
inline ConstrainedMap restrict_map(const ConstrainedMap& cm, const Graph& g,
                                   const std::vector<int>& emb) {
  if (!check_embedding(g, cm.graph, emb))
    throw InputError("restriction requires an edge-preserving vertex injection");
  ConstrainedMap out;
  out.graph = g;
  out.space = cm.space;
  out.points = cm.points;
  out.vertex_image.assign(static_cast<std::size_t>(g.n), -1);
  out.phi_vertex.assign(static_cast<std::size_t>(g.n),
                        IndexSet(static_cast<std::size_t>(cm.space->vertex_count())));
  for (int v = 0; v < g.n; ++v) {
    out.vertex_image[static_cast<std::size_t>(v)] = cm.vertex_image[static_cast<std::size_t>(emb[static_cast<std::size_t>(v)])];
    out.phi_vertex[static_cast<std::size_t>(v)] = cm.phi_vertex[static_cast<std::size_t>(emb[static_cast<std::size_t>(v)])];
  }
  for (const auto& [u, v] : g.edges) {
    const std::pair<int, int> src = std::minmax(emb[static_cast<std::size_t>(u)], emb[static_cast<std::size_t>(v)]);
    out.edge_image[{u, v}] = cm.edge_image.at(src);
    out.phi_edge[{u, v}] = cm.phi_edge.at(src);
  }
  return out;
}

}  // namespace qradon
