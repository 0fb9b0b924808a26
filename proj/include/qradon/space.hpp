#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qradon/errors.hpp"
#include "qradon/index_set.hpp"

namespace qradon {

// Finite 1-complex: the discretization of the ambient topological space.
// Vertex names are unique and kept in lexicographic order, so vertex
// indices are a deterministic function of the name set.
struct DiscreteSpace {
  std::vector<std::string> vertices;           // sorted
  std::vector<std::pair<int, int>> edges;      // i<j, sorted
  std::vector<std::vector<int>> adj;           // ascending neighbor lists

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }

  int find_vertex(const std::string& name) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), name);
    if (it == vertices.end() || *it != name) return -1;
    return static_cast<int>(it - vertices.begin());
  }

  int vertex_index(const std::string& name) const {
    const int i = find_vertex(name);
    if (i < 0) throw InputError("unknown vertex name '" + name + "'");
    return i;
  }

  int edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
    if (it == edges.end() || *it != std::make_pair(u, v)) return -1;
    return static_cast<int>(it - edges.begin());
  }
};

using SpacePtr = std::shared_ptr<const DiscreteSpace>;

inline SpacePtr make_space(std::vector<std::string> names,
                           const std::vector<std::pair<std::string, std::string>>& edge_names) {
  auto sp = std::make_shared<DiscreteSpace>();
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw InputError("duplicate vertex name in space");
  sp->vertices = std::move(names);
  for (const auto& [a, b] : edge_names) {
    int u = sp->vertex_index(a), v = sp->vertex_index(b);
    if (u == v) throw InputError("loop edge at vertex '" + a + "'");
    if (u > v) std::swap(u, v);
    sp->edges.emplace_back(u, v);
  }
  std::sort(sp->edges.begin(), sp->edges.end());
  if (std::adjacent_find(sp->edges.begin(), sp->edges.end()) != sp->edges.end())
    throw InputError("duplicate edge in space");
  sp->adj.assign(sp->vertices.size(), {});
  for (const auto& [u, v] : sp->edges) {
    sp->adj[static_cast<std::size_t>(u)].push_back(v);
    sp->adj[static_cast<std::size_t>(v)].push_back(u);
  }
  return sp;
}

// Incidence-closed subcomplex: a union of closed edges plus isolated
// vertices. Every operation below preserves incidence closure.
struct Region {
  SpacePtr space;
  IndexSet verts;
  IndexSet edg;

  bool empty() const { return verts.empty(); }

  bool operator==(const Region& o) const {
    return space == o.space && verts == o.verts && edg == o.edg;
  }
};

struct RegionHash {
  std::size_t operator()(const Region& r) const { return r.verts.hash() * 31 ^ r.edg.hash(); }
};

inline Region region_empty(SpacePtr sp) {
  Region r;
  r.verts = IndexSet(static_cast<std::size_t>(sp->vertex_count()));
  r.edg = IndexSet(static_cast<std::size_t>(sp->edge_count()));
  r.space = std::move(sp);
  return r;
}

inline Region region_full(SpacePtr sp) {
  Region r;
  r.verts = IndexSet::full(static_cast<std::size_t>(sp->vertex_count()));
  r.edg = IndexSet::full(static_cast<std::size_t>(sp->edge_count()));
  r.space = std::move(sp);
  return r;
}

// The vertex set together with all space edges inside it.
inline Region region_induced(const SpacePtr& sp, const IndexSet& vset) {
  Region r = region_empty(sp);
  r.verts = vset;
  for (int e = 0; e < sp->edge_count(); ++e) {
    const auto& [u, v] = sp->edges[static_cast<std::size_t>(e)];
    if (vset.test(static_cast<std::size_t>(u)) && vset.test(static_cast<std::size_t>(v)))
      r.edg.set(static_cast<std::size_t>(e));
  }
  return r;
}

// First edge whose endpoint is missing from the vertex set, if any.
inline std::optional<std::pair<int, int>> incidence_violation(const Region& r) {
  std::optional<std::pair<int, int>> bad;
  r.edg.for_each([&](int e) {
    if (bad) return;
    const auto& [u, v] = r.space->edges[static_cast<std::size_t>(e)];
    if (!r.verts.test(static_cast<std::size_t>(u)) || !r.verts.test(static_cast<std::size_t>(v)))
      bad = std::make_pair(u, v);
  });
  return bad;
}

inline bool region_incidence_closed(const Region& r) { return !incidence_violation(r); }

inline Region make_region(const SpacePtr& sp, const std::vector<std::string>& vertex_names,
                          const std::vector<std::pair<std::string, std::string>>& edge_names) {
  Region r = region_empty(sp);
  for (const auto& name : vertex_names) r.verts.set(static_cast<std::size_t>(sp->vertex_index(name)));
  for (const auto& [a, b] : edge_names) {
    const int u = sp->vertex_index(a), v = sp->vertex_index(b);
    const int e = sp->edge_index(u, v);
    if (e < 0) throw InputError("edge " + a + "-" + b + " is not an edge of the space");
    r.edg.set(static_cast<std::size_t>(e));
  }
  if (auto bad = incidence_violation(r))
    throw InputError("region is not incidence-closed: edge " +
                     sp->vertices[static_cast<std::size_t>(bad->first)] + "-" +
                     sp->vertices[static_cast<std::size_t>(bad->second)] +
                     " is missing an endpoint");
  return r;
}

inline bool region_subset(const Region& a, const Region& b) {
  return a.verts.subset_of(b.verts) && a.edg.subset_of(b.edg);
}

inline Region region_intersect(std::span<const Region> rs) {
  if (rs.empty()) throw InputError("intersection needs at least one region");
  Region out = rs.front();
  for (std::size_t i = 1; i < rs.size(); ++i) {
    if (rs[i].space != out.space) throw InputError("cannot intersect regions over different spaces");
    out.verts &= rs[i].verts;
    out.edg &= rs[i].edg;
  }
  return out;
}

inline Region region_intersect(const Region& a, const Region& b) {
  const Region rs[2] = {a, b};
  return region_intersect(std::span<const Region>(rs, 2));
}

// Named regions over one space; the carrier of closure, TC1, Radon and
// Helly computations.
struct SetFamily {
  SpacePtr space;
  std::vector<std::string> names;
  std::vector<Region> members;
  bool closed_flag = false;

  int size() const { return static_cast<int>(members.size()); }

  int member_index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    return -1;
  }

  void add_member(std::string name, Region r) {
    if (r.space != space) throw InputError("member region belongs to a different space");
    if (member_index(name) >= 0) throw InputError("duplicate member name '" + name + "'");
    if (auto bad = incidence_violation(r))
      throw InputError("member '" + name + "' is not incidence-closed");
    names.push_back(std::move(name));
    members.push_back(std::move(r));
  }
};

// conv(S): intersection of all members containing S, the whole space if no
// member qualifies. conv of the empty set is the intersection of all
// members, which may be empty.
inline Region closure(const SetFamily& fam, const IndexSet& point_set) {
  Region out = region_full(fam.space);
  for (const Region& m : fam.members) {
    if (point_set.subset_of(m.verts)) {
      out.verts &= m.verts;
      out.edg &= m.edg;
    }
  }
  return out;
}

inline Region closure_of(const SetFamily& fam, const std::vector<std::string>& names) {
  IndexSet s(static_cast<std::size_t>(fam.space->vertex_count()));
  for (const auto& n : names) s.set(static_cast<std::size_t>(fam.space->vertex_index(n)));
  return closure(fam, s);
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

// Path-components of a region, each a sorted vertex list, ordered by the
// smallest vertex they contain. Isolated vertices are singletons.
inline std::vector<std::vector<int>> components(const Region& r) {
  detail::UnionFind uf(static_cast<std::size_t>(r.space->vertex_count()));
  r.edg.for_each([&](int e) {
    const auto& [u, v] = r.space->edges[static_cast<std::size_t>(e)];
    uf.unite(u, v);
  });
  std::unordered_map<int, std::size_t> root_slot;
  std::vector<std::vector<int>> out;
  r.verts.for_each([&](int v) {
    const int root = uf.find(v);
    auto [it, fresh] = root_slot.try_emplace(root, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(v);
  });
  return out;
}

inline int component_count(const Region& r) { return static_cast<int>(components(r).size()); }

namespace detail {

constexpr std::size_t kHullLimit = std::size_t{1} << 18;

// All distinct subfamily intersections, seeded with `seeds`; the hull is the
// closure of the seeds under intersection with single members, which equals
// the set of all nonempty-subfamily intersections when seeded with the
// members, and all subfamily intersections (including the empty one) when
// additionally seeded with the whole space.
inline std::vector<Region> intersection_hull(const SetFamily& fam, std::vector<Region> seeds) {
  std::unordered_set<Region, RegionHash> seen(seeds.begin(), seeds.end());
  std::vector<Region> hull = std::move(seeds);
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (const Region& m : fam.members) {
      Region inter = region_intersect(hull[i], m);
      if (seen.insert(inter).second) {
        hull.push_back(std::move(inter));
        if (hull.size() > kHullLimit) throw SizeLimitError("family too large: intersection hull exceeds limit");
      }
    }
  }
  return hull;
}

}  // namespace detail

// Smallest b such that every subfamily intersection has at most b+1
// path-connected components. The empty subfamily counts, with intersection
// equal to the whole space; empty intersections contribute 0.
inline int tc1(const SetFamily& fam) {
  std::vector<Region> hull =
      detail::intersection_hull(fam, {region_full(fam.space)});
  int best = 0;
  for (const Region& r : hull) best = std::max(best, component_count(r) - 1);
  return best;
}

// Adds every intersection of a nonempty subfamily as a member, deduplicated,
// with deterministic generated names, and sets the closed flag.
inline SetFamily close_under_intersection(const SetFamily& fam) {
  SetFamily out = fam;
  out.closed_flag = true;
  if (fam.members.empty()) return out;
  std::vector<Region> hull = detail::intersection_hull(fam, fam.members);
  std::unordered_set<Region, RegionHash> existing(fam.members.begin(), fam.members.end());
  int counter = 0;
  for (const Region& r : hull) {
    if (existing.count(r)) continue;
    existing.insert(r);
    std::string name;
    do {
      name = "int" + std::to_string(counter++);
    } while (out.member_index(name) >= 0);
    out.names.push_back(name);
    out.members.push_back(r);
  }
  return out;
}

}  // namespace qradon
