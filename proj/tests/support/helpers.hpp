#pragma once

// Shared test utilities: deterministic random generators and independent
// brute-force oracles. The oracles stay naive on purpose so they check the
// library through a second route.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qradon/qradon.hpp"

namespace testsupport {

using namespace qradon;

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double rand_real(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// ---------------------------------------------------------------------------
// Random inputs

inline Polynomial random_polynomial(Rng& rng, int max_degree = 8, int coeff_bound = 100) {
  const int deg = rand_int(rng, -1, max_degree);  // -1 gives the zero polynomial
  std::vector<BigInt> coeffs;
  for (int i = 0; i <= deg; ++i) coeffs.emplace_back(rand_int(rng, -coeff_bound, coeff_bound));
  return Polynomial::from_coeffs(std::move(coeffs));
}

inline Graph random_graph(Rng& rng, int min_n = 2, int max_n = 8, double p = 0.5) {
  const int n = rand_int(rng, min_n, max_n);
  Graph g = Graph::empty(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rand_real(rng) < p) g.add_edge(i, j);
  g.normalize();
  return g;
}

// Random expression accepted by the polynomial calculus: every join has at
// most one non-K1 operand.
inline ExprPtr random_expr(Rng& rng, int budget, int depth = 0) {
  if (budget <= 0) budget = 1;
  const int kind = depth >= 3 ? 0 : rand_int(rng, 0, 3);
  switch (kind) {
    case 1: {  // B(m,n)
      if (budget < 2) return GraphExpr::k(budget);
      const int m = rand_int(rng, 1, budget - 1);
      const int n = rand_int(rng, 1, budget - m);
      return GraphExpr::b(m, n);
    }
    case 2: {  // U
      std::vector<ExprPtr> kids;
      int left = budget;
      while (left > 0) {
        const int take = rand_int(rng, 1, left);
        kids.push_back(random_expr(rng, take, depth + 1));
        left -= take;
        if (static_cast<int>(kids.size()) >= 3) break;
      }
      if (kids.empty()) kids.push_back(GraphExpr::k(1));
      return GraphExpr::disjoint_union(std::move(kids));
    }
    case 3: {  // J: one arbitrary operand plus K1s
      if (budget < 2) return GraphExpr::k(budget);
      const int inner_budget = rand_int(rng, 1, budget - 1);
      std::vector<ExprPtr> kids;
      kids.push_back(random_expr(rng, inner_budget, depth + 1));
      for (int i = 0; i < budget - inner_budget; ++i) kids.push_back(GraphExpr::k(1));
      return GraphExpr::join(std::move(kids));
    }
    default:
      return GraphExpr::k(rand_int(rng, 1, budget));
  }
}

// Random well-formed expression string for the parser round-trip property.
inline std::string random_expr_string(Rng& rng, int depth = 0) {
  const int kind = depth >= 3 ? rand_int(rng, 0, 1) : rand_int(rng, 0, 3);
  switch (kind) {
    case 1:
      return "B(" + std::to_string(rand_int(rng, 1, 4)) + "," + std::to_string(rand_int(rng, 1, 4)) + ")";
    case 2:
    case 3: {
      const char* head = kind == 2 ? "U(" : "J(";
      std::string out = head;
      const int arity = rand_int(rng, 1, 3);
      for (int i = 0; i < arity; ++i) {
        if (i) out += ",";
        out += random_expr_string(rng, depth + 1);
      }
      return out + ")";
    }
    default:
      return "K" + std::to_string(rand_int(rng, 1, 5));
  }
}

inline bool graph_connected(const Graph& g) {
  if (g.n == 0) return true;
  std::vector<int> stack{0};
  std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
  seen[0] = true;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : g.edges) {
      int u = -1;
      if (a == v) u = b;
      if (b == v) u = a;
      if (u >= 0 && !seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = true;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == g.n;
}

inline SetFamily random_family(Rng& rng, int max_vertices = 9, int max_sets = 5) {
  RandomFamilyParams params;
  params.seed = rng();
  params.vertices = rand_int(rng, 2, max_vertices);
  params.edge_prob = rand_real(rng);
  params.sets = rand_int(rng, 0, max_sets);
  return gen_random(params);
}

// ---------------------------------------------------------------------------
// Independent oracles

// TC1 by direct sweep over all 2^|F| subfamilies (including the empty one).
inline int tc1_oracle(const SetFamily& fam) {
  const int k = fam.size();
  if (k > 22) throw SizeLimitError("tc1 oracle handles at most 22 members");
  int best = 0;
  auto rec = [&](auto&& self, int i, const Region& acc) -> void {
    best = std::max(best, component_count(acc) - 1);
    for (int j = i; j < k; ++j)
      self(self, j + 1, region_intersect(acc, fam.members[static_cast<std::size_t>(j)]));
  };
  rec(rec, 0, region_full(fam.space));
  return best;
}

// TC1 of an intersection-closed family: subfamily intersections are members
// (or empty, or the whole space), so scanning members plus the whole space
// is enough. Requires the closed flag to be truthful.
inline int tc1_closed_oracle(const SetFamily& fam) {
  int best = component_count(region_full(fam.space)) - 1;
  for (const Region& m : fam.members) best = std::max(best, component_count(m) - 1);
  // Pairwise intersections can still fall outside an untruthfully flagged
  // family; trust the flag here.
  return std::max(best, 0);
}

// Distinct closed sets: every nonempty-subfamily intersection plus the whole
// space.
inline std::vector<Region> closed_sets_oracle(const SetFamily& fam) {
  std::vector<Region> out;
  auto push = [&](const Region& r) {
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  };
  const int k = fam.size();
  if (k > 20) throw SizeLimitError("closed-set oracle handles at most 20 members");
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << k); ++mask) {
    Region acc = region_full(fam.space);
    for (int j = 0; j < k; ++j)
      if (mask & (std::uint32_t{1} << j)) acc = region_intersect(acc, fam.members[static_cast<std::size_t>(j)]);
    push(acc);
  }
  push(region_full(fam.space));
  return out;
}

// Helly number by enumerating subfamilies of distinct closed sets and
// keeping the largest inclusion-minimal empty-intersecting one. Returns
// nullopt when the closed-set count makes the sweep unaffordable.
inline std::optional<int> helly_oracle(const SetFamily& fam) {
  std::vector<Region> closed;
  try {
    closed = closed_sets_oracle(fam);
  } catch (const SizeLimitError&) {
    return std::nullopt;
  }
  const int k = static_cast<int>(closed.size());
  if (k > 16) return std::nullopt;
  int best = 0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << k); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size <= best) continue;
    Region acc = region_full(fam.space);
    for (int j = 0; j < k; ++j)
      if (mask & (std::uint32_t{1} << j)) acc = region_intersect(acc, closed[static_cast<std::size_t>(j)]);
    if (!acc.empty()) continue;
    bool minimal = true;
    for (int drop = 0; drop < k && minimal; ++drop) {
      if (!(mask & (std::uint32_t{1} << drop))) continue;
      Region sub = region_full(fam.space);
      for (int j = 0; j < k; ++j)
        if (j != drop && (mask & (std::uint32_t{1} << j)))
          sub = region_intersect(sub, closed[static_cast<std::size_t>(j)]);
      if (sub.empty()) minimal = false;
    }
    if (minimal) best = size;
  }
  return best == 0 ? 1 : best;
}

// True iff S admits a partition into two disjoint nonempty parts with
// intersecting closures; checked against all 2^|S| subsets.
inline bool splits_oracle(const SetFamily& fam, const std::vector<int>& s) {
  const int k = static_cast<int>(s.size());
  const auto universe = static_cast<std::size_t>(fam.space->vertex_count());
  for (std::uint32_t mask = 1; mask + 1 < (std::uint32_t{1} << k); ++mask) {
    IndexSet s1(universe), s2(universe);
    for (int i = 0; i < k; ++i) {
      if (mask & (std::uint32_t{1} << i))
        s1.set(static_cast<std::size_t>(s[static_cast<std::size_t>(i)]));
      else
        s2.set(static_cast<std::size_t>(s[static_cast<std::size_t>(i)]));
    }
    if (closure(fam, s1).verts.intersects(closure(fam, s2).verts)) return true;
  }
  return false;
}

// Hand recursion for search oracles: the join-rule chain over an innermost
// union of `inner` singletons, applied `joins` times.
inline BigInt join_chain_value(BigInt inner, int joins, long long b) {
  BigInt v = std::move(inner);
  for (int i = 0; i < joins; ++i) v = join_rule_value(v, BigInt(b));
  return v;
}

inline IndexSet first_vertices(const SetFamily& fam, int count) {
  IndexSet out(static_cast<std::size_t>(fam.space->vertex_count()));
  for (int i = 0; i < count; ++i) out.set(static_cast<std::size_t>(i));
  return out;
}

}  // namespace testsupport
