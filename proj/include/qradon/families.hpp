#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qradon/errors.hpp"
#include "qradon/space.hpp"

namespace qradon {

namespace detail {

inline std::string padded_number(int value, int max_value) {
  std::string digits = std::to_string(value);
  const std::size_t width = std::to_string(max_value).size();
  while (digits.size() < width) digits.insert(digits.begin(), '0');
  return digits;
}

}  // namespace detail

// Path P_m with every subpath (plus the empty region) as a member;
// intersection-closed by construction.
inline SetFamily gen_intervals(int m) {
  if (m < 2 || m > 64) throw InputError("gen_intervals needs 2 <= m <= 64");
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  auto vname = [&](int i) { return "v" + detail::padded_number(i, m); };
  for (int i = 1; i <= m; ++i) names.push_back(vname(i));
  for (int i = 1; i < m; ++i) edges.emplace_back(vname(i), vname(i + 1));
  SetFamily fam;
  fam.space = make_space(std::move(names), edges);
  fam.closed_flag = true;
  fam.add_member("empty", region_empty(fam.space));
  for (int i = 1; i <= m; ++i) {
    for (int j = i; j <= m; ++j) {
      Region r = region_empty(fam.space);
      for (int v = i; v <= j; ++v) r.verts.set(static_cast<std::size_t>(fam.space->vertex_index(vname(v))));
      for (int v = i; v < j; ++v) {
        const int e = fam.space->edge_index(fam.space->vertex_index(vname(v)),
                                            fam.space->vertex_index(vname(v + 1)));
        r.edg.set(static_cast<std::size_t>(e));
      }
      fam.add_member("I" + std::to_string(i) + "_" + std::to_string(j), r);
    }
  }
  return fam;
}

// k disjoint paths P_m; members are all unions of one (possibly empty)
// subpath per path. Intersection-closed by construction; TC1 is k-1.
inline SetFamily gen_multipath(int k, int m) {
  if (k < 1 || m < 2 || k * m > 64) throw InputError("gen_multipath needs k >= 1, m >= 2, k*m <= 64");
  if (k > 26) throw InputError("gen_multipath path prefixes run a..z, so k <= 26");
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  auto vname = [&](int path, int i) {
    return std::string(1, static_cast<char>('a' + path)) + detail::padded_number(i, m);
  };
  for (int p = 0; p < k; ++p) {
    for (int i = 1; i <= m; ++i) names.push_back(vname(p, i));
    for (int i = 1; i < m; ++i) edges.emplace_back(vname(p, i), vname(p, i + 1));
  }
  SetFamily fam;
  fam.space = make_space(std::move(names), edges);
  fam.closed_flag = true;

  // Per-path choices: (0,0) = empty, else the subpath [i, j].
  std::vector<std::pair<int, int>> choices;
  choices.emplace_back(0, 0);
  for (int i = 1; i <= m; ++i)
    for (int j = i; j <= m; ++j) choices.emplace_back(i, j);

  std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
  while (true) {
    Region r = region_empty(fam.space);
    std::string name;
    for (int p = 0; p < k; ++p) {
      const auto& [i, j] = choices[pick[static_cast<std::size_t>(p)]];
      if (i == 0) continue;
      if (!name.empty()) name += "+";
      name += vname(p, i) + "_" + std::to_string(j);
      for (int v = i; v <= j; ++v) r.verts.set(static_cast<std::size_t>(fam.space->vertex_index(vname(p, v))));
      for (int v = i; v < j; ++v)
        r.edg.set(static_cast<std::size_t>(fam.space->edge_index(fam.space->vertex_index(vname(p, v)),
                                                                 fam.space->vertex_index(vname(p, v + 1)))));
    }
    fam.add_member(name.empty() ? "empty" : name, r);
    int p = k - 1;
    while (p >= 0 && ++pick[static_cast<std::size_t>(p)] == choices.size()) pick[static_cast<std::size_t>(p--)] = 0;
    if (p < 0) break;
  }
  return fam;
}

// On K_n, member F_i is the union of all closed edges avoiding vertex i,
// i.e. the complete graph on the other n-1 vertices. TC1 = 0 yet the Helly
// number is n, so the Radon number is unbounded.
inline SetFamily gen_lowerbound(int n) {
  if (n < 3 || n > 12) throw InputError("gen_lowerbound needs 3 <= n <= 12");
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  auto vname = [&](int i) { return detail::padded_number(i, n); };
  for (int i = 1; i <= n; ++i) names.push_back(vname(i));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) edges.emplace_back(vname(i), vname(j));
  SetFamily fam;
  fam.space = make_space(std::move(names), edges);
  for (int i = 1; i <= n; ++i) {
    IndexSet keep = IndexSet::full(static_cast<std::size_t>(n));
    keep.reset(static_cast<std::size_t>(fam.space->vertex_index(vname(i))));
    fam.add_member("F" + std::to_string(i), region_induced(fam.space, keep));
  }
  return fam;
}

struct RandomFamilyParams {
  std::uint64_t seed = 0;
  int vertices = 8;
  double edge_prob = 0.5;
  int sets = 4;
};

// Seeded deterministic space and incidence-closed regions, closed under
// intersection afterwards. The same seed reproduces the family exactly.
inline SetFamily gen_random(const RandomFamilyParams& p) {
  if (p.vertices < 1 || p.vertices > 12) throw InputError("gen_random needs 1 <= vertices <= 12");
  if (p.sets < 0 || p.sets > 8) throw InputError("gen_random needs 0 <= sets <= 8");
  if (p.edge_prob < 0.0 || p.edge_prob > 1.0) throw InputError("gen_random needs edge_prob in [0,1]");
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<std::string> names;
  auto vname = [&](int i) { return "v" + detail::padded_number(i, p.vertices); };
  for (int i = 1; i <= p.vertices; ++i) names.push_back(vname(i));
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 1; i <= p.vertices; ++i)
    for (int j = i + 1; j <= p.vertices; ++j)
      if (coin(rng) < p.edge_prob) edges.emplace_back(vname(i), vname(j));

  SetFamily fam;
  fam.space = make_space(std::move(names), edges);
  for (int s = 1; s <= p.sets; ++s) {
    IndexSet vset(static_cast<std::size_t>(fam.space->vertex_count()));
    for (int v = 0; v < fam.space->vertex_count(); ++v)
      if (coin(rng) < 0.5) vset.set(static_cast<std::size_t>(v));
    Region r = region_empty(fam.space);
    r.verts = vset;
    for (int e = 0; e < fam.space->edge_count(); ++e) {
      const auto& [u, v] = fam.space->edges[static_cast<std::size_t>(e)];
      if (vset.test(static_cast<std::size_t>(u)) && vset.test(static_cast<std::size_t>(v)) && coin(rng) < 0.6)
        r.edg.set(static_cast<std::size_t>(e));
    }
    fam.add_member("S" + std::to_string(s), r);
  }
  return close_under_intersection(fam);
}

}  // namespace qradon
