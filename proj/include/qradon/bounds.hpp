#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qradon/errors.hpp"
#include "qradon/graph.hpp"
#include "qradon/graph_expr.hpp"
#include "qradon/polynomial.hpp"

namespace qradon {

// One application of the join rule: p -> (b^2 - b + 1)(p - 1) + b + 1.
inline Polynomial join_rule(const Polynomial& p) {
  const Polynomial factor = Polynomial::from_coeffs({BigInt(1), BigInt(-1), BigInt(1)});
  const Polynomial shift = Polynomial::from_coeffs({BigInt(1), BigInt(1)});
  return factor * (p - Polynomial(1)) + shift;
}

inline BigInt join_rule_value(const BigInt& p, const BigInt& b) {
  return (b * b - b + 1) * (p - 1) + b + 1;
}

enum class RuleKind { Base, Union, Join, Subgraph };

inline const char* rule_name(RuleKind r) {
  switch (r) {
    case RuleKind::Base: return "base";
    case RuleKind::Union: return "union";
    case RuleKind::Join: return "join";
    default: return "subgraph";
  }
}

struct DerivationStep {
  RuleKind rule;
  std::vector<std::size_t> children;  // indices of earlier steps
  Polynomial poly;
  std::string note;
};

// A polynomial together with the rule applications that produced it. The
// last step is the root; replaying the steps bottom-up reproduces poly.
struct BoundDerivation {
  ExprPtr expr;
  Polynomial poly;
  std::vector<DerivationStep> steps;
};

namespace detail {

// Join operands after flattening: nested joins are merged, K(n) expands to
// n K1 leaves and B(m,n) to an inner union of m K1s plus n K1 leaves (the
// first part innermost).
struct JoinParts {
  std::vector<ExprPtr> inner;  // non-K1 operands
  int k1 = 0;
};

inline void collect_join_parts(const ExprPtr& e, JoinParts& parts) {
  switch (e->kind) {
    case GraphExpr::Kind::K:
      parts.k1 += e->kn;
      break;
    case GraphExpr::Kind::B: {
      std::vector<ExprPtr> ones(static_cast<std::size_t>(e->bm), GraphExpr::k(1));
      parts.inner.push_back(GraphExpr::disjoint_union(std::move(ones)));
      parts.k1 += e->bn;
      break;
    }
    case GraphExpr::Kind::Join:
      for (const auto& c : e->children) collect_join_parts(c, parts);
      break;
    default:
      parts.inner.push_back(e);
      break;
  }
}

inline std::size_t q_poly_node(const ExprPtr& e, std::vector<DerivationStep>& steps);

inline std::size_t q_poly_join_like(const ExprPtr& e, std::vector<DerivationStep>& steps) {
  JoinParts parts;
  collect_join_parts(e, parts);
  if (parts.inner.size() > 1)
    throw JoinRuleError("join rule needs at most one non-K1 operand after flattening, found " +
                        std::to_string(parts.inner.size()));
  std::size_t cur;
  int joins;
  if (parts.inner.empty()) {
    steps.push_back({RuleKind::Base, {}, Polynomial(1), "K1"});
    cur = steps.size() - 1;
    joins = parts.k1 - 1;
  } else {
    cur = q_poly_node(parts.inner.front(), steps);
    joins = parts.k1;
  }
  for (int i = 0; i < joins; ++i) {
    steps.push_back({RuleKind::Join, {cur}, join_rule(steps[cur].poly), ""});
    cur = steps.size() - 1;
  }
  return cur;
}

inline std::size_t q_poly_node(const ExprPtr& e, std::vector<DerivationStep>& steps) {
  switch (e->kind) {
    case GraphExpr::Kind::X:
      throw ExplicitLeafError("explicit graph leaves have no polynomial rule; use the search");
    case GraphExpr::Kind::Union: {
      std::vector<std::size_t> kids;
      Polynomial sum;
      for (const auto& c : e->children) {
        kids.push_back(q_poly_node(c, steps));
        sum = sum + steps[kids.back()].poly;
      }
      steps.push_back({RuleKind::Union, std::move(kids), std::move(sum), ""});
      return steps.size() - 1;
    }
    default:
      return q_poly_join_like(e, steps);
  }
}

}  // namespace detail

// Evaluates the recursion q_{K1} = 1, q union = sum, q_{K1+G} via the join
// rule, over an expression in which every join has at most one non-K1
// operand after flattening.
inline BoundDerivation q_poly(const ExprPtr& e) {
  BoundDerivation d;
  d.expr = e;
  const std::size_t root = detail::q_poly_node(e, d.steps);
  d.poly = d.steps[root].poly;
  return d;
}

// Recomputes every step from its children and compares against the stored
// polynomials.
inline bool replay_derivation(const BoundDerivation& d) {
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const DerivationStep& s = d.steps[i];
    for (std::size_t c : s.children)
      if (c >= i) return false;
    Polynomial expect;
    switch (s.rule) {
      case RuleKind::Base:
        if (!s.children.empty()) return false;
        expect = Polynomial(1);
        break;
      case RuleKind::Union:
        for (std::size_t c : s.children) expect = expect + d.steps[c].poly;
        break;
      case RuleKind::Join:
        if (s.children.size() != 1) return false;
        expect = join_rule(d.steps[s.children[0]].poly);
        break;
      case RuleKind::Subgraph:
        if (s.children.size() != 1) return false;
        expect = d.steps[s.children[0]].poly;
        break;
    }
    if (!(expect == s.poly)) return false;
  }
  return !d.steps.empty() && d.steps.back().poly == d.poly;
}

inline std::string render_derivation(const BoundDerivation& d) {
  std::string out;
  auto rec = [&](auto&& self, std::size_t idx, int depth) -> void {
    const DerivationStep& s = d.steps[idx];
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += rule_name(s.rule);
    out += "  ";
    out += s.poly.text();
    if (!s.note.empty()) {
      out += "  [";
      out += s.note;
      out += "]";
    }
    out += "\n";
    for (std::size_t c : s.children) self(self, c, depth + 1);
  };
  if (!d.steps.empty()) rec(rec, d.steps.size() - 1, 0);
  return out;
}

enum class SearchMode { Value, Asymptotic };

namespace detail {

struct SearchEntry {
  Polynomial poly;
  BigInt value;
  ExprPtr expr;
};

}  // namespace detail

// Best derivation over the decomposition class "union rule on disconnected
// induced subgraphs + single-vertex join peeling", memoized over vertex
// bitmasks of g. Value mode minimizes the evaluation at b; asymptotic mode
// compares degree then leading coefficients. Ties break toward the smallest
// removed vertex index.
inline BoundDerivation q_search(const Graph& g, long long b, SearchMode mode = SearchMode::Value) {
  if (g.n < 1) throw InputError("search needs a nonempty graph");
  if (g.n > 16)
    throw SizeLimitError("search guard: graph has " + std::to_string(g.n) + " vertices, limit is 16");
  if (b < 1) throw InputError("search needs b >= 1");
  const BigInt bb(b);

  std::vector<std::uint32_t> adj(static_cast<std::size_t>(g.n), 0);
  for (const auto& [u, v] : g.edges) {
    adj[static_cast<std::size_t>(u)] |= 1u << v;
    adj[static_cast<std::size_t>(v)] |= 1u << u;
  }

  auto component_of = [&](std::uint32_t mask, int start) {
    std::uint32_t comp = 1u << start, frontier = comp;
    while (frontier) {
      std::uint32_t next = 0;
      std::uint32_t f = frontier;
      while (f) {
        const int v = __builtin_ctz(f);
        f &= f - 1;
        next |= adj[static_cast<std::size_t>(v)] & mask & ~comp;
      }
      comp |= next;
      frontier = next;
    }
    return comp;
  };

  std::vector<std::optional<detail::SearchEntry>> memo(std::size_t{1} << g.n);

  auto solve = [&](auto&& self, std::uint32_t mask) -> const detail::SearchEntry& {
    auto& slot = memo[mask];
    if (slot) return *slot;
    detail::SearchEntry entry;
    if (__builtin_popcount(mask) == 1) {
      entry = {Polynomial(1), BigInt(1), GraphExpr::k(1)};
    } else {
      const std::uint32_t first_comp = component_of(mask, __builtin_ctz(static_cast<unsigned>(mask)));
      if (first_comp != mask) {
        // Disconnected: the union rule sums over components.
        std::vector<ExprPtr> kids;
        Polynomial poly;
        BigInt value = 0;
        std::uint32_t rest = mask;
        while (rest) {
          const std::uint32_t comp = component_of(rest, __builtin_ctz(static_cast<unsigned>(rest)));
          const auto& sub = self(self, comp);
          kids.push_back(sub.expr);
          poly = poly + sub.poly;
          value += sub.value;
          rest &= ~comp;
        }
        entry = {std::move(poly), std::move(value), GraphExpr::disjoint_union(std::move(kids))};
      } else {
        // Connected: peel one vertex through the join rule, keep the best.
        bool have = false;
        std::uint32_t scan = mask;
        while (scan) {
          const int v = __builtin_ctz(static_cast<unsigned>(scan));
          scan &= scan - 1;
          const auto& sub = self(self, mask & ~(1u << v));
          Polynomial cand_poly = join_rule(sub.poly);
          BigInt cand_value = join_rule_value(sub.value, bb);
          if (cand_value < sub.value)
            throw Error("internal: join step decreased the search value");
          bool better = !have;
          if (have) {
            better = mode == SearchMode::Value ? cand_value < entry.value
                                               : compare_asymptotic(cand_poly, entry.poly) < 0;
          }
          if (better) {
            entry = {std::move(cand_poly), std::move(cand_value),
                     GraphExpr::join({GraphExpr::k(1), sub.expr})};
            have = true;
          }
        }
      }
    }
    slot = std::move(entry);
    return *slot;
  };

  const std::uint32_t full = g.n == 32 ? ~0u : (1u << g.n) - 1;
  const detail::SearchEntry& best = solve(solve, full);

  BoundDerivation d = q_poly(best.expr);
  if (!(d.poly == best.poly)) throw Error("internal: search polynomial does not replay");
  d.steps.push_back({RuleKind::Subgraph, {d.steps.size() - 1}, d.poly,
                     "input graph embeds into the realized expression"});
  return d;
}

inline BigInt q_search_value(const Graph& g, long long b, SearchMode mode = SearchMode::Value) {
  return q_search(g, b, mode).poly.eval(BigInt(b));
}

// True iff deg(poly) <= 2|V| - 3 for the realized expression; single-vertex
// inputs are rejected because the clause starts at two vertices.
inline bool degree_check(const BoundDerivation& d) {
  const int n = realize(d.expr).n;
  if (n < 2) throw InputError("degree bound applies to graphs with at least 2 vertices");
  return d.poly.degree() <= 2 * n - 3;
}

// Topological space selector for the forbidden-graph catalog.
struct SpaceTag {
  enum class Kind { R1, S1, R2, N, M, Star, PinchedTorus };
  Kind kind = Kind::R1;
  int param = 0;  // genus for N/M, leaf count for Star

  std::string text() const {
    switch (kind) {
      case Kind::R1: return "R1";
      case Kind::S1: return "S1";
      case Kind::R2: return "R2";
      case Kind::N: return "N(" + std::to_string(param) + ")";
      case Kind::M: return "M(" + std::to_string(param) + ")";
      case Kind::Star: return "STAR(" + std::to_string(param) + ")";
      default: return "PINCHED_TORUS";
    }
  }

  static SpaceTag parse(const std::string& s) {
    auto param_of = [&](std::size_t prefix) {
      std::string rest = s.substr(prefix);
      if (!rest.empty() && rest.front() == '(' && rest.back() == ')')
        rest = rest.substr(1, rest.size() - 2);
      if (rest.empty()) throw InputError("space tag '" + s + "' needs a parameter");
      for (char c : rest)
        if (!std::isdigit(static_cast<unsigned char>(c)))
          throw InputError("bad parameter in space tag '" + s + "'");
      return std::stoi(rest);
    };
    if (s == "R1") return {Kind::R1, 0};
    if (s == "S1") return {Kind::S1, 0};
    if (s == "R2") return {Kind::R2, 0};
    if (s == "PINCHED_TORUS") return {Kind::PinchedTorus, 0};
    if (s.rfind("STAR", 0) == 0) {
      const int n = param_of(4);
      if (n < 1) throw InputError("STAR needs n >= 1");
      return {Kind::Star, n};
    }
    if (!s.empty() && (s[0] == 'N' || s[0] == 'M')) {
      const int gen = param_of(1);
      if (gen < 1) throw InputError("surface genus must be >= 1");
      return {s[0] == 'N' ? Kind::N : Kind::M, gen};
    }
    throw InputError("unknown space tag '" + s + "'");
  }
};

struct CatalogEntry {
  ExprPtr expr;
  Polynomial poly;
  BigInt value;
};

struct CatalogResult {
  BigInt value;
  ExprPtr winner;
  std::vector<CatalogEntry> all;
};

// Non-almost-embeddable graphs per space, as join/union decompositions.
inline std::vector<ExprPtr> catalog_expressions(const SpaceTag& tag) {
  const std::string k33 = "J(U(K1,K1,K1),K1,K1,K1)";
  auto copies = [&](int t) { return std::to_string(t) + "*" + k33; };
  switch (tag.kind) {
    case SpaceTag::Kind::R1: return {parse_expr("K3"), parse_expr("J(K1,U(K1,K1,K1))")};
    case SpaceTag::Kind::S1: return {parse_expr("U(K1,K3)"), parse_expr("J(K1,U(K1,K1,K1))")};
    case SpaceTag::Kind::R2: return {parse_expr("J(K2,K1,K1,K1)"), parse_expr(k33)};
    case SpaceTag::Kind::N: return {parse_expr(copies(tag.param + 1))};
    case SpaceTag::Kind::M: return {parse_expr(copies(2 * tag.param + 1))};
    case SpaceTag::Kind::Star: {
      std::string ones = "K1";
      for (int i = 0; i < tag.param; ++i) ones += ",K1";
      return {parse_expr("J(K1,U(" + ones + "))")};
    }
    default: return {parse_expr("K8")};
  }
}

// Minimum q value over the catalog of the tag; ties keep the first entry.
inline CatalogResult catalog_bound(const SpaceTag& tag, long long b) {
  if (b < 1) throw InputError("catalog needs b >= 1");
  CatalogResult res;
  for (const ExprPtr& e : catalog_expressions(tag)) {
    BoundDerivation d = q_poly(e);
    BigInt v = d.poly.eval(BigInt(b));
    res.all.push_back({e, d.poly, v});
    if (!res.winner || v < res.value) {
      res.value = v;
      res.winner = e;
    }
  }
  return res;
}

}  // namespace qradon
