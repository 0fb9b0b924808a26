#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qradon/bounds.hpp"
#include "qradon/errors.hpp"
#include "qradon/space.hpp"

namespace qradon {

namespace detail {

// Vertex sets of closures, memoized per vertex bitmask. Only valid for
// spaces with at most 16 vertices; emptiness and splitting questions depend
// on vertex sets alone because regions are incidence-closed.
class ClosureVsetCache {
 public:
  explicit ClosureVsetCache(const SetFamily& fam) {
    const int n = fam.space->vertex_count();
    if (n > 16)
      throw SizeLimitError("exact engine guard: space has " + std::to_string(n) +
                           " vertices, limit is 16");
    n_ = n;
    full_ = n == 0 ? 0 : (std::uint32_t{1} << n) - 1;
    member_vsets_.reserve(fam.members.size());
    for (const Region& m : fam.members) {
      std::uint32_t mask = 0;
      m.verts.for_each([&](int v) { mask |= std::uint32_t{1} << v; });
      member_vsets_.push_back(mask);
    }
    memo_.assign(std::size_t{1} << n, kUnset);
  }

  int vertex_count() const { return n_; }
  std::uint32_t full_mask() const { return full_; }

  std::uint32_t get(std::uint32_t point_mask) {
    std::uint64_t& slot = memo_[point_mask];
    if (slot == kUnset) {
      std::uint32_t res = full_;
      for (std::uint32_t mv : member_vsets_)
        if ((point_mask & mv) == point_mask) res &= mv;
      slot = res;
    }
    return static_cast<std::uint32_t>(slot);
  }

 private:
  static constexpr std::uint64_t kUnset = ~std::uint64_t{0};
  int n_ = 0;
  std::uint32_t full_ = 0;
  std::vector<std::uint32_t> member_vsets_;
  std::vector<std::uint64_t> memo_;
};

// True iff S admits a partition into two nonempty parts with intersecting
// closures.
inline bool splits(ClosureVsetCache& cache, std::uint32_t s) {
  if (__builtin_popcount(s) < 2) return false;
  // Fix the lowest bit into the first part to halve the sweep.
  const std::uint32_t low = s & (~s + 1);
  const std::uint32_t rest = s & ~low;
  for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
    const std::uint32_t s1 = low | sub;
    const std::uint32_t s2 = s & ~s1;
    if (s2 != 0 && (cache.get(s1) & cache.get(s2)) != 0) return true;
    if (sub == 0) break;
  }
  return false;
}

}  // namespace detail

struct RadonResult {
  bool unbounded = false;
  int value = 0;                // meaningful when !unbounded
  std::vector<int> witness;     // an unsplittable vertex set backing the value
};

// Smallest r such that every r-subset of the space vertices splits into two
// disjoint nonempty parts with intersecting closures. Splittability is
// preserved under adding points, so checking size exactly r suffices.
// Returns the unbounded sentinel when even the full vertex set fails.
inline RadonResult radon_number(const SetFamily& fam) {
  detail::ClosureVsetCache cache(fam);
  const int n = cache.vertex_count();
  RadonResult res;
  std::vector<int> last_failure;
  for (int r = 1; r <= n; ++r) {
    bool all_split = true;
    // Gosper's hack walks the r-subsets in ascending mask order.
    for (std::uint32_t s = (std::uint32_t{1} << r) - 1; s <= cache.full_mask() && s != 0;) {
      if (!detail::splits(cache, s)) {
        all_split = false;
        last_failure.clear();
        for (int v = 0; v < n; ++v)
          if (s & (std::uint32_t{1} << v)) last_failure.push_back(v);
        break;
      }
      const std::uint32_t c = s & (~s + 1);
      const std::uint32_t rp = s + c;
      const std::uint32_t next = rp | (((s ^ rp) >> 2) / c);
      if (next <= s) break;
      s = next;
    }
    if (all_split) {
      res.value = r;
      res.witness = last_failure;  // an (r-1)-set that does not split
      return res;
    }
  }
  res.unbounded = true;
  res.witness = last_failure;
  return res;
}

struct HellyResult {
  int value = 1;
  // Minimal empty-intersecting subfamily of distinct closed sets backing the
  // value; empty when no subfamily has empty intersection.
  std::vector<Region> witness;
};

// Helly number via free sets: h is the largest |W| such that no w lies in
// conv(W - w) and the conv(W - w) intersect emptily; the witness family
// {conv(W - w)} is then an inclusion-minimal empty-intersecting family of
// distinct closed sets of that size, and every such family arises this way.
inline HellyResult helly_number(const SetFamily& fam) {
  detail::ClosureVsetCache cache(fam);
  const int n = cache.vertex_count();
  HellyResult res;
  std::uint32_t best_mask = 0;
  int best = 0;
  for (std::uint32_t w = 1; w <= cache.full_mask() && w != 0; ++w) {
    const int size = __builtin_popcount(w);
    if (size <= best) continue;
    std::uint32_t inter = cache.full_mask();
    bool ok = true;
    for (std::uint32_t rest = w; rest;) {
      const std::uint32_t bit = rest & (~rest + 1);
      rest &= ~bit;
      const std::uint32_t hull = cache.get(w & ~bit);
      if (hull & bit) {
        ok = false;
        break;
      }
      inter &= hull;
    }
    if (ok && inter == 0) {
      best = size;
      best_mask = w;
    }
  }
  if (best == 0) return res;  // no empty-intersecting subfamily: h = 1
  res.value = best;
  for (int v = 0; v < n; ++v) {
    if (!(best_mask & (std::uint32_t{1} << v))) continue;
    IndexSet pts(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u)
      if (u != v && (best_mask & (std::uint32_t{1} << u))) pts.set(static_cast<std::size_t>(u));
    res.witness.push_back(closure(fam, pts));
  }
  return res;
}

// True iff closures of every pair of disjoint subsets of P (including the
// empty set) have empty regionwise intersection.
inline bool separated(const SetFamily& fam, const IndexSet& p) {
  const std::vector<int> pts = p.to_vector();
  const int k = static_cast<int>(pts.size());
  if (k > 12)
    throw SizeLimitError("separated guard: |P| = " + std::to_string(k) + ", limit is 12");
  const std::uint32_t full = k == 0 ? 0 : (std::uint32_t{1} << k) - 1;
  std::vector<IndexSet> hull_vsets(std::size_t{1} << k);
  for (std::uint32_t sub = 0; sub <= full; ++sub) {
    IndexSet s(static_cast<std::size_t>(fam.space->vertex_count()));
    for (int i = 0; i < k; ++i)
      if (sub & (std::uint32_t{1} << i)) s.set(static_cast<std::size_t>(pts[static_cast<std::size_t>(i)]));
    hull_vsets[sub] = closure(fam, s).verts;
    if (k == 0) break;
  }
  for (std::uint32_t u = 0; u <= full; ++u) {
    const std::uint32_t rest = full & ~u;
    for (std::uint32_t v = rest;; v = (v - 1) & rest) {
      if (hull_vsets[u].intersects(hull_vsets[v])) return false;
      if (v == 0) break;
    }
    if (k == 0) break;
  }
  return true;
}

struct ExactReport {
  RadonResult radon;
  HellyResult helly;
  int tc1 = 0;
  bool levi = true;
};

// The Levi inequality h + 1 <= r, with the unbounded sentinel as infinity.
inline bool levi_holds(const HellyResult& h, const RadonResult& r) {
  return r.unbounded || h.value + 1 <= r.value;
}

inline ExactReport exact_report(const SetFamily& fam) {
  ExactReport rep;
  rep.radon = radon_number(fam);
  rep.helly = helly_number(fam);
  rep.tc1 = tc1(fam);
  rep.levi = levi_holds(rep.helly, rep.radon);
  return rep;
}

inline bool levi_check(const SetFamily& fam) {
  return levi_holds(helly_number(fam), radon_number(fam));
}

enum class Verdict { Pass, Fail, NotApplicable };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    default: return "NOT-APPLICABLE";
  }
}

struct TheoremReport {
  int b = 1;
  BigInt bound;
  RadonResult radon;
  Verdict verdict = Verdict::Pass;
};

// Compares the exact Radon number against the q bound evaluated at
// b = TC1 + 1. An unbounded exact value reports NOT-APPLICABLE: whether the
// expression's graph almost-embeds into the space is the caller's business.
inline TheoremReport verify_main_theorem(const SetFamily& fam, const ExprPtr& e) {
  TheoremReport rep;
  rep.b = tc1(fam) + 1;
  rep.bound = q_poly(e).poly.eval(BigInt(rep.b));
  rep.radon = radon_number(fam);
  if (rep.radon.unbounded)
    rep.verdict = Verdict::NotApplicable;
  else
    rep.verdict = rep.radon.value <= rep.bound ? Verdict::Pass : Verdict::Fail;
  return rep;
}

}  // namespace qradon
