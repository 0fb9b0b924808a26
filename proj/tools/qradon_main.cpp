// Command-line surface: every capability of the library behind one binary
// with deterministic, machine-readable output.
//
// Exit codes: 0 success (including PASS and NOT-APPLICABLE verdicts),
// 1 computed FAIL (failed verification or validation), 2 input errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qradon/qradon.hpp"

namespace {

using namespace qradon;

constexpr int kOk = 0;
constexpr int kComputedFail = 1;
constexpr int kInputError = 2;

IndexSet parse_point_list(const SetFamily& fam, const std::string& csv) {
  IndexSet out(static_cast<std::size_t>(fam.space->vertex_count()));
  std::stringstream ss(csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.erase(name.begin());
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    if (name.empty()) throw InputError("empty point name in --points");
    out.set(static_cast<std::size_t>(fam.space->vertex_index(name)));
  }
  return out;
}

std::string format_vertex_list(const SetFamily& fam, const std::vector<int>& vs) {
  std::string out;
  for (int v : vs) {
    if (!out.empty()) out += " ";
    out += fam.space->vertices[static_cast<std::size_t>(v)];
  }
  return out;
}

std::string format_region_vertices(const Region& r) {
  std::string out = "[";
  bool first = true;
  r.verts.for_each([&](int v) {
    if (!first) out += ",";
    out += r.space->vertices[static_cast<std::size_t>(v)];
    first = false;
  });
  return out + "]";
}

struct BoundArgs {
  std::string expr;
  std::int64_t b = -1;
  bool coeffs = false;
  bool json = false;
};

int run_bound(const BoundArgs& a) {
  ExprPtr e = parse_expr(a.expr, load_graph_file);
  BoundDerivation d = q_poly(e);
  if (a.json) {
    Json j = polynomial_to_json(d.poly);
    j["expr"] = print_expr(e);
    j["degree"] = d.poly.degree();
    if (a.b >= 0) {
      j["b"] = a.b;
      j["value"] = bigint_to_json(d.poly.eval(BigInt(a.b)));
    }
    std::cout << j.dump() << "\n";
    return kOk;
  }
  if (a.coeffs || a.b < 0) std::cout << d.poly.text() << "\n";
  if (a.b >= 0) std::cout << d.poly.eval(BigInt(a.b)).str() << "\n";
  return kOk;
}

struct SearchArgs {
  std::string graph_file;
  std::int64_t b = 1;
  std::string mode = "value";
  bool json = false;
};

int run_search(const SearchArgs& a) {
  const Graph g = load_graph_file(a.graph_file);
  const SearchMode mode = a.mode == "asymptotic" ? SearchMode::Asymptotic : SearchMode::Value;
  BoundDerivation d = q_search(g, a.b, mode);
  const BigInt value = d.poly.eval(BigInt(a.b));
  if (a.json) {
    Json j;
    j["value"] = bigint_to_json(value);
    j["poly"] = polynomial_to_json(d.poly);
    j["expr"] = print_expr(d.expr);
    Json steps = Json::array();
    for (const auto& s : d.steps) {
      Json js;
      js["rule"] = rule_name(s.rule);
      js["children"] = s.children;
      js["poly"] = s.poly.text();
      steps.push_back(std::move(js));
    }
    j["derivation"] = std::move(steps);
    std::cout << j.dump() << "\n";
    return kOk;
  }
  std::cout << "value " << value.str() << "\n";
  std::cout << "poly " << d.poly.text() << "\n";
  std::cout << "expr " << print_expr(d.expr) << "\n";
  std::cout << render_derivation(d);
  return kOk;
}

struct CatalogArgs {
  std::string space;
  std::int64_t b = 1;
  bool json = false;
};

int run_catalog(const CatalogArgs& a) {
  const SpaceTag tag = SpaceTag::parse(a.space);
  const CatalogResult res = catalog_bound(tag, a.b);
  if (a.json) {
    Json j;
    j["space"] = tag.text();
    j["b"] = a.b;
    j["value"] = bigint_to_json(res.value);
    j["winner"] = print_expr(res.winner);
    Json all = Json::array();
    for (const auto& entry : res.all)
      all.push_back(Json{{"expr", print_expr(entry.expr)},
                         {"poly", entry.poly.text()},
                         {"value", bigint_to_json(entry.value)}});
    j["all"] = std::move(all);
    std::cout << j.dump() << "\n";
    return kOk;
  }
  std::cout << res.value.str() << " via " << print_expr(res.winner) << "\n";
  for (const auto& entry : res.all)
    std::cout << "  " << print_expr(entry.expr) << " = " << entry.value.str() << "\n";
  return kOk;
}

struct ExactArgs {
  std::string family_file;
  bool all = false, radon = false, helly = false, tc1_only = false, levi = false;
  bool json = false;
};

int run_exact(const ExactArgs& a) {
  const SetFamily fam = load_family_file(a.family_file);
  const bool everything = a.all || (!a.radon && !a.helly && !a.tc1_only && !a.levi);
  if (a.json) {
    Json j;
    if (everything) {
      j = exact_report_to_json(fam, exact_report(fam));
    } else {
      if (a.radon) {
        const RadonResult r = radon_number(fam);
        if (r.unbounded)
          j["radon"] = "unbounded";
        else
          j["radon"] = r.value;
      }
      if (a.helly) j["helly"] = helly_number(fam).value;
      if (a.tc1_only) j["tc1"] = tc1(fam);
      if (a.levi) j["levi"] = levi_check(fam);
    }
    std::cout << j.dump() << "\n";
    return kOk;
  }
  if (everything) {
    const ExactReport rep = exact_report(fam);
    if (rep.radon.unbounded)
      std::cout << "radon unbounded\n";
    else
      std::cout << "radon " << rep.radon.value << "\n";
    std::cout << "radon_witness " << format_vertex_list(fam, rep.radon.witness) << "\n";
    std::cout << "helly " << rep.helly.value << "\n";
    if (!rep.helly.witness.empty()) {
      std::cout << "helly_witness";
      for (const Region& r : rep.helly.witness) std::cout << " " << format_region_vertices(r);
      std::cout << "\n";
    }
    std::cout << "tc1 " << rep.tc1 << "\n";
    std::cout << "levi " << (rep.levi ? "true" : "false") << "\n";
    return kOk;
  }
  if (a.radon) {
    const RadonResult r = radon_number(fam);
    if (r.unbounded)
      std::cout << "radon unbounded\n";
    else
      std::cout << "radon " << r.value << "\n";
  }
  if (a.helly) std::cout << "helly " << helly_number(fam).value << "\n";
  if (a.tc1_only) std::cout << "tc1 " << tc1(fam) << "\n";
  if (a.levi) std::cout << "levi " << (levi_check(fam) ? "true" : "false") << "\n";
  return kOk;
}

struct ConstructArgs {
  std::string expr;
  std::string family_file;
  std::string points;
  bool check_ae = false;
  bool json = false;
};

int run_construct(const ConstructArgs& a) {
  const SetFamily fam = load_family_file(a.family_file);
  const ExprPtr e = parse_expr(a.expr, load_graph_file);
  IndexSet p(static_cast<std::size_t>(fam.space->vertex_count()));
  if (!a.points.empty()) {
    p = parse_point_list(fam, a.points);
  } else {
    // Default: the lexicographically smallest admissible point set.
    const int b = tc1(fam) + 1;
    const BigInt need = q_poly(e).poly.eval(BigInt(b));
    if (BigInt(fam.space->vertex_count()) < need)
      throw InsufficientPointsError("family space has fewer than " + need.str() + " points");
    const long long take = need.convert_to<long long>();
    for (long long i = 0; i < take; ++i) p.set(static_cast<std::size_t>(i));
  }
  const ConstrainedMap cm = build_constrained(e, fam, p);
  const ClosureOracle oracle = family_oracle(fam);
  const ValidationResult vc = validate_constrained(cm, oracle);
  if (!vc) throw Error("internal: built map fails condition (" + vc.condition + "): " + vc.detail);
  std::optional<ValidationResult> ae;
  if (a.check_ae) ae = validate_almost_embedding(cm);

  if (a.json) {
    Json j;
    j["map"] = cmap_to_json(cm);
    j["constrained"] = true;
    if (ae) {
      j["almost_embedding"] = ae->ok;
      if (!ae->ok) j["almost_embedding_failure"] = ae->detail;
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "constrained true\n";
    for (int v = 0; v < cm.graph.n; ++v)
      std::cout << "vertex " << cm.vertex_label(v) << " -> "
                << fam.space->vertices[static_cast<std::size_t>(cm.vertex_image[static_cast<std::size_t>(v)])]
                << "\n";
    for (const auto& [edge, walk] : cm.edge_image) {
      std::cout << "edge " << cm.vertex_label(edge.first) << "-" << cm.vertex_label(edge.second) << " walk ";
      for (std::size_t i = 0; i < walk.verts.size(); ++i) {
        if (i) std::cout << ",";
        std::cout << fam.space->vertices[static_cast<std::size_t>(walk.verts[i])];
      }
      std::cout << " phi ";
      bool first = true;
      cm.phi_edge.at(edge).for_each([&](int pt) {
        if (!first) std::cout << ",";
        std::cout << fam.space->vertices[static_cast<std::size_t>(pt)];
        first = false;
      });
      std::cout << "\n";
    }
    if (ae) {
      std::cout << "almost_embedding " << (ae->ok ? "true" : "false") << "\n";
      if (!ae->ok) std::cout << "almost_embedding_failure " << ae->detail << "\n";
    }
  }
  return ae && !ae->ok ? kComputedFail : kOk;
}

struct VerifyArgs {
  std::string family_file;
  std::string expr;
  bool json = false;
};

int run_verify(const VerifyArgs& a) {
  const SetFamily fam = load_family_file(a.family_file);
  const ExprPtr e = parse_expr(a.expr, load_graph_file);
  const TheoremReport rep = verify_main_theorem(fam, e);
  if (a.json) {
    std::cout << theorem_report_to_json(fam, rep).dump() << "\n";
  } else {
    std::cout << "b " << rep.b << "\n";
    std::cout << "bound " << rep.bound.str() << "\n";
    if (rep.radon.unbounded)
      std::cout << "radon unbounded\n";
    else
      std::cout << "radon " << rep.radon.value << "\n";
    std::cout << "verdict " << verdict_name(rep.verdict) << "\n";
  }
  return rep.verdict == Verdict::Fail ? kComputedFail : kOk;
}

struct GenArgs {
  std::string kind;
  std::string out;
  std::int64_t n = 0, k = 0, m = 0, sets = 4;
  std::uint64_t seed = 0;
  double prob = 0.5;
  bool json = false;
};

int run_gen(const GenArgs& a) {
  SetFamily fam;
  if (a.kind == "intervals") {
    fam = gen_intervals(static_cast<int>(a.m > 0 ? a.m : a.n));
  } else if (a.kind == "multipath") {
    fam = gen_multipath(static_cast<int>(a.k), static_cast<int>(a.m));
  } else if (a.kind == "lowerbound") {
    fam = gen_lowerbound(static_cast<int>(a.n));
  } else if (a.kind == "random") {
    RandomFamilyParams params;
    params.seed = a.seed;
    params.vertices = static_cast<int>(a.n > 0 ? a.n : 8);
    params.edge_prob = a.prob;
    params.sets = static_cast<int>(a.sets);
    fam = gen_random(params);
  } else {
    throw InputError("unknown generator kind '" + a.kind + "'");
  }
  const Json j = family_to_json(fam);
  std::ofstream out(a.out);
  if (!out) throw InputError("cannot write family file '" + a.out + "'");
  out << j.dump(2) << "\n";
  out.close();
  if (a.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << "wrote " << a.out << " members " << fam.size() << " vertices "
              << fam.space->vertex_count() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radon-number bounds and exact invariants of finite convexity spaces"};
  app.require_subcommand(1);

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "Evaluate the q polynomial of a graph expression");
  bound->add_option("--expr", bound_args.expr, "graph expression")->required();
  bound->add_option("--b", bound_args.b, "evaluate at b");
  bound->add_flag("--coeffs", bound_args.coeffs, "print the polynomial");
  bound->add_flag("--json", bound_args.json, "machine output");

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "Search decompositions of an explicit graph");
  search->add_option("--graph", search_args.graph_file, "graph JSON file")->required();
  search->add_option("--b", search_args.b, "target b")->required();
  search->add_option("--mode", search_args.mode, "value|asymptotic")
      ->check(CLI::IsMember({"value", "asymptotic"}));
  search->add_flag("--json", search_args.json, "machine output");

  CatalogArgs catalog_args;
  auto* catalog = app.add_subcommand("catalog", "Bound from the forbidden-graph catalog of a space");
  catalog->add_option("--space", catalog_args.space, "R1|S1|R2|N(g)|M(g)|STAR(n)|PINCHED_TORUS")->required();
  catalog->add_option("--b", catalog_args.b, "evaluate at b")->required();
  catalog->add_flag("--json", catalog_args.json, "machine output");

  ExactArgs exact_args;
  auto* exact = app.add_subcommand("exact", "Exact invariants of a family by enumeration");
  exact->add_option("--family", exact_args.family_file, "family JSON file")->required();
  exact->add_flag("--all", exact_args.all, "all invariants (default)");
  exact->add_flag("--radon", exact_args.radon, "Radon number only");
  exact->add_flag("--helly", exact_args.helly, "Helly number only");
  exact->add_flag("--tc1", exact_args.tc1_only, "TC1 only");
  exact->add_flag("--levi", exact_args.levi, "Levi inequality only");
  exact->add_flag("--json", exact_args.json, "machine output");

  ConstructArgs construct_args;
  auto* construct = app.add_subcommand("construct", "Build a constrained drawing of an expression");
  construct->add_option("--expr", construct_args.expr, "graph expression")->required();
  construct->add_option("--family", construct_args.family_file, "family JSON file")->required();
  construct->add_option("--points", construct_args.points, "comma-separated point names");
  construct->add_flag("--check-ae", construct_args.check_ae, "also check the almost-embedding conditions");
  construct->add_flag("--json", construct_args.json, "machine output");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check the exact Radon number against the q bound");
  verify->add_option("--family", verify_args.family_file, "family JSON file")->required();
  verify->add_option("--expr", verify_args.expr, "graph expression")->required();
  verify->add_flag("--json", verify_args.json, "machine output");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a family as JSON");
  gen->add_option("--kind", gen_args.kind, "intervals|multipath|lowerbound|random")->required();
  gen->add_option("--out", gen_args.out, "output file")->required();
  gen->add_option("--n", gen_args.n, "vertex count (lowerbound, random)");
  gen->add_option("--k", gen_args.k, "path count (multipath)");
  gen->add_option("--m", gen_args.m, "path length (intervals, multipath)");
  gen->add_option("--seed", gen_args.seed, "seed (random)");
  gen->add_option("--sets", gen_args.sets, "set count (random)");
  gen->add_option("--prob", gen_args.prob, "edge probability (random)");
  gen->add_flag("--json", gen_args.json, "also print the family JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*bound) return run_bound(bound_args);
    if (*search) return run_search(search_args);
    if (*catalog) return run_catalog(catalog_args);
    if (*exact) return run_exact(exact_args);
    if (*construct) return run_construct(construct_args);
    if (*verify) return run_verify(verify_args);
    if (*gen) return run_gen(gen_args);
  } catch (const qradon::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
