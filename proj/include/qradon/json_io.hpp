#pragma once

#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qradon/bounds.hpp"
#include "qradon/constrained.hpp"
#include "qradon/errors.hpp"
#include "qradon/exact.hpp"
#include "qradon/graph.hpp"
#include "qradon/polynomial.hpp"
#include "qradon/space.hpp"

namespace qradon {

using Json = nlohmann::json;

inline Json bigint_to_json(const BigInt& v) {
  static const BigInt lo(std::numeric_limits<std::int64_t>::min());
  static const BigInt hi(std::numeric_limits<std::int64_t>::max());
  if (v >= lo && v <= hi) return v.convert_to<std::int64_t>();
  return v.str();
}

inline BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw InputError("expected an integer or a decimal string");
}

inline Json polynomial_to_json(const Polynomial& p) {
  Json coeffs = Json::array();
  for (const BigInt& c : p.coeffs()) coeffs.push_back(bigint_to_json(c));
  return Json{{"coeffs", std::move(coeffs)}};
}

inline Polynomial polynomial_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j.at("coeffs").is_array())
    throw InputError("polynomial JSON needs a \"coeffs\" array");
  std::vector<BigInt> coeffs;
  for (const Json& c : j.at("coeffs")) coeffs.push_back(bigint_from_json(c));
  return Polynomial::from_coeffs(std::move(coeffs));
}

// Graph JSON: {"vertices":["a","b",...],"edges":[["a","b"],...]} with
// lexicographically sorted vertex names.
inline Graph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw InputError("graph JSON needs \"vertices\" and \"edges\"");
  std::vector<std::string> names = j.at("vertices").get<std::vector<std::string>>();
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw InputError("duplicate vertex name in graph JSON");
  auto index_of = [&](const std::string& name) {
    auto it = std::lower_bound(names.begin(), names.end(), name);
    if (it == names.end() || *it != name) throw InputError("unknown vertex name '" + name + "' in graph JSON");
    return static_cast<int>(it - names.begin());
  };
  Graph g = Graph::empty(static_cast<int>(names.size()));
  g.names = names;
  for (const Json& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw InputError("graph edge must be a pair of names");
    g.add_edge(index_of(e.at(0).get<std::string>()), index_of(e.at(1).get<std::string>()));
  }
  g.normalize();
  return g;
}

inline Json graph_to_json(const Graph& g) {
  Json vertices = Json::array();
  for (int i = 0; i < g.n; ++i) vertices.push_back(g.vertex_name(i));
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges) edges.push_back(Json::array({g.vertex_name(u), g.vertex_name(v)}));
  return Json{{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

inline Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw InputError("bad JSON in '" + path + "': " + e.what());
  }
  return graph_from_json(j);
}

// Family JSON:
// {"space":{"vertices":[...],"edges":[...]},
//  "sets":[{"name":"F1","vertices":[...],"edges":[[..],..]},...],
//  "closed_under_intersection":false}
inline SetFamily family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("sets"))
    throw InputError("family JSON needs \"space\" and \"sets\"");
  const Json& sj = j.at("space");
  if (!sj.is_object() || !sj.contains("vertices") || !sj.contains("edges"))
    throw InputError("family space needs \"vertices\" and \"edges\"");
  std::vector<std::pair<std::string, std::string>> edges;
  for (const Json& e : sj.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw InputError("space edge must be a pair of names");
    edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  }
  SetFamily fam;
  fam.space = make_space(sj.at("vertices").get<std::vector<std::string>>(), edges);
  for (const Json& set : j.at("sets")) {
    if (!set.is_object() || !set.contains("name"))
      throw InputError("family set needs a \"name\"");
    std::vector<std::pair<std::string, std::string>> redges;
    if (set.contains("edges"))
      for (const Json& e : set.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw InputError("set edge must be a pair of names");
        redges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
      }
    std::vector<std::string> rverts;
    if (set.contains("vertices")) rverts = set.at("vertices").get<std::vector<std::string>>();
    fam.add_member(set.at("name").get<std::string>(), make_region(fam.space, rverts, redges));
  }
  fam.closed_flag = j.value("closed_under_intersection", false);
  return fam;
}

inline Json region_vertices_json(const Region& r) {
  Json out = Json::array();
  r.verts.for_each([&](int v) { out.push_back(r.space->vertices[static_cast<std::size_t>(v)]); });
  return out;
}

inline Json region_edges_json(const Region& r) {
  Json out = Json::array();
  r.edg.for_each([&](int e) {
    const auto& [u, v] = r.space->edges[static_cast<std::size_t>(e)];
    out.push_back(Json::array({r.space->vertices[static_cast<std::size_t>(u)],
                               r.space->vertices[static_cast<std::size_t>(v)]}));
  });
  return out;
}

inline Json family_to_json(const SetFamily& fam) {
  Json vertices = Json::array();
  for (const auto& v : fam.space->vertices) vertices.push_back(v);
  Json edges = Json::array();
  for (const auto& [u, v] : fam.space->edges)
    edges.push_back(Json::array({fam.space->vertices[static_cast<std::size_t>(u)],
                                 fam.space->vertices[static_cast<std::size_t>(v)]}));
  Json sets = Json::array();
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    sets.push_back(Json{{"name", fam.names[i]},
                        {"vertices", region_vertices_json(fam.members[i])},
                        {"edges", region_edges_json(fam.members[i])}});
  }
  return Json{{"space", Json{{"vertices", std::move(vertices)}, {"edges", std::move(edges)}}},
              {"sets", std::move(sets)},
              {"closed_under_intersection", fam.closed_flag}};
}

inline SetFamily load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open family file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw InputError("bad JSON in '" + path + "': " + e.what());
  }
  return family_from_json(j);
}

// ConstrainedMap JSON:
// {"vertex_images":{"u":"x3"},"edge_images":{"u-v":["x3","x7"]},
//  "phi":{"u":["p1"],"u-v":["p1","p5"]}}
// with edge keys built from sorted endpoint names joined by '-'.
inline Json cmap_to_json(const ConstrainedMap& cm) {
  auto edge_key = [&](const std::pair<int, int>& e) {
    std::string a = cm.vertex_label(e.first), b = cm.vertex_label(e.second);
    if (b < a) std::swap(a, b);
    return a + "-" + b;
  };
  auto point_names = [&](const IndexSet& s) {
    Json out = Json::array();
    s.for_each([&](int v) { out.push_back(cm.space->vertices[static_cast<std::size_t>(v)]); });
    return out;
  };
  Json vertex_images = Json::object();
  Json phi = Json::object();
  for (int v = 0; v < cm.graph.n; ++v) {
    vertex_images[cm.vertex_label(v)] =
        cm.space->vertices[static_cast<std::size_t>(cm.vertex_image[static_cast<std::size_t>(v)])];
    phi[cm.vertex_label(v)] = point_names(cm.phi_vertex[static_cast<std::size_t>(v)]);
  }
  Json edge_images = Json::object();
  for (const auto& [e, walk] : cm.edge_image) {
    Json verts = Json::array();
    for (int v : walk.verts) verts.push_back(cm.space->vertices[static_cast<std::size_t>(v)]);
    edge_images[edge_key(e)] = std::move(verts);
  }
  for (const auto& [e, label] : cm.phi_edge) phi[edge_key(e)] = point_names(label);
  return Json{{"vertex_images", std::move(vertex_images)},
              {"edge_images", std::move(edge_images)},
              {"phi", std::move(phi)}};
}

// Rebuilds a map from its JSON form given the graph and space it lives on.
inline ConstrainedMap cmap_from_json(const Json& j, Graph graph, SpacePtr space) {
  ConstrainedMap cm;
  cm.graph = std::move(graph);
  cm.space = std::move(space);
  cm.points = IndexSet(static_cast<std::size_t>(cm.space->vertex_count()));
  cm.vertex_image.assign(static_cast<std::size_t>(cm.graph.n), -1);
  cm.phi_vertex.assign(static_cast<std::size_t>(cm.graph.n), cm.points);

  std::map<std::string, int> graph_index;
  for (int v = 0; v < cm.graph.n; ++v) graph_index[cm.graph.vertex_name(v)] = v;
  auto vertex_of = [&](const std::string& name) {
    auto it = graph_index.find(name);
    if (it == graph_index.end()) throw InputError("unknown graph vertex '" + name + "' in map JSON");
    return it->second;
  };
  auto parse_set = [&](const Json& arr) {
    IndexSet s(static_cast<std::size_t>(cm.space->vertex_count()));
    for (const Json& name : arr) s.set(static_cast<std::size_t>(cm.space->vertex_index(name.get<std::string>())));
    return s;
  };

  for (const auto& [name, img] : j.at("vertex_images").items())
    cm.vertex_image[static_cast<std::size_t>(vertex_of(name))] =
        cm.space->vertex_index(img.get<std::string>());
  for (const auto& [key, arr] : j.at("edge_images").items()) {
    const auto dash = key.find('-');
    if (dash == std::string::npos) throw InputError("bad edge key '" + key + "' in map JSON");
    int u = vertex_of(key.substr(0, dash)), v = vertex_of(key.substr(dash + 1));
    if (u > v) std::swap(u, v);
    Walk w;
    for (const Json& name : arr) w.verts.push_back(cm.space->vertex_index(name.get<std::string>()));
    cm.edge_image[{u, v}] = std::move(w);
  }
  for (const auto& [key, arr] : j.at("phi").items()) {
    const auto dash = key.find('-');
    if (dash == std::string::npos) {
      cm.phi_vertex[static_cast<std::size_t>(vertex_of(key))] = parse_set(arr);
    } else {
      int u = vertex_of(key.substr(0, dash)), v = vertex_of(key.substr(dash + 1));
      if (u > v) std::swap(u, v);
      cm.phi_edge[{u, v}] = parse_set(arr);
    }
  }
  for (int v = 0; v < cm.graph.n; ++v) cm.points |= cm.phi_vertex[static_cast<std::size_t>(v)];
  for (const auto& [e, label] : cm.phi_edge) cm.points |= label;
  return cm;
}

inline Json exact_report_to_json(const SetFamily& fam, const ExactReport& rep) {
  Json j;
  if (rep.radon.unbounded)
    j["radon"] = "unbounded";
  else
    j["radon"] = rep.radon.value;
  Json rw = Json::array();
  for (int v : rep.radon.witness) rw.push_back(fam.space->vertices[static_cast<std::size_t>(v)]);
  j["radon_witness"] = std::move(rw);
  j["helly"] = rep.helly.value;
  Json hw = Json::array();
  for (const Region& r : rep.helly.witness) hw.push_back(region_vertices_json(r));
  j["helly_witness"] = std::move(hw);
  j["tc1"] = rep.tc1;
  j["levi"] = rep.levi;
  return j;
}

inline Json theorem_report_to_json(const SetFamily& fam, const TheoremReport& rep) {
  Json j;
  j["b"] = rep.b;
  j["bound"] = bigint_to_json(rep.bound);
  if (rep.radon.unbounded)
    j["radon"] = "unbounded";
  else
    j["radon"] = rep.radon.value;
  Json rw = Json::array();
  for (int v : rep.radon.witness) rw.push_back(fam.space->vertices[static_cast<std::size_t>(v)]);
  j["radon_witness"] = std::move(rw);
  j["verdict"] = verdict_name(rep.verdict);
  return j;
}

}  // namespace qradon
