#include "unlk/model_json.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace unlk {

namespace {

using ordered_json = nlohmann::ordered_json;

Rat rat_from_json(const ordered_json& j, const char* what) {
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const Error&) {
      throw ParseError(std::string(what) + ": bad rational literal '" +
                       j.get<std::string>() + "'");
    }
  }
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_unsigned()) return Rat(j.get<unsigned long long>());
  throw ParseError(std::string(what) + ": rationals must be \"p/q\" strings or integers");
}

const ordered_json& member(const ordered_json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string(what) + ": missing field '" + key + "'");
  return j.at(key);
}

std::string string_member(const ordered_json& j, const char* key, const char* what) {
  const auto& v = member(j, key, what);
  if (!v.is_string()) throw ParseError(std::string(what) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

NodeKind kind_from_string(const std::string& s, const char* what) {
  if (s == "extremum") return NodeKind::extremum;
  if (s == "saddle") return NodeKind::saddle;
  throw ParseError(std::string(what) + ": vertex kind must be 'extremum' or 'saddle'");
}

const char* kind_to_string(NodeKind k) {
  return k == NodeKind::extremum ? "extremum" : "saddle";
}

RhoProfile parse_breakpoints(const ordered_json& j, const char* what) {
  RhoProfile prof;
  if (!j.is_array()) throw ParseError(std::string(what) + ": 'rho' must be an array");
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2)
      throw ParseError(std::string(what) + ": each rho breakpoint is a [area, value] pair");
    prof.breakpoints.emplace_back(rat_from_json(p.at(0), what), rat_from_json(p.at(1), what));
  }
  if (prof.breakpoints.empty())
    throw ParseError(std::string(what) + ": 'rho' needs at least one breakpoint");
  return prof;
}

void parse_profile_object(const ordered_json& j, EdgeGeometry& geom, RhoProfile& prof,
                          const char* what) {
  if (!j.is_object()) throw ParseError(std::string(what) + ": profile must be an object");
  prof = parse_breakpoints(member(j, "rho", what), what);
  geom.area_lo =
      j.contains("area_lo") ? rat_from_json(j.at("area_lo"), what) : prof.breakpoints.front().first;
  geom.area_hi = prof.breakpoints.back().first;
  geom.level_at_lo =
      j.contains("level_at_lo") ? rat_from_json(j.at("level_at_lo"), what) : Rat(0);
}

ordered_json emit_breakpoints(const RhoProfile& prof) {
  ordered_json rho = ordered_json::array();
  for (const auto& [a, r] : prof.breakpoints)
    rho.push_back(ordered_json::array({rat_str(a), rat_str(r)}));
  return rho;
}

ordered_json emit_profile_object(const EdgeGeometry& geom, const RhoProfile& prof) {
  ordered_json j = ordered_json::object();
  j["rho"] = emit_breakpoints(prof);
  j["area_lo"] = rat_str(geom.area_lo);
  j["level_at_lo"] = rat_str(geom.level_at_lo);
  return j;
}

PlaneTree parse_tree_payload(const ordered_json& j) {
  static constexpr const char* what = "plane_tree";
  PlaneTree tree;
  for (const auto& n : member(j, "nodes", what)) {
    TreeNode node;
    node.id = string_member(n, "id", what);
    node.kind = kind_from_string(string_member(n, "kind", what), what);
    node.level = rat_from_json(member(n, "level", what), what);
    tree.nodes.push_back(std::move(node));
  }
  for (const auto& e : member(j, "edges", what)) {
    TreeEdge edge;
    edge.id = string_member(e, "id", what);
    edge.inner = string_member(e, "inner", what);
    edge.outer = string_member(e, "outer", what);
    parse_profile_object(member(e, "profile", what), edge.geom, edge.profile, what);
    tree.edges.push_back(std::move(edge));
  }
  return tree;
}

ordered_json emit_tree_payload(const PlaneTree& tree) {
  ordered_json j = ordered_json::object();
  ordered_json nodes = ordered_json::array();
  for (const auto& n : tree.nodes) {
    ordered_json node = ordered_json::object();
    node["id"] = n.id;
    node["kind"] = kind_to_string(n.kind);
    node["level"] = rat_str(n.level);
    nodes.push_back(std::move(node));
  }
  ordered_json edges = ordered_json::array();
  for (const auto& e : tree.edges) {
    ordered_json edge = ordered_json::object();
    edge["id"] = e.id;
    edge["inner"] = e.inner;
    edge["outer"] = e.outer;
    edge["profile"] = emit_profile_object(e.geom, e.profile);
    edges.push_back(std::move(edge));
  }
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  return j;
}

SurfaceGraph parse_surface_payload(const ordered_json& j) {
  static constexpr const char* what = "surface";
  SurfaceGraph g;
  const auto& genus = member(j, "genus", what);
  if (!genus.is_number_integer() && !genus.is_number_unsigned())
    throw ParseError("surface: 'genus' must be an integer");
  g.genus = genus.get<long>();
  for (const auto& v : member(j, "vertices", what)) {
    SurfaceVertex vert;
    vert.id = string_member(v, "id", what);
    vert.kind = kind_from_string(string_member(v, "kind", what), what);
    vert.level = rat_from_json(member(v, "level", what), what);
    g.vertices.push_back(std::move(vert));
  }
  for (const auto& e : member(j, "edges", what)) {
    SurfaceEdge edge;
    edge.id = string_member(e, "id", what);
    const auto& ends = member(e, "ends", what);
    if (!ends.is_array() || ends.size() != 2 || !ends.at(0).is_string() || !ends.at(1).is_string())
      throw ParseError("surface: 'ends' must list two vertex ids");
    edge.ends = {ends.at(0).get<std::string>(), ends.at(1).get<std::string>()};
    const auto& prof = member(e, "profile", what);
    if (!prof.is_null()) {
      EdgeGeometry geom;
      RhoProfile rho;
      parse_profile_object(prof, geom, rho, what);
      edge.geom = geom;
      edge.profile = std::move(rho);
    }
    g.edges.push_back(std::move(edge));
  }
  return g;
}

ordered_json emit_surface_payload(const SurfaceGraph& g) {
  ordered_json j = ordered_json::object();
  j["genus"] = g.genus;
  ordered_json vertices = ordered_json::array();
  for (const auto& v : g.vertices) {
    ordered_json vert = ordered_json::object();
    vert["id"] = v.id;
    vert["kind"] = kind_to_string(v.kind);
    vert["level"] = rat_str(v.level);
    vertices.push_back(std::move(vert));
  }
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges) {
    ordered_json edge = ordered_json::object();
    edge["id"] = e.id;
    edge["ends"] = ordered_json::array({e.ends[0], e.ends[1]});
    if (e.geom && e.profile)
      edge["profile"] = emit_profile_object(*e.geom, *e.profile);
    else
      edge["profile"] = nullptr;
    edges.push_back(std::move(edge));
  }
  j["vertices"] = std::move(vertices);
  j["edges"] = std::move(edges);
  return j;
}

HeightProfile parse_sphere_payload(const ordered_json& j) {
  static constexpr const char* what = "sphere";
  HeightProfile hp;
  const auto& dh = member(j, "dh", what);
  if (!dh.is_array()) throw ParseError("sphere: 'dh' must be an array");
  for (const auto& p : dh) {
    if (!p.is_array() || p.size() != 2)
      throw ParseError("sphere: each dh breakpoint is a [z, value] pair");
    hp.dh.emplace_back(rat_from_json(p.at(0), what), rat_from_json(p.at(1), what));
  }
  hp.h0 = rat_from_json(member(j, "h0", what), what);
  return hp;
}

ordered_json emit_sphere_payload(const HeightProfile& hp) {
  ordered_json j = ordered_json::object();
  ordered_json dh = ordered_json::array();
  for (const auto& [z, v] : hp.dh) dh.push_back(ordered_json::array({rat_str(z), rat_str(v)}));
  j["dh"] = std::move(dh);
  j["h0"] = rat_str(hp.h0);
  return j;
}

PlaneTree parse_tree_or_document(const ordered_json& j, const char* what) {
  if (j.is_object() && j.contains("payload") && j.contains("kind")) {
    if (j.at("kind") != "plane_tree")
      throw ParseError(std::string(what) + ": nested model must be a plane_tree");
    return parse_tree_payload(j.at("payload"));
  }
  return parse_tree_payload(j);
}

Family parse_family_payload(const ordered_json& j) {
  static constexpr const char* what = "family";
  Family f;
  const std::string kind = string_member(j, "kind", what);
  if (kind == "linear") {
    f.kind = Family::Kind::linear;
    f.from = parse_tree_or_document(member(j, "from", what), what);
    f.to = parse_tree_or_document(member(j, "to", what), what);
  } else if (kind == "special") {
    f.kind = Family::Kind::special;
    const auto& g = member(j, "g", what);
    if (g.is_object())
      f.g = parse_breakpoints(member(g, "rho", what), what);
    else
      f.g = parse_breakpoints(g, what);
    if (j.contains("flatten_width")) f.flatten_width = rat_from_json(j.at("flatten_width"), what);
    if (j.contains("inside"))
      for (const auto& s : j.at("inside")) f.inside.push_back(rat_from_json(s, what));
  } else {
    throw ParseError("family: 'kind' must be 'linear' or 'special'");
  }
  return f;
}

ordered_json emit_family_payload(const Family& f) {
  ordered_json j = ordered_json::object();
  if (f.kind == Family::Kind::linear) {
    j["kind"] = "linear";
    j["from"] = emit_tree_payload(f.from);
    j["to"] = emit_tree_payload(f.to);
  } else {
    j["kind"] = "special";
    ordered_json g = ordered_json::object();
    g["rho"] = emit_breakpoints(f.g);
    j["g"] = std::move(g);
    j["flatten_width"] = rat_str(f.flatten_width);
    ordered_json inside = ordered_json::array();
    for (const auto& s : f.inside) inside.push_back(rat_str(s));
    j["inside"] = std::move(inside);
  }
  return j;
}

ScalarGrid parse_grid_payload(const ordered_json& j) {
  static constexpr const char* what = "grid";
  ScalarGrid g;
  const auto& w = member(j, "width", what);
  const auto& h = member(j, "height", what);
  const auto& s = member(j, "spacing", what);
  if (!w.is_number_integer() || !h.is_number_integer())
    throw ParseError("grid: 'width' and 'height' must be integers");
  if (!s.is_number()) throw ParseError("grid: 'spacing' must be a number");
  g.width = w.get<int>();
  g.height = h.get<int>();
  g.spacing = s.get<double>();
  const auto& values = member(j, "values", what);
  if (!values.is_array()) throw ParseError("grid: 'values' must be an array");
  for (const auto& v : values) {
    if (!v.is_number()) throw ParseError("grid: values must be numbers");
    g.values.push_back(v.get<double>());
  }
  return g;
}

ordered_json emit_grid_payload(const ScalarGrid& g) {
  ordered_json j = ordered_json::object();
  j["width"] = g.width;
  j["height"] = g.height;
  j["spacing"] = g.spacing;
  j["values"] = g.values;
  return j;
}

}  // namespace

const char* ModelDocument::kind() const {
  switch (payload.index()) {
    case 0: return "plane_tree";
    case 1: return "surface";
    case 2: return "sphere";
    case 3: return "family";
    default: return "grid";
  }
}

ModelDocument parse_model(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  static constexpr const char* what = "model";
  const std::string kind = string_member(j, "kind", what);
  const auto& version = member(j, "version", what);
  if (!version.is_number_integer() || version.get<int>() != 1)
    throw ParseError("model: unsupported version (this tool reads version 1)");
  const auto& payload = member(j, "payload", what);
  ModelDocument doc;
  try {
    if (kind == "plane_tree")
      doc.payload = parse_tree_payload(payload);
    else if (kind == "surface")
      doc.payload = parse_surface_payload(payload);
    else if (kind == "sphere")
      doc.payload = parse_sphere_payload(payload);
    else if (kind == "family")
      doc.payload = parse_family_payload(payload);
    else if (kind == "grid")
      doc.payload = parse_grid_payload(payload);
    else
      throw ParseError("model: unknown kind '" + kind + "'");
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("model: malformed payload: ") + e.what());
  }
  return doc;
}

ModelDocument load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

std::string emit_model(const ModelDocument& doc) {
  ordered_json j = ordered_json::object();
  j["kind"] = doc.kind();
  j["version"] = 1;
  switch (doc.payload.index()) {
    case 0: j["payload"] = emit_tree_payload(std::get<PlaneTree>(doc.payload)); break;
    case 1: j["payload"] = emit_surface_payload(std::get<SurfaceGraph>(doc.payload)); break;
    case 2: j["payload"] = emit_sphere_payload(std::get<HeightProfile>(doc.payload)); break;
    case 3: j["payload"] = emit_family_payload(std::get<Family>(doc.payload)); break;
    default: j["payload"] = emit_grid_payload(std::get<ScalarGrid>(doc.payload)); break;
  }
  return j.dump(2) + "\n";
}

std::string emit_validation_report(const std::string& kind,
                                   const std::vector<Diagnostic>& diagnostics) {
  ordered_json j = ordered_json::object();
  j["kind"] = kind;
  j["valid"] = diagnostics.empty();
  ordered_json list = ordered_json::array();
  for (const auto& d : diagnostics) {
    ordered_json item = ordered_json::object();
    item["code"] = d.code;
    item["subject"] = d.subject;
    if (d.index)
      item["index"] = *d.index;
    else
      item["index"] = nullptr;
    item["message"] = d.message;
    list.push_back(std::move(item));
  }
  j["diagnostics"] = std::move(list);
  return j.dump(2) + "\n";
}

std::string emit_decomposition_report(const DiskDecomposition& d) {
  ordered_json j = ordered_json::object();
  j["essential_saddles"] = d.essential_saddles;
  j["core_edges"] = d.core_edges;
  ordered_json disks = ordered_json::array();
  for (const auto& disk : d.disks) {
    ordered_json item = ordered_json::object();
    item["saddle"] = disk.saddle;
    item["branch_edge"] = disk.branch_edge;
    item["boundary_level"] = rat_str(disk.boundary_level);
    disks.push_back(std::move(item));
  }
  j["disks"] = std::move(disks);
  return j.dump(2) + "\n";
}

std::string emit_counterexample_report(const CounterexampleReport& r) {
  ordered_json j = ordered_json::object();
  j["c_sum"] = rat_str(r.c_sum);
  j["c1"] = rat_str(r.c1);
  j["c2"] = rat_str(r.c2);
  j["gap"] = rat_str(r.gap);
  ordered_json params = ordered_json::object();
  params["z_beta"] = rat_str(r.z_beta);
  params["delta_prime"] = rat_str(r.delta_prime);
  params["shoulder_slope"] = rat_str(r.shoulder_slope);
  params["z_gamma"] = rat_str(r.z_gamma);
  j["parameters"] = std::move(params);
  ordered_json profiles = ordered_json::object();
  profiles["h"] = emit_sphere_payload(r.h);
  profiles["h1"] = emit_sphere_payload(r.h1);
  profiles["h2"] = emit_sphere_payload(r.h2);
  j["profiles"] = std::move(profiles);
  return j.dump(2) + "\n";
}

}  // namespace unlk
