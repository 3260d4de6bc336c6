#include "unlk/surface.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "unlk/invariant.hpp"
#include "unlk/mnus_oracle.hpp"

namespace unlk {

namespace {

struct GraphIndex {
  std::map<std::string, const SurfaceVertex*> vertices;
  std::map<std::string, std::size_t> edge_pos;
  // vertex id -> incident edge indices, document order
  std::map<std::string, std::vector<std::size_t>> incident;
};

// Structural indexing; throws InvalidTreeError on broken references so the
// value-level validators can assume a navigable graph.
GraphIndex build_index(const SurfaceGraph& g) {
  GraphIndex ix;
  for (const auto& v : g.vertices) {
    if (!ix.vertices.emplace(v.id, &v).second)
      throw InvalidTreeError("duplicate vertex id '" + v.id + "'");
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (!ix.edge_pos.emplace(e.id, i).second)
      throw InvalidTreeError("duplicate edge id '" + e.id + "'");
    for (const auto& end : e.ends) {
      if (!ix.vertices.count(end))
        throw InvalidTreeError("edge '" + e.id + "' references unknown vertex '" + end + "'");
    }
    if (e.ends[0] == e.ends[1])
      throw InvalidTreeError("edge '" + e.id + "' is a self loop");
    ix.incident[e.ends[0]].push_back(i);
    ix.incident[e.ends[1]].push_back(i);
  }
  return ix;
}

struct StripResult {
  std::vector<bool> edge_removed;         // by edge index
  std::set<std::string> removed_vertices;
};

// Leaf stripping: repeatedly delete degree-1 vertices together with their
// last incident edge. Deterministic seed order; the surviving set does not
// depend on it.
StripResult strip_leaves(const SurfaceGraph& g, const GraphIndex& ix, bool reverse_seed = false) {
  StripResult r;
  r.edge_removed.assign(g.edges.size(), false);
  std::map<std::string, int> degree;
  for (const auto& v : g.vertices) degree[v.id] = 0;
  for (const auto& e : g.edges) {
    ++degree[e.ends[0]];
    ++degree[e.ends[1]];
  }
  std::deque<std::string> queue;
  if (reverse_seed) {
    for (auto it = g.vertices.rbegin(); it != g.vertices.rend(); ++it)
      if (degree[it->id] == 1) queue.push_back(it->id);
  } else {
    for (const auto& v : g.vertices)
      if (degree[v.id] == 1) queue.push_back(v.id);
  }
  while (!queue.empty()) {
    const std::string v = queue.front();
    queue.pop_front();
    if (r.removed_vertices.count(v) || degree[v] != 1) continue;
    auto inc = ix.incident.find(v);
    const SurfaceEdge* last = nullptr;
    std::size_t last_i = 0;
    if (inc != ix.incident.end()) {
      for (std::size_t i : inc->second) {
        if (!r.edge_removed[i]) {
          last = &g.edges[i];
          last_i = i;
          break;
        }
      }
    }
    r.removed_vertices.insert(v);
    degree[v] = 0;
    if (!last) continue;
    r.edge_removed[last_i] = true;
    const std::string other = last->ends[0] == v ? last->ends[1] : last->ends[0];
    if (--degree[other] == 1) queue.push_back(other);
  }
  if (r.removed_vertices.size() == g.vertices.size())
    throw EmptyCoreError("leaf stripping consumed the whole graph");
  return r;
}

// Converts the branch hanging off `att` (whose core-side end is `core_v`)
// into a plane-tree model, all levels shifted by -boundary_level.
PlaneTree build_subtree(const SurfaceGraph& g, const GraphIndex& ix, std::size_t att,
                        const std::string& core_v, const Rat& boundary_level) {
  PlaneTree t;
  std::set<std::string> seen_nodes;
  struct Item {
    std::size_t edge_i;
    std::string inner;
    std::string outer;  // tree label: node id or "" for the boundary
  };
  std::deque<Item> queue;
  const auto& ae = g.edges[att];
  queue.push_back({att, ae.ends[0] == core_v ? ae.ends[1] : ae.ends[0], ""});
  while (!queue.empty()) {
    Item it = queue.front();
    queue.pop_front();
    const auto& e = g.edges[it.edge_i];
    if (e.ends[0] != it.inner)
      throw InvalidTreeError("branch edge '" + e.id +
                             "' is oriented backwards: ends[0] must be the deeper end");
    if (!e.geom || !e.profile)
      throw InvalidTreeError("branch edge '" + e.id + "' lacks profile data");
    EdgeGeometry geom = *e.geom;
    geom.level_at_lo -= boundary_level;
    t.edges.push_back({e.id, it.inner, it.outer, geom, *e.profile});
    const SurfaceVertex& v = *ix.vertices.at(it.inner);
    if (seen_nodes.insert(v.id).second)
      t.nodes.push_back({v.id, v.kind, v.level - boundary_level});
    if (v.kind == NodeKind::saddle) {
      for (std::size_t ci : ix.incident.at(v.id)) {
        if (ci == it.edge_i) continue;
        const auto& f = g.edges[ci];
        queue.push_back({ci, f.ends[0] == v.id ? f.ends[1] : f.ends[0], v.id});
      }
    }
  }
  return t;
}

DiskDecomposition decompose(const SurfaceGraph& g, const GraphIndex& ix, const StripResult& strip) {
  DiskDecomposition d;
  for (const auto& v : g.vertices)
    if (!strip.removed_vertices.count(v.id)) d.essential_saddles.push_back(v.id);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (!strip.edge_removed[i]) d.core_edges.push_back(g.edges[i].id);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (!strip.edge_removed[i]) continue;
    const auto& e = g.edges[i];
    const bool s0 = !strip.removed_vertices.count(e.ends[0]);
    const bool s1 = !strip.removed_vertices.count(e.ends[1]);
    if (!s0 && !s1) continue;  // interior branch edge
    const std::string& core_v = s0 ? e.ends[0] : e.ends[1];
    const Rat boundary_level = ix.vertices.at(core_v)->level;
    d.disks.push_back(
        {core_v, e.id, boundary_level, build_subtree(g, ix, i, core_v, boundary_level)});
  }
  return d;
}

}  // namespace

std::vector<Diagnostic> validate_surface(const SurfaceGraph& g) {
  std::vector<Diagnostic> out;
  GraphIndex ix;
  try {
    ix = build_index(g);
  } catch (const InvalidTreeError& e) {
    out.push_back({diag::kInvalidGraph, "", std::nullopt, e.what()});
    return out;
  }
  if (g.genus < 1)
    out.push_back({diag::kBadGenus, "", std::nullopt,
                   "genus must be at least 1 (got " + std::to_string(g.genus) + ")"});
  long n_ext = 0, n_sad = 0;
  for (const auto& v : g.vertices) {
    const int deg =
        ix.incident.count(v.id) ? static_cast<int>(ix.incident.at(v.id).size()) : 0;
    const int want = v.kind == NodeKind::extremum ? 1 : 3;
    if (deg != want)
      out.push_back({diag::kBadDegree, v.id, std::nullopt,
                     "vertex '" + v.id + "' has degree " + std::to_string(deg) + ", expected " +
                         std::to_string(want)});
    (v.kind == NodeKind::extremum ? n_ext : n_sad) += 1;
  }
  if (n_ext - n_sad != 2 - 2 * g.genus)
    out.push_back({diag::kEulerMismatch, "", std::nullopt,
                   "#extrema - #saddles = " + std::to_string(n_ext - n_sad) +
                       " but 2 - 2*genus = " + std::to_string(2 - 2 * g.genus)});
  if (!g.vertices.empty()) {
    // connectivity
    std::set<std::string> seen;
    std::deque<std::string> queue{g.vertices.front().id};
    seen.insert(g.vertices.front().id);
    while (!queue.empty()) {
      const std::string v = queue.front();
      queue.pop_front();
      if (!ix.incident.count(v)) continue;
      for (std::size_t i : ix.incident.at(v)) {
        const auto& e = g.edges[i];
        for (const auto& end : e.ends)
          if (seen.insert(end).second) queue.push_back(end);
      }
    }
    if (seen.size() != g.vertices.size())
      out.push_back({diag::kNotConnected, "", std::nullopt, "level-set graph is not connected"});
    // distinct levels; the top and bottom of the function are extrema
    std::map<Rat, const SurfaceVertex*> by_level;
    for (const auto& v : g.vertices) {
      auto [it, fresh] = by_level.emplace(v.level, &v);
      if (!fresh)
        out.push_back({diag::kDuplicateLevel, v.id, std::nullopt,
                       "level " + rat_str(v.level) + " shared with vertex '" + it->second->id +
                           "'"});
    }
    for (const SurfaceVertex* v : {by_level.begin()->second, by_level.rbegin()->second}) {
      if (v->kind != NodeKind::extremum)
        out.push_back({diag::kExtremeLevelNotExtremum, v->id, std::nullopt,
                       "global extreme level " + rat_str(v->level) +
                           " sits on a saddle; a closed surface attains it at an extremum"});
    }
  }
  if (!out.empty()) return out;

  StripResult strip;
  try {
    strip = strip_leaves(g, ix);
  } catch (const ComputeError& e) {
    out.push_back({diag::kInvalidGraph, "", std::nullopt, e.what()});
    return out;
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (strip.edge_removed[i] && (!e.geom || !e.profile))
      out.push_back({diag::kMissingProfile, e.id, std::nullopt,
                     "branch edge '" + e.id + "' must carry area and rotation data"});
  }
  if (!out.empty()) return out;

  DiskDecomposition d;
  try {
    d = decompose(g, ix, strip);
  } catch (const ComputeError& e) {
    out.push_back({diag::kInvalidGraph, "", std::nullopt, e.what()});
    return out;
  }
  for (const auto& disk : d.disks) {
    for (auto diag : validate_tree(disk.subtree)) {
      diag.subject = "disk@" + disk.branch_edge +
                     (diag.subject.empty() ? "" : "/" + diag.subject);
      out.push_back(std::move(diag));
    }
  }
  return out;
}

void require_valid(const SurfaceGraph& g) {
  auto diags = validate_surface(g);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

DiskDecomposition core_graph(const SurfaceGraph& g) {
  GraphIndex ix = build_index(g);
  return decompose(g, ix, strip_leaves(g, ix));
}

DiskDecomposition core_graph_reverse(const SurfaceGraph& g) {
  GraphIndex ix = build_index(g);
  return decompose(g, ix, strip_leaves(g, ix, true));
}

namespace {

template <typename Eval>
Rat nu_surface_by(const SurfaceGraph& g, Eval&& eval) {
  DiskDecomposition d = core_graph(g);
  if (d.disks.empty()) throw ComputeError("surface model has no disks");
  bool first = true;
  Rat best;
  for (const auto& disk : d.disks) {
    Rat v = disk.boundary_level + eval(disk.subtree);
    if (first || v > best) {
      best = v;
      first = false;
    }
  }
  return best;
}

}  // namespace

Rat nu_surface(const SurfaceGraph& g) {
  return nu_surface_by(g, [](const PlaneTree& t) { return nu_recursive(t); });
}

Rat nu_surface_oracle(const SurfaceGraph& g) {
  return nu_surface_by(g, [](const PlaneTree& t) { return nu_oracle(t); });
}

Rat zeta(const SurfaceGraph& g) {
  DiskDecomposition d = core_graph(g);
  GraphIndex ix = build_index(g);
  bool first = true;
  Rat best;
  for (const auto& id : d.essential_saddles) {
    const Rat& lvl = ix.vertices.at(id)->level;
    if (first || lvl > best) {
      best = lvl;
      first = false;
    }
  }
  if (first) throw EmptyCoreError("no essential saddles");
  return best;
}

std::vector<std::string> superlevel_cells(const SurfaceGraph& g, const Rat& h0) {
  GraphIndex ix = build_index(g);
  std::vector<std::string> out;
  for (const auto& v : g.vertices)
    if (v.level > h0) out.push_back(v.id);
  for (const auto& e : g.edges) {
    // the open annulus spans the open level interval between its ends
    const Rat& l0 = ix.vertices.at(e.ends[0])->level;
    const Rat& l1 = ix.vertices.at(e.ends[1])->level;
    if (std::min(l0, l1) >= h0) out.push_back(e.id);
  }
  return out;
}

ZetaScanResult zeta_scan(const SurfaceGraph& g, std::vector<Rat> thresholds) {
  if (thresholds.empty()) throw OutOfRangeError("zeta_scan needs at least one threshold");
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  DiskDecomposition d = core_graph(g);
  std::set<std::string> core(d.essential_saddles.begin(), d.essential_saddles.end());
  core.insert(d.core_edges.begin(), d.core_edges.end());
  auto clears = [&](const Rat& t) {
    for (const auto& id : superlevel_cells(g, t))
      if (core.count(id)) return false;
    return true;
  };
  std::optional<Rat> t0, t1;
  for (const auto& t : thresholds) {
    if (clears(t)) {
      if (!t0) t0 = t;
    } else {
      t1 = t;
    }
  }
  ZetaScanResult r;
  r.clearing_threshold = t0;
  if (t0 && t1) {
    // refine: the highest core vertex still inside the last surviving
    // superlevel set is the critical value the scan brackets
    GraphIndex ix = build_index(g);
    bool first = true;
    for (const auto& id : superlevel_cells(g, *t1)) {
      if (!core.count(id) || !ix.vertices.count(id)) continue;
      const Rat& lvl = ix.vertices.at(id)->level;
      if (first || lvl > r.value) {
        r.value = lvl;
        first = false;
      }
    }
    r.coarse = first;  // only edge cells inside: no vertex to refine with
    if (first) r.value = *t0;
  } else if (t0) {
    r.value = *t0;  // every threshold clears; the scan only bounds from above
    r.coarse = true;
  } else {
    r.value = thresholds.back();  // nothing clears; only a lower bound
    r.coarse = true;
  }
  return r;
}

namespace {

std::set<std::string> checked_cells(const SurfaceGraph& g, const std::vector<std::string>& cells) {
  std::set<std::string> universe;
  for (const auto& v : g.vertices) universe.insert(v.id);
  for (const auto& e : g.edges) universe.insert(e.id);
  std::set<std::string> x;
  for (const auto& id : cells) {
    if (!universe.count(id)) throw UnknownCellError("unknown cell id '" + id + "'");
    x.insert(id);
  }
  return x;
}

}  // namespace

bool heavy(const SurfaceGraph& g, const std::vector<std::string>& cells) {
  auto x = checked_cells(g, cells);
  DiskDecomposition d = core_graph(g);
  for (const auto& id : d.essential_saddles)
    if (x.count(id)) return true;
  for (const auto& id : d.core_edges)
    if (x.count(id)) return true;
  return false;
}

bool superheavy(const SurfaceGraph& g, const std::vector<std::string>& cells) {
  auto x = checked_cells(g, cells);
  DiskDecomposition d = core_graph(g);
  for (const auto& id : d.essential_saddles)
    if (!x.count(id)) return false;
  for (const auto& id : d.core_edges)
    if (!x.count(id)) return false;
  return true;
}

SurfaceGraph negate(const SurfaceGraph& g) {
  SurfaceGraph n = g;
  for (auto& v : n.vertices) v.level = -v.level;
  for (auto& e : n.edges) {
    if (e.geom) e.geom->level_at_lo = -e.geom->level_at_lo;
    if (e.profile)
      for (auto& [a, r] : e.profile->breakpoints) r = -r;
  }
  return n;
}

std::pair<Rat, Rat> dispersion_check(const SurfaceGraph& g) {
  DiskDecomposition d = core_graph(g);
  GraphIndex ix = build_index(g);
  // the squared function's level on a core cell peaks at a core vertex
  bool first = true;
  Rat lhs;
  for (const auto& id : d.essential_saddles) {
    Rat sq = ix.vertices.at(id)->level * ix.vertices.at(id)->level;
    if (first || sq > lhs) {
      lhs = sq;
      first = false;
    }
  }
  if (first) throw EmptyCoreError("no essential saddles");
  Rat zp = zeta(g);
  Rat zn = zeta(negate(g));
  Rat rhs = std::max(zp * zp, zn * zn);
  return {lhs, rhs};
}

}  // namespace unlk
