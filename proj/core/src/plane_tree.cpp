#include "unlk/plane_tree.hpp"

#include <algorithm>
#include <set>

namespace unlk {

FeatureRef FeatureRef::at_node(std::string node_id) {
  FeatureRef r;
  r.type = Type::node;
  r.id = std::move(node_id);
  return r;
}

FeatureRef FeatureRef::at_orbit(std::string edge_id, Rat area) {
  FeatureRef r;
  r.type = Type::orbit;
  r.id = std::move(edge_id);
  r.area = std::move(area);
  return r;
}

TreeIndex TreeIndex::build(const PlaneTree& tree) {
  TreeIndex ix;
  ix.tree_ = &tree;
  for (const auto& n : tree.nodes) {
    if (!ix.nodes_.emplace(n.id, &n).second) {
      throw InvalidTreeError("duplicate vertex id '" + n.id + "'");
    }
  }
  for (const auto& e : tree.edges) {
    if (e.id.empty()) throw InvalidTreeError("edge with empty id");
    if (!ix.edges_.emplace(e.id, &e).second) {
      throw InvalidTreeError("duplicate edge id '" + e.id + "'");
    }
    if (!ix.nodes_.count(e.inner)) {
      throw InvalidTreeError("edge '" + e.id + "' has unknown inner vertex '" + e.inner + "'");
    }
    if (e.outer.empty()) {
      if (ix.root_ != nullptr) throw InvalidTreeError("more than one boundary edge");
      ix.root_ = &e;
    } else if (!ix.nodes_.count(e.outer)) {
      throw InvalidTreeError("edge '" + e.id + "' has unknown outer vertex '" + e.outer + "'");
    }
    if (!ix.parent_.emplace(e.inner, &e).second) {
      throw InvalidTreeError("vertex '" + e.inner + "' is the inner end of two edges");
    }
    if (!e.outer.empty()) ix.children_[e.outer].push_back(&e);
  }
  if (ix.root_ == nullptr) throw InvalidTreeError("no boundary edge");
  for (const auto& n : tree.nodes) {
    if (!ix.parent_.count(n.id)) {
      throw InvalidTreeError("vertex '" + n.id + "' has no outward edge");
    }
    const auto it = ix.children_.find(n.id);
    const std::size_t degree_in = it == ix.children_.end() ? 0 : it->second.size();
    if (n.kind == NodeKind::saddle && degree_in != 2) {
      throw InvalidTreeError("saddle '" + n.id + "' must carry two child edges");
    }
    if (n.kind == NodeKind::extremum && degree_in != 0) {
      throw InvalidTreeError("extremum '" + n.id + "' must carry no child edges");
    }
  }
  // Paths outward; also proves reachability (cycle or orphan -> no path).
  for (const auto& n : tree.nodes) {
    std::vector<std::string> path;
    std::string cur = n.id;
    while (!cur.empty()) {
      const auto it = ix.parent_.find(cur);
      if (it == ix.parent_.end()) throw InvalidTreeError("vertex '" + cur + "' detached");
      path.push_back(it->second->id);
      if (path.size() > tree.edges.size()) {
        throw InvalidTreeError("cycle through vertex '" + n.id + "'");
      }
      cur = it->second->outer;
    }
    ix.paths_.emplace(n.id, std::move(path));
  }
  return ix;
}

const TreeNode& TreeIndex::node(const std::string& id) const {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw InvalidPointError("unknown vertex '" + id + "'");
  return *it->second;
}

const TreeEdge& TreeIndex::edge(const std::string& id) const {
  const auto it = edges_.find(id);
  if (it == edges_.end()) throw InvalidPointError("unknown edge '" + id + "'");
  return *it->second;
}

const TreeEdge& TreeIndex::parent_edge(const std::string& node_id) const {
  const auto it = parent_.find(node_id);
  if (it == parent_.end()) throw InvalidPointError("unknown vertex '" + node_id + "'");
  return *it->second;
}

const std::vector<const TreeEdge*>& TreeIndex::child_edges(const std::string& node_id) const {
  static const std::vector<const TreeEdge*> kNone;
  const auto it = children_.find(node_id);
  return it == children_.end() ? kNone : it->second;
}

const std::vector<std::string>& TreeIndex::path_edges(const std::string& node_id) const {
  const auto it = paths_.find(node_id);
  if (it == paths_.end()) throw InvalidPointError("unknown vertex '" + node_id + "'");
  return it->second;
}

namespace {

bool path_contains(const std::vector<std::string>& path, const std::string& edge_id) {
  return std::find(path.begin(), path.end(), edge_id) != path.end();
}

}  // namespace

bool strictly_inside(const TreeIndex& ix, const FeatureRef& g, const FeatureRef& outer) {
  if (outer.type == FeatureRef::Type::trivial) return false;
  if (g.type == FeatureRef::Type::trivial) return false;

  if (outer.type == FeatureRef::Type::orbit) {
    const TreeEdge& e = ix.edge(outer.id);
    if (g.type == FeatureRef::Type::orbit) {
      if (g.id == outer.id) return g.area < outer.area;
      const TreeEdge& ge = ix.edge(g.id);
      if (ge.outer.empty()) return false;
      return path_contains(ix.path_edges(ge.outer), e.id);
    }
    return path_contains(ix.path_edges(g.id), e.id);
  }

  // outer is a vertex: only a saddle's pinched circle bounds disks.
  const TreeNode& n = ix.node(outer.id);
  if (n.kind != NodeKind::saddle) return false;
  if (g.type == FeatureRef::Type::orbit) {
    const TreeEdge& ge = ix.edge(g.id);
    std::string cur = ge.outer;
    while (!cur.empty()) {
      if (cur == outer.id) return true;
      cur = ix.parent_edge(cur).outer;
    }
    return false;
  }
  if (g.id == outer.id) return false;
  std::string cur = g.id;
  while (!cur.empty()) {
    cur = ix.parent_edge(cur).outer;
    if (cur == outer.id) return true;
  }
  return false;
}

std::vector<Diagnostic> validate_tree(const PlaneTree& tree) {
  std::vector<Diagnostic> diags;
  TreeIndex ix;
  try {
    ix = TreeIndex::build(tree);
  } catch (const InvalidTreeError& err) {
    diags.push_back({diag::kInvalidTree, "", std::nullopt, err.what()});
    return diags;
  }

  for (const auto& n : tree.nodes) {
    if (n.level == 0) {
      diags.push_back({n.kind == NodeKind::saddle ? diag::kSaddleAtZeroLevel
                                                  : diag::kExtremumAtZeroLevel,
                       n.id, std::nullopt, "critical level must be nonzero"});
    }
  }
  std::map<Rat, std::string> seen_levels;
  for (const auto& n : tree.nodes) {
    const auto [it, fresh] = seen_levels.emplace(n.level, n.id);
    if (!fresh) {
      diags.push_back({diag::kDuplicateLevel, n.id, std::nullopt,
                       "level " + rat_str(n.level) + " already used by '" + it->second + "'"});
    }
  }

  for (const auto& e : tree.edges) {
    auto profile_diags = validate_profile(e.profile);
    const bool profile_ok = profile_diags.empty();
    for (auto& d : profile_diags) {
      d.subject = e.id;
      diags.push_back(std::move(d));
    }
    if (!profile_ok) continue;

    if (e.geom.area_lo != e.profile.area_lo() || e.geom.area_hi != e.profile.area_hi()) {
      diags.push_back({diag::kAreaMismatch, e.id, std::nullopt,
                       "geometry span does not match profile breakpoints"});
      continue;
    }
    if (!(e.geom.area_lo < e.geom.area_hi)) {
      diags.push_back({diag::kAreaMismatch, e.id, std::nullopt, "empty area interval"});
      continue;
    }

    const TreeNode& inner = ix.node(e.inner);
    // Inner endpoint: saddle ends need vanishing rotation; a degenerate
    // extremum may sit at rho 0, so extremum ends are unconstrained.
    if (inner.kind == NodeKind::saddle && e.profile.breakpoints.front().second != 0) {
      diags.push_back({diag::kEndpointRotationNonzero, e.id, std::size_t{0},
                       "rho must vanish at a saddle-adjacent endpoint"});
    }
    if (e.profile.breakpoints.back().second != 0) {
      // Outer endpoint is a saddle or the boundary in every tree.
      diags.push_back({diag::kEndpointRotationNonzero, e.id,
                       e.profile.breakpoints.size() - 1,
                       "rho must vanish at a saddle- or boundary-adjacent endpoint"});
    }

    if (e.geom.level_at_lo != inner.level) {
      diags.push_back({diag::kLevelMismatch, e.id, std::nullopt,
                       "level at inner end is " + rat_str(e.geom.level_at_lo) +
                           " but vertex '" + e.inner + "' sits at " + rat_str(inner.level)});
    }
    const Rat outer_level = e.outer.empty() ? Rat(0) : ix.node(e.outer).level;
    const Rat reached = e.geom.level_at_lo + e.profile.integral_to(e.geom.area_hi);
    if (reached != outer_level) {
      diags.push_back({diag::kLevelMismatch, e.id, std::nullopt,
                       "level integrates to " + rat_str(reached) + " at the outer end, expected " +
                           rat_str(outer_level)});
    }

    if (inner.kind == NodeKind::extremum && e.geom.area_lo != 0) {
      diags.push_back({diag::kAreaMismatch, e.id, std::nullopt,
                       "edge at an extremum must start at area 0"});
    }
    if (inner.kind == NodeKind::saddle) {
      const auto& kids = ix.child_edges(e.inner);
      Rat total = 0;
      for (const TreeEdge* kid : kids) total += kid->geom.area_hi;
      if (total != e.geom.area_lo) {
        diags.push_back({diag::kAreaMismatch, e.id, std::nullopt,
                         "child subtrees enclose " + rat_str(total) +
                             " but the edge starts at " + rat_str(e.geom.area_lo)});
      }
    }
  }
  return diags;
}

void require_valid(const PlaneTree& tree) {
  auto diags = validate_tree(tree);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

std::vector<SpectrumEntry> spectrum(const PlaneTree& tree) {
  const TreeIndex ix = TreeIndex::build(tree);
  std::vector<SpectrumEntry> out;

  SpectrumEntry trivial;
  trivial.kind = SpectrumKind::trivial;
  trivial.source = "Y";
  trivial.negative = true;
  trivial.ref = FeatureRef::trivial();
  out.push_back(trivial);

  for (const auto& n : tree.nodes) {
    SpectrumEntry s;
    s.source = n.id;
    s.level = n.level;
    s.action = n.level;
    s.ref = FeatureRef::at_node(n.id);
    if (n.kind == NodeKind::saddle) {
      s.kind = SpectrumKind::saddle;
      s.rho = 0;
    } else {
      s.kind = SpectrumKind::extremum;
      s.rho = ix.parent_edge(n.id).profile.breakpoints.front().second;
    }
    s.negative = s.rho <= 0;
    out.push_back(std::move(s));
  }

  for (const auto& e : tree.edges) {
    for (auto& p : fixed_points(e.geom, e.profile, e.id)) {
      SpectrumEntry s;
      s.kind = SpectrumKind::orbit;
      s.source = e.id;
      s.area = p.area;
      s.rho = Rat(p.k);
      s.k = p.k;
      s.level = p.level;
      s.action = p.action;
      s.negative = p.k < 0;
      s.ref = FeatureRef::at_orbit(e.id, p.area);
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace unlk
