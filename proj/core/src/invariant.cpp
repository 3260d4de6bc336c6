#include "unlk/invariant.hpp"

#include <algorithm>
#include <optional>

namespace unlk {

namespace {

// Minimum shifted action over orbit circles on one edge; empty when the
// annulus carries no integer rotation.
std::optional<Rat> min_orbit_action(const TreeEdge& e, const Rat& shift) {
  std::optional<Rat> best;
  for (const auto& p : fixed_points(e.geom, e.profile, e.id)) {
    const Rat a = p.action + shift;
    if (!best || a < *best) best = a;
  }
  return best;
}

// Value of the subtree whose base annulus is `e`, with levels shifted so the
// outer end of `e` sits at 0.
Rat nu_edge(const TreeIndex& ix, const TreeEdge& e, const Rat& shift) {
  const TreeNode& inner = ix.node(e.inner);

  if (inner.kind == NodeKind::extremum) {
    const Rat top = inner.level + shift;
    if (top < 0) return 0;
    // No saddle: the base is the whole disk, extremum included.
    Rat best = top;
    if (const auto orbit = min_orbit_action(e, shift)) best = std::min(best, *orbit);
    return best;
  }

  const Rat saddle_level = inner.level + shift;
  const auto& kids = ix.child_edges(e.inner);
  Rat sub = nu_edge(ix, *kids[0], -inner.level);
  sub = std::max(sub, nu_edge(ix, *kids[1], -inner.level));
  const Rat through = saddle_level + sub;

  if (saddle_level < 0) return std::max(Rat(0), through);
  const auto base = min_orbit_action(e, shift);
  return base ? std::min(*base, through) : through;
}

}  // namespace

Rat nu_recursive(const PlaneTree& tree) {
  const TreeIndex ix = TreeIndex::build(tree);
  return nu_edge(ix, ix.root_edge(), 0);
}

Rat nu_forest(const std::vector<PlaneTree>& trees) {
  Rat best = 0;
  for (const auto& t : trees) best = std::max(best, nu_recursive(t));
  return best;
}

std::int64_t linking_number(const PlaneTree& tree, const FeatureRef& p, const FeatureRef& q) {
  const TreeIndex ix = TreeIndex::build(tree);
  const FeatureRef* outer = nullptr;
  if (strictly_inside(ix, p, q)) {
    outer = &q;
  } else if (strictly_inside(ix, q, p)) {
    outer = &p;
  } else {
    return 0;
  }
  switch (outer->type) {
    case FeatureRef::Type::orbit: {
      const TreeEdge& e = ix.edge(outer->id);
      const Rat r = e.profile.rho_at(outer->area);
      if (denominator(r) != 1) {
        throw InvalidPointError("orbit at area " + rat_str(outer->area) +
                                " on edge '" + outer->id + "' has non-integer rotation " +
                                rat_str(r));
      }
      return numerator(r).convert_to<std::int64_t>();
    }
    case FeatureRef::Type::node:
      return 0;  // saddle: the pinched circle does not wind
    case FeatureRef::Type::trivial:
      return 0;
  }
  return 0;
}

}  // namespace unlk
