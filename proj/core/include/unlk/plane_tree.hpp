#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unlk/profile.hpp"

namespace unlk {

enum class NodeKind { extremum, saddle };

struct TreeNode {
  std::string id;
  NodeKind kind = NodeKind::extremum;
  Rat level;
};

// Edge between `inner` (deeper vertex) and `outer` (vertex closer to the
// support boundary; empty string = the boundary itself, level 0).
struct TreeEdge {
  std::string id;
  std::string inner;
  std::string outer;
  EdgeGeometry geom;
  RhoProfile profile;
};

// Nested-annulus model of a compactly supported flow on the plane: a rooted
// tree of annuli. Exactly one edge touches the boundary; saddles carry two
// child edges, extrema none.
struct PlaneTree {
  std::vector<TreeNode> nodes;
  std::vector<TreeEdge> edges;
};

// Lookup tables over a structurally sound tree. Throws InvalidTreeError when
// the structure itself is broken (dangling ids, no root, wrong valence);
// value-level problems are left to validate_tree.
class TreeIndex {
 public:
  static TreeIndex build(const PlaneTree& tree);

  const PlaneTree& tree() const { return *tree_; }
  const TreeNode& node(const std::string& id) const;
  const TreeEdge& edge(const std::string& id) const;
  bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
  bool has_edge(const std::string& id) const { return edges_.count(id) != 0; }
  const TreeEdge& root_edge() const { return *root_; }
  // Edge whose inner endpoint is `node_id`.
  const TreeEdge& parent_edge(const std::string& node_id) const;
  // Edges whose outer endpoint is `node_id` (two for saddles, none else).
  const std::vector<const TreeEdge*>& child_edges(const std::string& node_id) const;
  // Edge ids on the path from `node_id` to the boundary, innermost first;
  // starts with the node's parent edge.
  const std::vector<std::string>& path_edges(const std::string& node_id) const;

 private:
  const PlaneTree* tree_ = nullptr;
  std::map<std::string, const TreeNode*> nodes_;
  std::map<std::string, const TreeEdge*> edges_;
  const TreeEdge* root_ = nullptr;
  std::map<std::string, const TreeEdge*> parent_;
  std::map<std::string, std::vector<const TreeEdge*>> children_;
  std::map<std::string, std::vector<std::string>> paths_;
};

// A fixed-point feature addressed inside a tree: the trivial exterior point,
// a critical vertex, or an orbit circle on an edge.
struct FeatureRef {
  enum class Type { trivial, node, orbit };
  Type type = Type::trivial;
  std::string id;  // node id or edge id
  Rat area;        // orbits only

  static FeatureRef trivial() { return {}; }
  static FeatureRef at_node(std::string node_id);
  static FeatureRef at_orbit(std::string edge_id, Rat area);
};

// True when `g` lies strictly inside the disk bounded by `outer`. Only orbit
// circles and saddle figure-eights bound disks; extrema and the exterior
// point enclose nothing.
bool strictly_inside(const TreeIndex& index, const FeatureRef& g, const FeatureRef& outer);

enum class SpectrumKind { trivial, extremum, saddle, orbit };

struct SpectrumEntry {
  SpectrumKind kind = SpectrumKind::trivial;
  std::string source;                // "Y", vertex id, or edge id
  Rat area;                          // enclosed area; 0 for critical points
  Rat rho;                           // rotation: integer for orbits
  std::optional<std::int64_t> k;     // orbits only
  Rat level;
  Rat action;
  bool negative = false;             // rho <= 0
  FeatureRef ref;
};

// Full value checks; empty result means the tree is a valid model.
std::vector<Diagnostic> validate_tree(const PlaneTree& tree);

// Throws ValidationError when validate_tree is nonempty.
void require_valid(const PlaneTree& tree);

// Action spectrum of the time-1 flow: the exterior point, every critical
// vertex, and every orbit circle. Deterministic order: trivial entry, then
// vertices in document order, then edges in document order with orbits by
// increasing area.
std::vector<SpectrumEntry> spectrum(const PlaneTree& tree);

namespace diag {
inline constexpr const char* kInvalidTree = "InvalidTree";
inline constexpr const char* kDuplicateLevel = "DuplicateLevel";
inline constexpr const char* kSaddleAtZeroLevel = "SaddleAtZeroLevel";
inline constexpr const char* kExtremumAtZeroLevel = "ExtremumAtZeroLevel";
inline constexpr const char* kAreaMismatch = "AreaMismatch";
inline constexpr const char* kLevelMismatch = "LevelMismatch";
inline constexpr const char* kEndpointRotationNonzero = "EndpointRotationNonzero";
}  // namespace diag

}  // namespace unlk
