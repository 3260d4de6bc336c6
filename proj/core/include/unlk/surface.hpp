#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unlk/plane_tree.hpp"

namespace unlk {

struct SurfaceVertex {
  std::string id;
  NodeKind kind = NodeKind::extremum;
  Rat level;
};

// Edge of the level-set graph of a closed surface. Branch edges (the ones
// leaf stripping removes) carry annulus data; cycle edges need none.
// ends[0] is the end the profile's area_lo refers to (the deeper end of a
// branch edge), ends[1] the end closer to the cycle part.
struct SurfaceEdge {
  std::string id;
  std::array<std::string, 2> ends;
  std::optional<EdgeGeometry> geom;
  std::optional<RhoProfile> profile;
};

struct SurfaceGraph {
  long genus = 0;
  std::vector<SurfaceVertex> vertices;
  std::vector<SurfaceEdge> edges;
};

// One disk hanging off the cycle part: the saddle it attaches to, the level
// of its boundary circle, and the hanging branch as a plane-tree model with
// all levels shifted so the boundary sits at 0.
struct DiskAttachment {
  std::string saddle;
  std::string branch_edge;
  Rat boundary_level;
  PlaneTree subtree;
};

struct DiskDecomposition {
  std::vector<std::string> essential_saddles;  // vertex ids, document order
  std::vector<std::string> core_edges;         // edge ids, document order
  std::vector<DiskAttachment> disks;           // by attachment edge, document order
};

std::vector<Diagnostic> validate_surface(const SurfaceGraph& g);
void require_valid(const SurfaceGraph& g);

// Iteratively strips degree-1 vertices; what survives is the cycle part
// (essential saddles and the annuli between them), what falls off is grouped
// into per-branch disks. Throws EmptyCoreError when everything strips.
DiskDecomposition core_graph(const SurfaceGraph& g);

// Same decomposition with the opposite stripping seed order; must agree with
// core_graph (removal-order independence).
DiskDecomposition core_graph_reverse(const SurfaceGraph& g);

// max over disks of boundary level + invariant of the shifted subtree.
Rat nu_surface(const SurfaceGraph& g);
// Same maximum with each subtree evaluated by the brute-force route.
Rat nu_surface_oracle(const SurfaceGraph& g);

// max level over essential saddles.
Rat zeta(const SurfaceGraph& g);

// Cell = vertex preimage (critical point or pinched level circle) or edge
// preimage (open annulus). Ids of cells are the vertex / edge ids.
// Cells lying entirely inside the open superlevel set {H > h0}.
std::vector<std::string> superlevel_cells(const SurfaceGraph& g, const Rat& h0);

struct ZetaScanResult {
  Rat value;
  bool coarse = false;                     // thresholds failed to bracket
  std::optional<Rat> clearing_threshold;   // smallest threshold emptying the core
};

// Scan the thresholds for the smallest one whose superlevel set misses every
// core cell, then refine to the max core level still inside at the largest
// non-clearing threshold. Coarse when the thresholds fail to bracket.
ZetaScanResult zeta_scan(const SurfaceGraph& g, std::vector<Rat> thresholds);

// X given as a list of cell ids. Heavy: X meets the cycle part. Superheavy:
// X contains the whole cycle part. Unknown ids throw UnknownCellError.
bool heavy(const SurfaceGraph& g, const std::vector<std::string>& cells);
bool superheavy(const SurfaceGraph& g, const std::vector<std::string>& cells);

// All levels negated; kinds, genus, and structure unchanged.
SurfaceGraph negate(const SurfaceGraph& g);

// (max core level squared read directly, max of the two quasi-state squares).
// The two routes must agree.
std::pair<Rat, Rat> dispersion_check(const SurfaceGraph& g);

namespace diag {
inline constexpr const char* kInvalidGraph = "InvalidGraph";
inline constexpr const char* kBadGenus = "BadGenus";
inline constexpr const char* kBadDegree = "BadDegree";
inline constexpr const char* kNotConnected = "NotConnected";
inline constexpr const char* kEulerMismatch = "EulerMismatch";
inline constexpr const char* kExtremeLevelNotExtremum = "ExtremeLevelNotExtremum";
inline constexpr const char* kMissingProfile = "MissingProfile";
}  // namespace diag

}  // namespace unlk
