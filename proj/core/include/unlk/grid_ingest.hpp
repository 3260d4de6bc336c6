#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "unlk/plane_tree.hpp"

namespace unlk {

// Sampled compactly supported scalar field on a rectangular grid. One value
// per grid vertex, row-major; each vertex owns a cell of area spacing^2.
// The outer boundary ring must be identically zero.
struct ScalarGrid {
  int width = 0;
  int height = 0;
  double spacing = 1.0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

std::vector<Diagnostic> validate_grid(const ScalarGrid& g);
void require_valid(const ScalarGrid& g);

// CSV layout: the literal header line `width,height,spacing`, one line with
// the three values, then height rows of width comma-separated samples.
ScalarGrid read_grid_csv(std::istream& in);
void write_grid_csv(std::ostream& out, const ScalarGrid& g);
// Binary layout: magic "UNLK", u32 width, u32 height, f32 spacing, then
// width*height f32 samples, all little-endian.
ScalarGrid read_grid_bin(std::istream& in);
void write_grid_bin(std::ostream& out, const ScalarGrid& g);
// Dispatches on the magic bytes.
ScalarGrid read_grid(const std::string& path);

// One monotone arc of the level-set tree between two critical cells. cells
// lists every grid vertex assigned to the arc, inner end first; the inner
// critical vertex is part of the arc, the outer one belongs to the next arc
// out. outer_vertex -1 marks the arc reaching the contracted zero region.
struct ContourArcChain {
  long long inner_vertex = 0;
  long long outer_vertex = -1;
  std::vector<long long> cells;
  long long inside_count = 0;  // vertices strictly inside the inner end

  // (level, enclosed_area) samples, inner end first; cell-count exact.
  std::vector<std::pair<double, double>> samples(double cell_area,
                                                 const std::vector<double>& values) const;
};

// Level-set tree of the grid: vertices totally ordered by (value, index),
// connectivity triangulated, the zero region around the boundary contracted
// to the root. Leaves are extremum cells, interior nodes saddle cells.
struct ContourTree {
  int width = 0;
  int height = 0;
  double spacing = 1.0;
  std::vector<double> values;          // per grid vertex, row-major
  std::vector<ContourArcChain> edges;  // root arc first, then outward-in order
  std::vector<long long> extreme_cells, saddle_cells;
};

// Join/split merge over the triangulated grid. Throws NonMorseGridError when
// a configuration stays degenerate under the (value, index) tiebreak.
ContourTree contour_tree(const ScalarGrid& g);

// Downsamples each arc to at most n_levels spans, estimates the rotation
// profile by centered level/area differences, snaps saddle- and
// boundary-end rotation to zero, lifts everything to exact rationals (the
// rotation rescaled so levels integrate exactly), and returns a validated
// tree model. prune_eps > 0 first removes leaf features whose level span is
// below it. warnings (optional) collects notes, e.g. a too-coarse sampling.
PlaneTree estimate_profiles(const ContourTree& t, int n_levels, double prune_eps = 0,
                            std::vector<std::string>* warnings = nullptr);

namespace diag {
inline constexpr const char* kBadGridSize = "BadGridSize";
inline constexpr const char* kBoundaryNotZero = "BoundaryNotZero";
inline constexpr const char* kNotFinite = "NotFinite";
}  // namespace diag

}  // namespace unlk
