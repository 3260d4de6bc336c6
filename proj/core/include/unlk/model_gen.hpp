#pragma once

#include <random>
#include <utility>

#include "unlk/grid_ingest.hpp"
#include "unlk/plane_tree.hpp"
#include "unlk/profile.hpp"
#include "unlk/surface.hpp"

namespace unlk {

// All generators are deterministic functions of the passed engine state.
using Rng = std::mt19937_64;

// Radial bump of support area 1 and peak level 1: one extremum, rotation
// running linearly from -2 at the center to 0 at the boundary.
PlaneTree single_mountain();

// Two mountains (areas 3/10 and 1/5) over a shared base annulus with the
// connecting saddle at level 1/2.
PlaneTree double_mountain();

// Same model with all levels (and rotations) negated.
PlaneTree negate_tree(const PlaneTree& t);

// Random valid tree: saddle depth bounded by max_depth, regenerated until the
// model carries at most max_negative nonpositive-rotation fixed points.
PlaneTree random_tree(Rng& rng, int max_depth = 4, int max_negative = 12);

// Single-extremum tree whose rotation starts below -1, dips to a unique
// minimum, and climbs back to 0: exactly one rotation -1 point, with the
// rotation increasing through it.
PlaneTree random_simple_bump(Rng& rng);

// Larger-area solution of rho = -1 on a simple-bump model and the closed-form
// value level(a1) + a1 it implies; computed directly from the profile data,
// sharing nothing with the recursion or the oracle.
std::pair<Rat, Rat> simple_bump_prediction(const PlaneTree& t);

// Two saddles on a two-edge cycle, one disk above, one below.
SurfaceGraph torus_model();

// Two saddle triangles joined by a bridge, four disks: the standard genus-2
// decomposition with 6 essential saddles and 7 core edges.
SurfaceGraph genus2_figure();

// Random closed-surface graph of the requested genus (>= 1): a cycle with
// genus-1 chords and a pendant disk on every remaining degree-2 vertex; the
// global max and min levels land on pendant extrema.
SurfaceGraph random_surface(Rng& rng, long genus);

// Multiply every area by factor (> 0), dividing rotation values so all levels
// are preserved.
SurfaceGraph scale_surface_areas(const SurfaceGraph& g, const Rat& factor);

// Add delta to every critical level and every edge's base level.
SurfaceGraph shift_surface_levels(const SurfaceGraph& g, const Rat& delta);

// Nonnegative compactly supported profile with non-integer maximum above 1;
// every unit stage between consecutive integer levels carries positive mass.
RhoProfile random_stage_profile(Rng& rng);

// Sampled rasters of the two reference models on an n x n grid, spacing
// normalized so the support counts as area 1. Each support sample takes the
// model's exact level at the enclosed area its rank represents.
ScalarGrid rasterize_single_mountain(int n);
ScalarGrid rasterize_double_mountain(int n);

}  // namespace unlk
