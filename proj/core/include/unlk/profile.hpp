#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unlk/errors.hpp"
#include "unlk/rational.hpp"

namespace unlk {

// Piecewise linear rotation data along one annulus edge.
//
// breakpoints are (area, rho) pairs with strictly increasing areas; rho is
// interpolated linearly between them. Areas are absolute enclosed areas, so
// an edge whose inner end is an extremum starts at its subtree offset (0 for
// a plain disk) and the outer end carries the full enclosed area.
struct RhoProfile {
  std::vector<std::pair<Rat, Rat>> breakpoints;

  const Rat& area_lo() const;
  const Rat& area_hi() const;
  // Linear interpolation; throws OutOfRangeError outside [area_lo, area_hi].
  Rat rho_at(const Rat& area) const;
  // Exact integral of rho over [area_lo, area].
  Rat integral_to(const Rat& area) const;
  bool operator==(const RhoProfile&) const = default;
};

// Placement of an edge: the area interval it spans and the level at the
// inner end (area_lo). Levels anywhere on the edge follow by integration.
struct EdgeGeometry {
  Rat area_lo;
  Rat area_hi;
  Rat level_at_lo;
  bool operator==(const EdgeGeometry&) const = default;
};

// A circle of fixed points: rho hits the nonzero integer k at `area`.
struct OrbitPoint {
  std::string edge_id;
  Rat area;
  std::int64_t k = 0;
  Rat level;
  Rat action;
};

// Level of the orbit circle at `area`: level_at_lo plus the exact integral
// of rho. Throws OutOfRangeError when area is outside the edge interval.
Rat level_at(const EdgeGeometry& geom, const RhoProfile& profile, const Rat& area);

// level - area * k. A critical point has zero enclosed area, so its action
// is its level.
Rat action_of(const Rat& level, const Rat& area, std::int64_t k);

// All circles where rho equals a nonzero integer, open interval only (the
// interval endpoints belong to the adjacent features). A tangential touch
// yields a single point. Throws DegenerateProfileError when rho sits at a
// nonzero integer on a whole segment.
std::vector<OrbitPoint> fixed_points(const EdgeGeometry& geom, const RhoProfile& profile,
                                     const std::string& edge_id = {});

// Structural checks on one profile: increasing areas, constant interior
// sign, no zero in the open interior, no flat segment at a nonzero integer.
// Endpoint rho values are the business of the surrounding tree and are not
// judged here.
std::vector<Diagnostic> validate_profile(const RhoProfile& profile);

namespace diag {
inline constexpr const char* kTooFewBreakpoints = "TooFewBreakpoints";
inline constexpr const char* kBadAreaOrder = "BadAreaOrder";
inline constexpr const char* kFlatIntegerSegment = "FlatIntegerSegment";
inline constexpr const char* kSignChangeInInterior = "SignChangeInInterior";
}  // namespace diag

}  // namespace unlk
