#pragma once

#include <string>
#include <vector>

#include "unlk/deformation.hpp"
#include "unlk/plane_tree.hpp"

namespace unlk {

// Fixed-width float rendering used by every report that leaves rational
// arithmetic: 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

// CSV with columns source,kind,area,k,level,action,negative; rationals as
// "p/q", k blank for entries that are not orbit circles.
std::string spectrum_csv(const std::vector<SpectrumEntry>& entries);

// CSV with columns sigma,branch_id,action,provenance; one row per branch
// present at each sample, samples outermost, branches by id.
std::string bifurcation_csv(const BifurcationDiagram& d);

// Standalone SVG rendering of a bifurcation diagram: one polyline run per
// uninterrupted stretch of a branch, colored by provenance. Pure emission.
std::string bifurcation_svg(const BifurcationDiagram& d);

}  // namespace unlk
