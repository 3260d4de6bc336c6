#pragma once

#include <cstdint>
#include <vector>

#include "unlk/plane_tree.hpp"

namespace unlk {

// Recursive evaluation over the annulus tree: strip the base annulus, shift
// the subtrees to zero boundary level, combine. Independent of the brute
// force route in mnus_oracle.hpp.
Rat nu_recursive(const PlaneTree& tree);

// The invariant coincides with the spectral value for these flows.
inline Rat c_recursive(const PlaneTree& tree) { return nu_recursive(tree); }

// Disjointly supported union: the invariant of the union is the max over
// components; 0 for the empty family.
Rat nu_forest(const std::vector<PlaneTree>& trees);

// Winding of one fixed point around another: 0 unless one lies strictly
// inside the other's disk, else the rotation integer of the outer feature
// (orbits wind by k, a saddle's pinched circle does not wind).
std::int64_t linking_number(const PlaneTree& tree, const FeatureRef& p, const FeatureRef& q);

}  // namespace unlk
