#pragma once

#include <vector>

#include "unlk/plane_tree.hpp"

namespace unlk {

// One maximal negative unlinked set: the exterior point plus a maximal
// collection of nonpositive-rotation fixed points no one of which sits
// strictly inside another member's orbit disk.
struct Mnus {
  std::vector<SpectrumEntry> members;  // excludes the implicit exterior point
  Rat sup_action;                      // max over members and the exterior 0
};

// Brute force: filters all subsets of the nonpositive-rotation fixed points
// (unlinkedness is downward closed, so maximal survivors are the full list).
// Shares no logic with the recursive invariant. Throws TooLargeError beyond
// 20 candidate points.
std::vector<Mnus> enumerate_mnus(const PlaneTree& tree);

// min over all mnus of the sup of member actions.
Rat nu_oracle(const PlaneTree& tree);

}  // namespace unlk
