#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unlk/errors.hpp"
#include "unlk/rational.hpp"

namespace unlk {

// Rotation-symmetric height data on the unit-area sphere. z is the area
// coordinate: the disk below latitude z has area z, the south pole sits at
// z = 0 and the north pole at z = 1. The profile stores the derivative
// h'(z) piecewise-linearly plus the value at the south pole.
struct HeightProfile {
  std::vector<std::pair<Rat, Rat>> dh;  // (z, h'(z)) breakpoints spanning [0, 1]
  Rat h0;                               // h(0)

  Rat dh_at(const Rat& z) const;
  // h0 plus the exact integral of dh over [0, z].
  Rat h_at(const Rat& z) const;
};

std::vector<Diagnostic> validate_sphere(const HeightProfile& hp);
void require_valid(const HeightProfile& hp);

struct SphereFixedPoint {
  Rat z;
  std::int64_t k = 0;  // derivative value; the poles carry 0
};

// The poles plus every interior circle where h' hits a nonzero integer.
// Interior h' = 0 circles are not isolated fixed points and are skipped;
// a whole segment sitting at a nonzero integer is rejected
// (DegenerateProfileError).
std::vector<SphereFixedPoint> sphere_fixed_points(const HeightProfile& hp);

// Gluing one extra copy of the generator onto a capping shifts the action
// by -1 (one unit of area) and the index by -2.
inline constexpr int kRecapActionShift = -1;
inline constexpr int kRecapIndexShift = -2;

struct CappedOrbit {
  Rat z;
  std::int64_t k = 0;
  std::int64_t m = 0;            // extra generators glued onto the capping
  Rat action;                    // h(z) + k(1-z) - m
  std::optional<int> cz_index;   // empty at a tangential interior touch
};

// Checks that (z, k) is a fixed point (a pole with k = 0, or an interior
// circle with h'(z) = k != 0), then applies the capping bookkeeping:
// index 0/2 at the south/north pole, 2k at an increasing interior crossing,
// 2k + 2 at a decreasing one, shifted by the recap constants per m.
CappedOrbit capped_orbit(const HeightProfile& hp, const Rat& z, std::int64_t k,
                         std::int64_t m);
Rat capped_action(const HeightProfile& hp, const Rat& z, std::int64_t k, std::int64_t m);

// Closed-form invariant for single-bump height profiles: h' vanishes on an
// initial interval, stays strictly between 0 and 2 above it, crosses 1
// exactly twice (up at z_beta, down at z_alpha) and ends small but nonzero.
// Returns min{h(z_beta) + 1 - z_beta, h(1)} after asserting the candidate
// ordering that backs the formula. warnings (optional) collects non-fatal
// notes such as a large end slope.
Rat c_simple_bump(const HeightProfile& hp, std::vector<std::string>* warnings = nullptr);

struct CounterexampleReport {
  Rat z_beta, delta_prime;  // requested parameters
  Rat shoulder_slope;       // constant h' right of the bump shoulder
  Rat z_gamma;              // first fixed point of the split-off right part
  Rat c_sum;                // invariant of the combined profile
  Rat c1;                   // nonpositive part: 0, the upper bound that matters
  Rat c2;                   // right part, pinned by enumeration + energy bound
  Rat gap;                  // max(c1, c2) - c_sum, strictly positive
  HeightProfile h, h1, h2;
};

// Builds a bump whose invariant drops strictly under splitting: flattening
// h to zero on a band around z = 1/2 decomposes it as h1 + h2 with
// max(c(h1), c(h2)) strictly above c(h1 + h2). Every inequality the
// construction relies on is re-checked exactly; a violated one raises
// ConstructionFailedError naming it.
CounterexampleReport counterexample(const Rat& z_beta, const Rat& delta_prime);

namespace diag {
inline constexpr const char* kBadDomain = "BadDomain";
}

}  // namespace unlk
