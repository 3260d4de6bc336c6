#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unlk/plane_tree.hpp"

namespace unlk {

// Stagewise truncation of a nonnegative slope bump g: gamma_k = min(g, k),
// stage masses h_k = integral of gamma_{k+1} - gamma_k, and the schedule
// 1 = tau_0 > tau_1 > ... > tau_{N+1} = 0 with tau_k = (h_k+...+h_N)/h.
struct TruncationData {
  RhoProfile g;             // breakpoints refined at every integer crossing
  long long n_max = 0;      // N: the top stage index
  Rat h;                    // total integral of g
  std::vector<Rat> h_k;     // stage masses, size N+1
  std::vector<Rat> tau;     // size N+2, tau[0] = 1, tau[N+1] = 0
};

// Validates g >= 0 with positive total mass and builds the stage data.
// Rejects vanishing stage masses (DegenerateProfileError).
TruncationData build_truncation(const RhoProfile& g);

// Shortest gap between consecutive interior integer-value points of g
// (and the domain ends), divided by 100.
Rat default_flatten_width(const RhoProfile& g);

// Replaces each interior point p with g(p) integer by a plateau [p-w, p+w]
// at that integer, reconnecting linearly on [p-2w, p-w] and [p+w, p+2w].
// width <= 0 selects default_flatten_width. Throws OverlapError when the
// radius-2w neighborhoods collide or leave the domain.
RhoProfile flatten_at_integers(const RhoProfile& g, const Rat& width);

// The stage-k interpolation gamma_k + (h/h_k)(tau_k - sigma) * delta_k for
// sigma in [tau_{k+1}, tau_k); full g at sigma = 0, zero at sigma = 1.
RhoProfile special_deformation(const TruncationData& td, const Rat& sigma);

struct SpectrumSample {
  Rat action;
  std::string provenance;  // "outside", "inside", or "tree"
  bool operator==(const SpectrumSample& o) const {
    return action == o.action && provenance == o.provenance;
  }
  bool operator<(const SpectrumSample& o) const {
    if (action != o.action) return action < o.action;
    return provenance < o.provenance;
  }
};

// Action values of the disk whose rotation is -g_sigma (zero boundary
// level): the exterior 0, the summit level = integral of g_sigma, and one
// value per circle where g_sigma sits at a positive integer. Constant
// integer plateaus contribute a single value (the action is constant along
// them). Domain endpoints are excluded.
std::vector<SpectrumSample> bump_spectrum(const RhoProfile& g_sigma);

struct Family {
  enum class Kind { linear, special };
  Kind kind = Kind::special;
  // linear: breakpointwise interpolation of levels and rotation values
  // between two structurally identical trees
  PlaneTree from, to;
  // special: slope bump deformed by stages, plus fixed offsets riding the
  // shrinking summit as straight lines (1-sigma)h + s
  RhoProfile g;
  Rat flatten_width;        // <= 0: default
  std::vector<Rat> inside;
};

// Flattened-and-staged data for a special family (throws for linear).
TruncationData family_truncation(const Family& f);

// Exact spectrum of the family member at sigma, sorted ascending.
std::vector<SpectrumSample> family_spectrum(const Family& f, const Rat& sigma);

// Worst-case |d action / d sigma|: h for special families; for linear ones
// the max absolute level/rotation displacement bound.
Rat family_slope_bound(const Family& f);

struct Branch {
  int id = 0;
  std::string provenance;
  std::vector<std::optional<Rat>> values;  // one slot per sigma sample
};

struct BifurcationDiagram {
  std::vector<Rat> sigmas;
  std::vector<Branch> branches;
};

// Samples the family at sigma = j/steps and tracks branches by
// order-preserving alignment of the sorted per-sample spectra. A matched
// value moving farther than tol between samples raises
// TrackingAmbiguousError; unmatched values open or close branches.
BifurcationDiagram bifurcation(const Family& f, int steps, const Rat& tol);

struct SlopeReport {
  bool pass = false;
  double min_slope = 0;
  double max_slope = 0;
};

// Finite-difference slopes over every tracked branch; pass when the minimum
// stays >= -bound*(1+tol).
SlopeReport slope_check(const BifurcationDiagram& d, double bound, double tol);

// Follows the branch through (0, c0): its exact value per sample, clamped
// to 0 once it reaches the nonpositive range. Throws NotInSpectrumError when
// no branch starts within tol of c0, CollisionError when another nonzero
// branch comes within tol of the followed value.
std::vector<std::pair<Rat, Rat>> continue_c(const BifurcationDiagram& d, const Rat& c0,
                                            const Rat& tol);

}  // namespace unlk
