#include "unlk/profile.hpp"

#include <algorithm>
#include <map>

namespace unlk {

namespace {

bool is_integer(const Rat& r) { return denominator(r) == 1; }

void require_shape(const RhoProfile& p) {
  if (p.breakpoints.size() < 2) {
    throw DegenerateProfileError("profile needs at least two breakpoints");
  }
  for (std::size_t i = 0; i + 1 < p.breakpoints.size(); ++i) {
    if (!(p.breakpoints[i].first < p.breakpoints[i + 1].first)) {
      throw DegenerateProfileError("profile areas must be strictly increasing");
    }
  }
}

}  // namespace

const Rat& RhoProfile::area_lo() const {
  if (breakpoints.empty()) throw DegenerateProfileError("empty profile");
  return breakpoints.front().first;
}

const Rat& RhoProfile::area_hi() const {
  if (breakpoints.empty()) throw DegenerateProfileError("empty profile");
  return breakpoints.back().first;
}

Rat RhoProfile::rho_at(const Rat& area) const {
  require_shape(*this);
  if (area < area_lo() || area > area_hi()) {
    throw OutOfRangeError("area " + rat_str(area) + " outside [" + rat_str(area_lo()) +
                          ", " + rat_str(area_hi()) + "]");
  }
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const auto& [a0, r0] = breakpoints[i];
    const auto& [a1, r1] = breakpoints[i + 1];
    if (area <= a1) {
      return r0 + (area - a0) * (r1 - r0) / (a1 - a0);
    }
  }
  return breakpoints.back().second;
}

Rat RhoProfile::integral_to(const Rat& area) const {
  require_shape(*this);
  if (area < area_lo() || area > area_hi()) {
    throw OutOfRangeError("area " + rat_str(area) + " outside [" + rat_str(area_lo()) +
                          ", " + rat_str(area_hi()) + "]");
  }
  Rat total = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const auto& [a0, r0] = breakpoints[i];
    const auto& [a1, r1] = breakpoints[i + 1];
    if (area <= a0) break;
    const Rat upper = std::min(area, a1);
    const Rat w = upper - a0;
    const Rat slope = (r1 - r0) / (a1 - a0);
    total += r0 * w + slope * w * w / 2;
    if (upper == area) break;
  }
  return total;
}

Rat level_at(const EdgeGeometry& geom, const RhoProfile& profile, const Rat& area) {
  if (geom.area_lo != profile.area_lo() || geom.area_hi != profile.area_hi()) {
    throw InvalidTreeError("edge geometry does not match profile area span");
  }
  return geom.level_at_lo + profile.integral_to(area);
}

Rat action_of(const Rat& level, const Rat& area, std::int64_t k) {
  return level - area * Rat(k);
}

std::vector<OrbitPoint> fixed_points(const EdgeGeometry& geom, const RhoProfile& profile,
                                     const std::string& edge_id) {
  require_shape(profile);
  // Dedupes touches at shared breakpoints: key is (area, k).
  std::map<std::pair<Rat, std::int64_t>, bool> seen;
  std::vector<OrbitPoint> out;
  for (std::size_t i = 0; i + 1 < profile.breakpoints.size(); ++i) {
    const auto& [a0, r0] = profile.breakpoints[i];
    const auto& [a1, r1] = profile.breakpoints[i + 1];
    if (r0 == r1) {
      if (is_integer(r0) && r0 != 0) {
        throw DegenerateProfileError("rho constant at nonzero integer " + rat_str(r0) +
                                     " on [" + rat_str(a0) + ", " + rat_str(a1) + "]");
      }
      continue;
    }
    const Rat lo = std::min(r0, r1);
    const Rat hi = std::max(r0, r1);
    for (BigInt kb = rat_ceil(lo); kb <= rat_floor(hi); ++kb) {
      if (kb == 0) continue;
      const Rat k{kb};
      const Rat a_star = a0 + (k - r0) * (a1 - a0) / (r1 - r0);
      if (a_star <= profile.area_lo() || a_star >= profile.area_hi()) continue;
      const auto key = std::make_pair(a_star, kb.convert_to<std::int64_t>());
      if (seen.emplace(key, true).second) {
        OrbitPoint p;
        p.edge_id = edge_id;
        p.area = a_star;
        p.k = key.second;
        p.level = level_at(geom, profile, a_star);
        p.action = action_of(p.level, p.area, p.k);
        out.push_back(std::move(p));
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const OrbitPoint& x, const OrbitPoint& y) { return x.area < y.area; });
  return out;
}

std::vector<Diagnostic> validate_profile(const RhoProfile& profile) {
  std::vector<Diagnostic> diags;
  if (profile.breakpoints.size() < 2) {
    diags.push_back({diag::kTooFewBreakpoints, "", std::nullopt,
                     "profile needs at least two breakpoints"});
    return diags;
  }
  const auto& bp = profile.breakpoints;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    if (!(bp[i].first < bp[i + 1].first)) {
      diags.push_back({diag::kBadAreaOrder, "", i, "areas must be strictly increasing"});
      return diags;
    }
  }
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const Rat& r0 = bp[i].second;
    const Rat& r1 = bp[i + 1].second;
    if (r0 == r1 && is_integer(r0) && r0 != 0) {
      diags.push_back({diag::kFlatIntegerSegment, "", i,
                       "rho constant at " + rat_str(r0)});
    }
  }
  // Interior sign: no zero and no sign change strictly between the endpoints.
  for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
    if (bp[i].second == 0) {
      diags.push_back({diag::kSignChangeInInterior, "", i,
                       "rho vanishes at an interior breakpoint"});
    }
  }
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    if (sign(bp[i].second) * sign(bp[i + 1].second) < 0) {
      diags.push_back({diag::kSignChangeInInterior, "", i,
                       "rho changes sign inside a segment"});
    }
  }
  // A segment of constant zero lies in the open interior unless the profile
  // is a single segment pinned at both endpoints.
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    if (bp[i].second == 0 && bp[i + 1].second == 0) {
      diags.push_back({diag::kSignChangeInInterior, "", i,
                       "rho vanishes on a whole segment"});
    }
  }
  return diags;
}

}  // namespace unlk
