#include "unlk/sphere.hpp"

#include <algorithm>
#include <set>

#include "unlk/profile.hpp"

namespace unlk {
namespace {

int trend(const Rat& v0, const Rat& v1) { return v1 > v0 ? 1 : (v1 < v0 ? -1 : 0); }

}  // namespace

Rat HeightProfile::dh_at(const Rat& z) const {
  if (dh.empty() || z < dh.front().first || z > dh.back().first)
    throw OutOfRangeError("z outside the profile domain");
  for (std::size_t i = 0; i + 1 < dh.size(); ++i) {
    const auto& [z0, v0] = dh[i];
    const auto& [z1, v1] = dh[i + 1];
    if (z > z1) continue;
    if (z0 == z1) return v0;
    return v0 + (v1 - v0) * (z - z0) / (z1 - z0);
  }
  return dh.back().second;
}

Rat HeightProfile::h_at(const Rat& z) const {
  if (dh.empty() || z < dh.front().first || z > dh.back().first)
    throw OutOfRangeError("z outside the profile domain");
  Rat acc = h0;
  for (std::size_t i = 0; i + 1 < dh.size(); ++i) {
    const auto& [z0, v0] = dh[i];
    const auto& [z1, v1] = dh[i + 1];
    if (z <= z0) break;
    const Rat hi = z < z1 ? z : z1;
    const Rat vh = dh_at(hi);
    acc += (v0 + vh) / 2 * (hi - z0);
    if (z <= z1) break;
  }
  return acc;
}

std::vector<Diagnostic> validate_sphere(const HeightProfile& hp) {
  std::vector<Diagnostic> out;
  if (hp.dh.size() < 2) {
    out.push_back({diag::kTooFewBreakpoints, "dh", {}, "need at least two breakpoints"});
    return out;
  }
  for (std::size_t i = 0; i + 1 < hp.dh.size(); ++i)
    if (!(hp.dh[i].first < hp.dh[i + 1].first)) {
      out.push_back({diag::kBadAreaOrder, "dh", static_cast<std::int64_t>(i + 1),
                     "z coordinates must increase strictly"});
      return out;
    }
  if (hp.dh.front().first != 0 || hp.dh.back().first != 1)
    out.push_back({diag::kBadDomain, "dh", {}, "derivative must span [0, 1] exactly"});
  for (std::size_t i = 0; i + 1 < hp.dh.size(); ++i) {
    const Rat& v = hp.dh[i].second;
    if (v == hp.dh[i + 1].second && v != 0 && denominator(v) == 1)
      out.push_back({diag::kFlatIntegerSegment, "dh", static_cast<std::int64_t>(i),
                     "derivative sits at a nonzero integer on a whole segment"});
  }
  return out;
}

void require_valid(const HeightProfile& hp) {
  auto diags = validate_sphere(hp);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

std::vector<SphereFixedPoint> sphere_fixed_points(const HeightProfile& hp) {
  auto diags = validate_sphere(hp);
  for (const auto& d : diags)
    if (d.code == diag::kFlatIntegerSegment)
      throw DegenerateProfileError("derivative sits at a nonzero integer on a whole segment");
  if (!diags.empty()) throw ValidationError(std::move(diags));
  std::set<std::pair<Rat, std::int64_t>> interior;
  for (std::size_t i = 0; i + 1 < hp.dh.size(); ++i) {
    const auto& [z0, v0] = hp.dh[i];
    const auto& [z1, v1] = hp.dh[i + 1];
    if (v0 == v1) continue;
    const Rat lo = v0 < v1 ? v0 : v1;
    const Rat hi = v0 < v1 ? v1 : v0;
    for (BigInt m = rat_floor(lo); Rat(m) <= hi; ++m) {
      if (m == 0 || Rat(m) < lo) continue;
      const Rat z = z0 + (Rat(m) - v0) * (z1 - z0) / (v1 - v0);
      if (z <= 0 || z >= 1) continue;
      interior.insert({z, static_cast<std::int64_t>(m)});
    }
  }
  std::vector<SphereFixedPoint> out;
  out.push_back({Rat(0), 0});
  for (const auto& [z, k] : interior) out.push_back({z, k});
  out.push_back({Rat(1), 0});
  return out;
}

CappedOrbit capped_orbit(const HeightProfile& hp, const Rat& z, std::int64_t k,
                         std::int64_t m) {
  require_valid(hp);
  CappedOrbit o;
  o.z = z;
  o.k = k;
  o.m = m;
  if (z == 0 || z == 1) {
    if (k != 0) throw InvalidOrbitError("poles carry derivative value 0");
    o.action = hp.h_at(z) - m;
    o.cz_index = static_cast<int>((z == 0 ? 0 : 2) + kRecapIndexShift * m);
    return o;
  }
  if (z < 0 || z > 1) throw InvalidOrbitError("z outside [0, 1]");
  if (k == 0) throw InvalidOrbitError("interior circles need a nonzero derivative value");
  if (hp.dh_at(z) != k) throw InvalidOrbitError("(z, k) is not a fixed point");
  o.action = hp.h_at(z) + Rat(k) * (1 - z) - m;
  // Crossing direction at z: strictly inside a segment, its trend; at a
  // breakpoint, the two neighbor trends (equal -> transversal, opposite ->
  // tangential touch, a flat neighbor at k -> degenerate).
  int dir = 0;
  bool tangential = false;
  const auto& bp = hp.dh;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    if (z > bp[i].first && z < bp[i + 1].first) {
      dir = trend(bp[i].second, bp[i + 1].second);
      if (dir == 0) throw DegenerateProfileError("derivative is flat at a nonzero integer");
      break;
    }
    if (z == bp[i + 1].first && i + 2 < bp.size()) {
      const int tl = trend(bp[i].second, bp[i + 1].second);
      const int tr = trend(bp[i + 1].second, bp[i + 2].second);
      if (tl == 0 || tr == 0)
        throw DegenerateProfileError("derivative is flat at a nonzero integer");
      if (tl == tr)
        dir = tl;
      else
        tangential = true;
      break;
    }
  }
  if (!tangential) {
    if (dir == 0) throw InvalidOrbitError("could not locate (z, k) on the profile");
    const std::int64_t base = dir > 0 ? 2 * k : 2 * k + 2;
    o.cz_index = static_cast<int>(base + kRecapIndexShift * m);
  }
  return o;
}

Rat capped_action(const HeightProfile& hp, const Rat& z, std::int64_t k, std::int64_t m) {
  return capped_orbit(hp, z, k, m).action;
}

Rat c_simple_bump(const HeightProfile& hp, std::vector<std::string>* warnings) {
  require_valid(hp);
  const auto& bp = hp.dh;
  if (bp.front().second != 0)
    throw HypothesisViolatedError("slope must vanish at the south pole");
  std::size_t run = 0;
  while (run + 1 < bp.size() && bp[run + 1].second == 0) ++run;
  if (run == 0)
    throw HypothesisViolatedError("slope must vanish on an initial interval of positive length");
  if (bp.back().second == 0) throw HypothesisViolatedError("end slope must be nonzero");
  for (std::size_t i = run + 1; i < bp.size(); ++i) {
    if (bp[i].second <= 0)
      throw HypothesisViolatedError("slope must stay strictly positive above the flat cap");
    if (bp[i].second >= 2) throw HypothesisViolatedError("slope reaches 2");
  }
  std::vector<SphereFixedPoint> ones;
  for (const auto& p : sphere_fixed_points(hp))
    if (p.k != 0) ones.push_back(p);
  if (ones.size() != 2) throw HypothesisViolatedError("slope must cross 1 exactly twice");
  const CappedOrbit beta = capped_orbit(hp, ones[0].z, 1, 0);
  const CappedOrbit alpha = capped_orbit(hp, ones[1].z, 1, 1);
  if (!beta.cz_index || *beta.cz_index != 2)
    throw HypothesisViolatedError("first crossing of 1 must be increasing");
  if (!alpha.cz_index || *alpha.cz_index != 2)
    throw HypothesisViolatedError("second crossing of 1 must be decreasing");
  if (warnings && hp.dh_at(1) >= Rat(1, 2))
    warnings->push_back("end slope is at least 1/2; the closed form assumes it small");
  const Rat a_south = hp.h_at(0) + 1;
  const Rat a_north = hp.h_at(1);
  if (!(alpha.action < a_south && alpha.action < beta.action && alpha.action < a_north))
    throw HypothesisViolatedError(
        "recapped second crossing must carry the strictly smallest action");
  if (!(beta.action < a_south))
    throw HypothesisViolatedError("first-crossing action must stay below the south recapping");
  return beta.action < a_north ? beta.action : a_north;
}

namespace {

// Every fixed point dressed with the capping of Conley-Zehnder index 2: the
// south pole with one generator removed, the north pole bare, interior
// crossings with m = k - 1 (increasing) or m = k (decreasing).
std::vector<CappedOrbit> index_two_cappings(const HeightProfile& hp) {
  std::vector<CappedOrbit> out;
  for (const auto& p : sphere_fixed_points(hp)) {
    if (p.z == 0) {
      out.push_back(capped_orbit(hp, p.z, 0, -1));
    } else if (p.z == 1) {
      out.push_back(capped_orbit(hp, p.z, 0, 0));
    } else {
      const CappedOrbit probe = capped_orbit(hp, p.z, p.k, 0);
      if (!probe.cz_index)
        throw ConstructionFailedError(
            "derivative touches an integer tangentially; perturb the parameters");
      out.push_back(capped_orbit(hp, p.z, p.k, (*probe.cz_index - 2) / 2));
    }
  }
  return out;
}

[[noreturn]] void fail(const std::string& what) { throw ConstructionFailedError(what); }

}  // namespace

CounterexampleReport counterexample(const Rat& z_beta, const Rat& delta_prime) {
  const Rat b = z_beta, d = delta_prime;
  const Rat half(1, 2);
  if (!(b > 0 && b < half)) fail("z_beta must lie strictly between 0 and 1/2");
  if (!(d > 0)) fail("delta_prime must be positive");
  if (!(b + 2 * d < half)) fail("flattening band reaches the bump rise");
  if (!(d < Rat(3, 20))) fail("flattening band reaches the bump shoulder");
  const Rat w_rise = std::min(d, Rat((half - 2 * d - b) / 2));
  const Rat q1 = b + w_rise;
  const Rat slope = (half - b / 5 - w_rise / 2) / (half - b - w_rise / 2);
  if (!(slope > 1 && slope < 2)) fail("shoulder slope leaves (1, 2)");

  CounterexampleReport r;
  r.z_beta = b;
  r.delta_prime = d;
  r.shoulder_slope = slope;
  r.h.dh = {{Rat(0), Rat(0)},   {b / 2, Rat(0)},      {3 * b / 4, Rat(3, 10)},
            {b, Rat(1)},        {q1, slope},          {Rat(4, 5), slope},
            {Rat(9, 10), Rat(1)}, {Rat(1), Rat(1, 10)}};
  r.h.h0 = -half;
  if (r.h.h_at(half) != 0) throw ComputeError("midpoint level fails to vanish");
  if (!(r.h.h_at(1) > half)) fail("north level must exceed 1/2");
  try {
    r.c_sum = c_simple_bump(r.h);
  } catch (const HypothesisViolatedError& e) {
    fail(std::string("combined profile leaves the closed-form class: ") + e.what());
  }

  const Rat apex = 7 * slope / 2;
  HeightProfile flat;  // h reconnected to 0 on [1/2-d, 1/2+d]
  flat.dh = {{Rat(0), Rat(0)},
             {b / 2, Rat(0)},
             {3 * b / 4, Rat(3, 10)},
             {b, Rat(1)},
             {q1, slope},
             {half - 2 * d, slope},
             {half - 3 * d / 2, apex},
             {half - d, Rat(0)},
             {half + d, Rat(0)},
             {half + 3 * d / 2, apex},
             {half + 2 * d, slope},
             {Rat(4, 5), slope},
             {Rat(9, 10), Rat(1)},
             {Rat(1), Rat(1, 10)}};
  flat.h0 = -half;
  if (flat.h_at(half - d) != 0 || flat.h_at(half + d) != 0)
    throw ComputeError("reconnection bands fail to land on level 0");

  r.h1.h0 = -half;
  for (const auto& p : flat.dh) {
    r.h1.dh.push_back(p);
    if (p.first == half - d) break;
  }
  r.h1.dh.push_back({Rat(1), Rat(0)});
  if (r.h1.h_at(1) != 0) throw ComputeError("left part fails to end at level 0");

  r.h2.h0 = 0;
  r.h2.dh.push_back({Rat(0), Rat(0)});
  bool keep = false;
  for (const auto& p : flat.dh) {
    if (p.first == half + d) keep = true;
    if (keep) r.h2.dh.push_back(p);
  }
  r.z_gamma = half + d + d / (7 * slope);
  if (r.h2.dh_at(r.z_gamma) != 1) throw ComputeError("right-part crossing misplaced");
  const Rat a_gamma = r.h2.h_at(r.z_gamma) + 1 - r.z_gamma;
  // The right part is supported in a disk of area 1/2 - d, so its invariant
  // is positive and at most that displacement energy; among the index-2
  // cappings exactly one may survive that window.
  const Rat energy = half - d;
  std::vector<CappedOrbit> survivors;
  for (const auto& o : index_two_cappings(r.h2))
    if (o.action > 0 && o.action <= energy) survivors.push_back(o);
  if (survivors.size() != 1 || survivors[0].z != r.z_gamma || survivors[0].action != a_gamma)
    fail("right-part candidate set is not pinned by the energy window");
  r.c2 = a_gamma;
  r.c1 = 0;

  // The combined invariant survives the reconnection: the carrying action is
  // still present, and the profile moved by less than the spectral margin.
  bool carrier = false;
  Rat margin;
  bool have_margin = false;
  for (const auto& o : index_two_cappings(flat)) {
    if (o.action == r.c_sum) {
      carrier = true;
      continue;
    }
    Rat gap_to = o.action - r.c_sum;
    if (gap_to < 0) gap_to = -gap_to;
    if (!have_margin || gap_to < margin) margin = gap_to;
    have_margin = true;
  }
  if (!carrier) fail("reconnection destroys the carrying orbit");
  if (have_margin && !(2 * d * slope < margin))
    fail("flattening band too wide to pin the combined invariant");

  r.gap = (r.c1 > r.c2 ? r.c1 : r.c2) - r.c_sum;
  if (!(r.gap > 0)) fail("no positive gap");
  return r;
}

}  // namespace unlk
