#include "unlk/deformation.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "unlk/errors.hpp"
#include "unlk/parallel.hpp"

namespace unlk {
namespace {

Rat pl_integral(const std::vector<std::pair<Rat, Rat>>& bp) {
  Rat total = 0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i)
    total += (bp[i].second + bp[i + 1].second) / 2 * (bp[i + 1].first - bp[i].first);
  return total;
}

Rat min_rat(const Rat& a, const Rat& b) { return a < b ? a : b; }

void check_bump(const RhoProfile& g) {
  if (g.breakpoints.size() < 2)
    throw DegenerateProfileError("bump profile needs at least two breakpoints");
  for (std::size_t i = 0; i + 1 < g.breakpoints.size(); ++i)
    if (!(g.breakpoints[i].first < g.breakpoints[i + 1].first))
      throw DegenerateProfileError("bump breakpoint areas must increase");
  for (const auto& [a, v] : g.breakpoints)
    if (v < 0) throw DegenerateProfileError("bump values must be nonnegative");
}

// Breakpoint list with an extra point wherever a segment crosses an integer
// strictly inside its value range.
std::vector<std::pair<Rat, Rat>> refine_at_integers(const std::vector<std::pair<Rat, Rat>>& bp) {
  std::vector<std::pair<Rat, Rat>> out;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const auto& [a0, v0] = bp[i];
    const auto& [a1, v1] = bp[i + 1];
    out.emplace_back(a0, v0);
    if (v0 == v1) continue;
    const bool up = v1 > v0;
    const Rat lo = up ? v0 : v1, hi = up ? v1 : v0;
    std::vector<BigInt> ms;
    for (BigInt m = rat_floor(lo) + 1; Rat(m) < hi; ++m)
      if (Rat(m) > lo) ms.push_back(m);
    if (!up) std::reverse(ms.begin(), ms.end());
    for (const BigInt& m : ms) {
      const Rat a = a0 + (Rat(m) - v0) * (a1 - a0) / (v1 - v0);
      out.emplace_back(a, Rat(m));
    }
  }
  out.push_back(bp.back());
  return out;
}

// Interior points where g hits an integer transversally or tangentially,
// sorted by area; constant integer segments are reported separately.
struct IntegerPoints {
  std::vector<std::pair<Rat, BigInt>> points;              // (area, value)
  std::vector<std::pair<std::pair<Rat, Rat>, BigInt>> plateaus;  // ([a0,a1], value)
};

IntegerPoints integer_points(const RhoProfile& g) {
  IntegerPoints out;
  const auto& bp = g.breakpoints;
  // Collapse runs of constant integer segments into plateaus.
  for (std::size_t i = 0; i + 1 < bp.size();) {
    if (bp[i].second == bp[i + 1].second && denominator(bp[i].second) == 1) {
      const BigInt m = numerator(bp[i].second);
      std::size_t j = i + 1;
      while (j + 1 < bp.size() && bp[j + 1].second == bp[i].second) ++j;
      out.plateaus.push_back({{bp[i].first, bp[j].first}, m});
      i = j;
    } else {
      ++i;
    }
  }
  auto in_plateau = [&](const Rat& a, const BigInt& m) {
    for (const auto& [iv, pm] : out.plateaus)
      if (pm == m && iv.first <= a && a <= iv.second) return true;
    return false;
  };
  std::set<std::pair<Rat, BigInt>> seen;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const auto& [a0, v0] = bp[i];
    const auto& [a1, v1] = bp[i + 1];
    if (v0 == v1) continue;
    const Rat lo = min_rat(v0, v1), hi = v0 < v1 ? v1 : v0;
    for (BigInt m = rat_floor(lo); Rat(m) <= hi; ++m) {
      if (Rat(m) < lo) continue;
      const Rat a = a0 + (Rat(m) - v0) * (a1 - a0) / (v1 - v0);
      if (a == g.area_lo() || a == g.area_hi()) continue;
      if (in_plateau(a, m)) continue;
      if (seen.insert({a, m}).second) out.points.push_back({a, m});
    }
  }
  std::sort(out.points.begin(), out.points.end());
  return out;
}

}  // namespace

TruncationData build_truncation(const RhoProfile& g) {
  check_bump(g);
  TruncationData td;
  td.g.breakpoints = refine_at_integers(g.breakpoints);
  Rat maxv = 0;
  for (const auto& [a, v] : td.g.breakpoints) maxv = v > maxv ? v : maxv;
  if (maxv == 0) throw DegenerateProfileError("bump must be positive somewhere");
  td.n_max = static_cast<long long>(rat_ceil(maxv)) - 1;
  const long long n = td.n_max;
  for (long long k = 0; k <= n; ++k) {
    std::vector<std::pair<Rat, Rat>> delta;
    delta.reserve(td.g.breakpoints.size());
    for (const auto& [a, v] : td.g.breakpoints)
      delta.emplace_back(a, min_rat(v, Rat(k + 1)) - min_rat(v, Rat(k)));
    const Rat hk = pl_integral(delta);
    if (hk == 0)
      throw DegenerateProfileError("truncation stage " + std::to_string(k) +
                                   " carries no mass");
    td.h_k.push_back(hk);
    td.h += hk;
  }
  td.tau.assign(static_cast<std::size_t>(n) + 2, Rat(0));
  Rat suffix = 0;
  for (long long k = n; k >= 0; --k) {
    suffix += td.h_k[static_cast<std::size_t>(k)];
    td.tau[static_cast<std::size_t>(k)] = suffix / td.h;
  }
  return td;
}

Rat default_flatten_width(const RhoProfile& g) {
  check_bump(g);
  const auto pts = integer_points(g).points;
  if (pts.empty()) return 0;
  Rat gap = pts.front().first - g.area_lo();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    gap = min_rat(gap, pts[i + 1].first - pts[i].first);
  gap = min_rat(gap, g.area_hi() - pts.back().first);
  return gap / 100;
}

RhoProfile flatten_at_integers(const RhoProfile& g, const Rat& width) {
  check_bump(g);
  const auto pts = integer_points(g).points;
  if (pts.empty()) return g;
  const Rat w = width > 0 ? width : default_flatten_width(g);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Rat& p = pts[i].first;
    if (p - 2 * w < g.area_lo() || p + 2 * w > g.area_hi())
      throw OverlapError("flattening neighborhood leaves the domain");
    if (i + 1 < pts.size() && p + 2 * w > pts[i + 1].first - 2 * w)
      throw OverlapError("flattening neighborhoods overlap");
  }
  auto covered = [&](const Rat& a) {
    for (const auto& [p, m] : pts)
      if (p - 2 * w <= a && a <= p + 2 * w) return true;
    return false;
  };
  std::map<Rat, Rat> out;
  for (const auto& [a, v] : g.breakpoints)
    if (!covered(a)) out[a] = v;
  for (const auto& [p, m] : pts) {
    out[p - 2 * w] = g.rho_at(p - 2 * w);
    out[p - w] = Rat(m);
    out[p + w] = Rat(m);
    out[p + 2 * w] = g.rho_at(p + 2 * w);
  }
  RhoProfile flat;
  flat.breakpoints.assign(out.begin(), out.end());
  return flat;
}

RhoProfile special_deformation(const TruncationData& td, const Rat& sigma) {
  if (sigma < 0 || sigma > 1) throw OutOfRangeError("sigma must lie in [0, 1]");
  RhoProfile out;
  out.breakpoints.reserve(td.g.breakpoints.size());
  if (sigma == 1) {
    for (const auto& [a, v] : td.g.breakpoints) out.breakpoints.emplace_back(a, Rat(0));
    return out;
  }
  long long k = -1;
  for (long long j = 0; j <= td.n_max; ++j) {
    if (td.tau[static_cast<std::size_t>(j) + 1] <= sigma &&
        sigma < td.tau[static_cast<std::size_t>(j)]) {
      k = j;
      break;
    }
  }
  if (k < 0) throw ComputeError("deformation schedule does not cover sigma");
  const Rat c = td.h / td.h_k[static_cast<std::size_t>(k)] *
                (td.tau[static_cast<std::size_t>(k)] - sigma);
  for (const auto& [a, v] : td.g.breakpoints) {
    const Rat base = min_rat(v, Rat(k));
    out.breakpoints.emplace_back(a, base + c * (min_rat(v, Rat(k + 1)) - base));
  }
  return out;
}

std::vector<SpectrumSample> bump_spectrum(const RhoProfile& g_sigma) {
  const Rat total = g_sigma.integral_to(g_sigma.area_hi());
  auto level = [&](const Rat& a) { return total - g_sigma.integral_to(a); };
  std::vector<SpectrumSample> out;
  out.push_back({Rat(0), "outside"});
  out.push_back({total, "outside"});
  const auto pts = integer_points(g_sigma);
  std::vector<std::pair<Rat, BigInt>> circles;  // (area, winding m >= 1)
  for (const auto& [iv, m] : pts.plateaus)
    if (m >= 1) circles.push_back({iv.first, m});
  for (const auto& [a, m] : pts.points)
    if (m >= 1) circles.push_back({a, m});
  std::sort(circles.begin(), circles.end());
  for (const auto& [a, m] : circles)
    out.push_back({level(a) + a * Rat(m), "outside"});
  return out;
}

namespace {

void require_compatible(const PlaneTree& a, const PlaneTree& b) {
  auto fail = [](const std::string& what) {
    throw ComputeError("family endpoints are not structurally identical: " + what);
  };
  if (a.nodes.size() != b.nodes.size()) fail("node count");
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    if (a.nodes[i].id != b.nodes[i].id || a.nodes[i].kind != b.nodes[i].kind)
      fail("node " + a.nodes[i].id);
  }
  if (a.edges.size() != b.edges.size()) fail("edge count");
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const auto& ea = a.edges[i];
    const auto& eb = b.edges[i];
    if (ea.id != eb.id || ea.inner != eb.inner || ea.outer != eb.outer)
      fail("edge " + ea.id);
    if (ea.geom.area_lo != eb.geom.area_lo || ea.geom.area_hi != eb.geom.area_hi)
      fail("edge " + ea.id + " area interval");
    if (ea.profile.breakpoints.size() != eb.profile.breakpoints.size())
      fail("edge " + ea.id + " breakpoint count");
    for (std::size_t j = 0; j < ea.profile.breakpoints.size(); ++j)
      if (ea.profile.breakpoints[j].first != eb.profile.breakpoints[j].first)
        fail("edge " + ea.id + " breakpoint areas");
  }
}

PlaneTree interpolate(const PlaneTree& a, const PlaneTree& b, const Rat& sigma) {
  const Rat s = sigma, t = 1 - sigma;
  PlaneTree out = a;
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    out.nodes[i].level = t * a.nodes[i].level + s * b.nodes[i].level;
  for (std::size_t i = 0; i < out.edges.size(); ++i) {
    out.edges[i].geom.level_at_lo =
        t * a.edges[i].geom.level_at_lo + s * b.edges[i].geom.level_at_lo;
    for (std::size_t j = 0; j < out.edges[i].profile.breakpoints.size(); ++j)
      out.edges[i].profile.breakpoints[j].second =
          t * a.edges[i].profile.breakpoints[j].second +
          s * b.edges[i].profile.breakpoints[j].second;
  }
  return out;
}

std::vector<SpectrumSample> special_sample(const TruncationData& td,
                                           const std::vector<Rat>& inside,
                                           const Rat& sigma) {
  std::vector<SpectrumSample> out = bump_spectrum(special_deformation(td, sigma));
  for (const Rat& s : inside) out.push_back({(1 - sigma) * td.h + s, "inside"});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TruncationData family_truncation(const Family& f) {
  if (f.kind != Family::Kind::special)
    throw ComputeError("truncation data exists only for special families");
  return build_truncation(flatten_at_integers(f.g, f.flatten_width));
}

std::vector<SpectrumSample> family_spectrum(const Family& f, const Rat& sigma) {
  if (sigma < 0 || sigma > 1) throw OutOfRangeError("sigma must lie in [0, 1]");
  if (f.kind == Family::Kind::special)
    return special_sample(family_truncation(f), f.inside, sigma);
  require_compatible(f.from, f.to);
  std::vector<SpectrumSample> out;
  for (const auto& e : spectrum(interpolate(f.from, f.to, sigma)))
    out.push_back({e.action, "tree"});
  std::sort(out.begin(), out.end());
  return out;
}

Rat family_slope_bound(const Family& f) {
  if (f.kind == Family::Kind::special) return family_truncation(f).h;
  require_compatible(f.from, f.to);
  auto abs_rat = [](const Rat& v) { return v < 0 ? Rat(-v) : v; };
  Rat bound = 0;
  for (std::size_t i = 0; i < f.from.nodes.size(); ++i)
    bound = std::max(bound, abs_rat(f.to.nodes[i].level - f.from.nodes[i].level));
  for (std::size_t i = 0; i < f.from.edges.size(); ++i) {
    // An orbit's action moves exactly with the level field at the orbit:
    // |level_at_lo displacement| + integral of |rho displacement|.
    Rat b = abs_rat(f.to.edges[i].geom.level_at_lo - f.from.edges[i].geom.level_at_lo);
    std::vector<std::pair<Rat, Rat>> diff;
    for (std::size_t j = 0; j < f.from.edges[i].profile.breakpoints.size(); ++j)
      diff.emplace_back(f.from.edges[i].profile.breakpoints[j].first,
                        abs_rat(f.to.edges[i].profile.breakpoints[j].second -
                                f.from.edges[i].profile.breakpoints[j].second));
    b += pl_integral(diff);
    bound = std::max(bound, b);
  }
  return bound;
}

BifurcationDiagram bifurcation(const Family& f, int steps, const Rat& tol) {
  if (steps < 1) throw OutOfRangeError("bifurcation needs at least one step");
  if (tol <= 0) throw OutOfRangeError("tracking tolerance must be positive");
  BifurcationDiagram d;
  for (int j = 0; j <= steps; ++j) d.sigmas.push_back(Rat(j, steps));
  const std::size_t n = d.sigmas.size();

  std::vector<std::vector<SpectrumSample>> samples(n);
  if (f.kind == Family::Kind::special) {
    const TruncationData td = family_truncation(f);
    parallel_for(n, [&](std::size_t j) { samples[j] = special_sample(td, f.inside, d.sigmas[j]); });
  } else {
    require_compatible(f.from, f.to);
    parallel_for(n, [&](std::size_t j) {
      std::vector<SpectrumSample> out;
      for (const auto& e : spectrum(interpolate(f.from, f.to, d.sigmas[j])))
        out.push_back({e.action, "tree"});
      std::sort(out.begin(), out.end());
      samples[j] = out;
    });
  }

  // live[i]: branch index currently occupying sorted slot i.
  std::vector<std::size_t> live;
  for (const auto& s : samples[0]) {
    Branch b;
    b.id = static_cast<int>(d.branches.size());
    b.provenance = s.provenance;
    b.values.assign(n, std::nullopt);
    b.values[0] = s.action;
    live.push_back(d.branches.size());
    d.branches.push_back(std::move(b));
  }
  for (std::size_t j = 1; j < n; ++j) {
    const auto& cur = samples[j];
    const std::size_t np = live.size(), nc = cur.size();
    // Order-preserving alignment: match cost |difference|, gap cost tol.
    std::vector<std::vector<Rat>> dp(np + 1, std::vector<Rat>(nc + 1, Rat(0)));
    for (std::size_t i = 1; i <= np; ++i) dp[i][0] = Rat(static_cast<long long>(i)) * tol;
    for (std::size_t c = 1; c <= nc; ++c) dp[0][c] = Rat(static_cast<long long>(c)) * tol;
    for (std::size_t i = 1; i <= np; ++i) {
      const Rat& pv = *d.branches[live[i - 1]].values[j - 1];
      for (std::size_t c = 1; c <= nc; ++c) {
        Rat delta = cur[c - 1].action - pv;
        if (delta < 0) delta = -delta;
        Rat best = dp[i - 1][c - 1] + delta;
        if (dp[i - 1][c] + tol < best) best = dp[i - 1][c] + tol;
        if (dp[i][c - 1] + tol < best) best = dp[i][c - 1] + tol;
        dp[i][c] = best;
      }
    }
    std::vector<std::size_t> next_live;
    next_live.reserve(nc);
    // Traceback, preferring matches on ties; walk forward afterwards.
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    for (std::size_t i = np, c = nc; i > 0 || c > 0;) {
      if (i > 0 && c > 0) {
        const Rat& pv = *d.branches[live[i - 1]].values[j - 1];
        Rat delta = cur[c - 1].action - pv;
        if (delta < 0) delta = -delta;
        if (dp[i][c] == dp[i - 1][c - 1] + delta) {
          matches.push_back({i - 1, c - 1});
          --i;
          --c;
          continue;
        }
      }
      if (i > 0 && dp[i][c] == dp[i - 1][c] + tol) {
        --i;
        continue;
      }
      --c;
    }
    std::reverse(matches.begin(), matches.end());
    std::vector<std::optional<std::size_t>> owner(nc);  // slot -> prev live index
    for (const auto& [pi, ci] : matches) owner[ci] = pi;
    for (std::size_t c = 0; c < nc; ++c) {
      if (owner[c]) {
        const std::size_t bi = live[*owner[c]];
        Rat delta = cur[c].action - *d.branches[bi].values[j - 1];
        if (delta < 0) delta = -delta;
        if (delta > tol)
          throw TrackingAmbiguousError(
              "branch moved beyond the tracking tolerance near sigma=" +
              rat_str(d.sigmas[j]) + "; refine the step grid");
        d.branches[bi].values[j] = cur[c].action;
        next_live.push_back(bi);
      } else {
        Branch b;
        b.id = static_cast<int>(d.branches.size());
        b.provenance = cur[c].provenance;
        b.values.assign(n, std::nullopt);
        b.values[j] = cur[c].action;
        next_live.push_back(d.branches.size());
        d.branches.push_back(std::move(b));
      }
    }
    live = std::move(next_live);
  }
  return d;
}

SlopeReport slope_check(const BifurcationDiagram& d, double bound, double tol) {
  SlopeReport r;
  bool any = false;
  Rat min_s = 0, max_s = 0;
  for (const auto& b : d.branches) {
    for (std::size_t j = 0; j + 1 < d.sigmas.size(); ++j) {
      if (!b.values[j] || !b.values[j + 1]) continue;
      const Rat s = (*b.values[j + 1] - *b.values[j]) / (d.sigmas[j + 1] - d.sigmas[j]);
      if (!any || s < min_s) min_s = s;
      if (!any || s > max_s) max_s = s;
      any = true;
    }
  }
  r.min_slope = any ? rat_double(min_s) : 0;
  r.max_slope = any ? rat_double(max_s) : 0;
  const Rat limit = -Rat(bound) * (1 + Rat(tol));
  r.pass = !any || min_s >= limit;
  return r;
}

std::vector<std::pair<Rat, Rat>> continue_c(const BifurcationDiagram& d, const Rat& c0,
                                            const Rat& tol) {
  if (tol <= 0) throw OutOfRangeError("continuation tolerance must be positive");
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < d.branches.size(); ++i) {
    if (!d.branches[i].values.empty() && d.branches[i].values[0]) {
      Rat delta = *d.branches[i].values[0] - c0;
      if (delta < 0) delta = -delta;
      if (delta <= tol) starts.push_back(i);
    }
  }
  if (starts.empty())
    throw NotInSpectrumError("no spectrum branch starts within tol of the given value");
  if (starts.size() > 1)
    throw CollisionError(0.0, "several spectrum branches start within tol of the given value");
  const std::size_t bi = starts[0];
  // Branches that are identically zero never count as collisions: reaching
  // the zero level is the positivity clamp, not an ambiguity.
  std::vector<bool> always_zero(d.branches.size(), true);
  for (std::size_t i = 0; i < d.branches.size(); ++i)
    for (const auto& v : d.branches[i].values)
      if (v && *v != 0) always_zero[i] = false;

  std::vector<std::pair<Rat, Rat>> out;
  bool clamped = false;
  for (std::size_t j = 0; j < d.sigmas.size(); ++j) {
    if (clamped) {
      out.emplace_back(d.sigmas[j], Rat(0));
      continue;
    }
    const auto& v = d.branches[bi].values[j];
    if (!v)
      throw ComputeError("followed branch terminates at sigma=" + rat_str(d.sigmas[j]));
    if (*v <= 0) {
      clamped = true;
      out.emplace_back(d.sigmas[j], Rat(0));
      continue;
    }
    for (std::size_t i = 0; i < d.branches.size(); ++i) {
      if (i == bi || always_zero[i] || !d.branches[i].values[j]) continue;
      Rat delta = *d.branches[i].values[j] - *v;
      if (delta < 0) delta = -delta;
      if (delta <= tol)
        throw CollisionError(rat_double(d.sigmas[j]),
                             "another spectrum branch comes within tol of the followed one");
    }
    out.emplace_back(d.sigmas[j], *v);
  }
  return out;
}

}  // namespace unlk
