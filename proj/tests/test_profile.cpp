#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <vector>

#include "unlk/errors.hpp"
#include "unlk/model_gen.hpp"
#include "unlk/profile.hpp"

using unlk::EdgeGeometry;
using unlk::Rat;
using unlk::RhoProfile;

namespace {

// ---------------------------------------------------------------------------
// independent oracles
//
// These recompute profile quantities through a different route than the
// library: segment-midpoint quadrature through rho_at (exact for piecewise
// linear data) instead of breakpoint trapezoids, and a dense crossing count
// instead of per-segment root solving.
// ---------------------------------------------------------------------------

// Exact integral of rho over [area_lo, a]: midpoint rule per clipped segment.
Rat oracle_integral(const RhoProfile& p, const Rat& a) {
  Rat total = 0;
  const auto& bp = p.breakpoints;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    Rat lo = bp[i].first;
    Rat hi = bp[i + 1].first;
    if (hi > a) hi = a;
    if (hi <= lo) continue;
    const Rat mid = (lo + hi) / 2;
    total += p.rho_at(mid) * (hi - lo);
  }
  return total;
}

Rat oracle_level(const EdgeGeometry& geom, const RhoProfile& p, const Rat& a) {
  return geom.level_at_lo + oracle_integral(p, a);
}

// Number of parameter values in the open interval where rho equals k:
// counts strict sign changes of rho - k between consecutive breakpoints and
// interior breakpoints sitting exactly on k.
int oracle_crossing_count(const RhoProfile& p, std::int64_t k) {
  const auto& bp = p.breakpoints;
  int count = 0;
  for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
    if (bp[i].second == k) ++count;
  }
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const Rat d0 = bp[i].second - k;
    const Rat d1 = bp[i + 1].second - k;
    if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) ++count;
  }
  return count;
}

RhoProfile make_profile(std::vector<std::pair<Rat, Rat>> bp) {
  RhoProfile p;
  p.breakpoints = std::move(bp);
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// interpolation and integration
// ---------------------------------------------------------------------------

TEST_CASE("rho_at interpolates linearly and guards the domain") {
  const RhoProfile p = make_profile({{Rat(1, 2), Rat(0)}, {Rat(3, 4), Rat(-2)}, {Rat(1), Rat(0)}});
  CHECK(p.area_lo() == Rat(1, 2));
  CHECK(p.area_hi() == Rat(1));
  CHECK(p.rho_at(Rat(1, 2)) == Rat(0));
  CHECK(p.rho_at(Rat(5, 8)) == Rat(-1));
  CHECK(p.rho_at(Rat(3, 4)) == Rat(-2));
  CHECK(p.rho_at(Rat(7, 8)) == Rat(-1));
  CHECK_THROWS_AS(p.rho_at(Rat(1, 4)), unlk::OutOfRangeError);
  CHECK_THROWS_AS(p.rho_at(Rat(2)), unlk::OutOfRangeError);
}

TEST_CASE("integral_to matches the midpoint oracle on fixed profiles") {
  const RhoProfile cases[] = {
      make_profile({{Rat(0), Rat(-2)}, {Rat(1), Rat(0)}}),
      make_profile({{Rat(1, 2), Rat(0)}, {Rat(3, 4), Rat(-2)}, {Rat(1), Rat(0)}}),
      make_profile({{Rat(0), Rat(-3, 2)}, {Rat(3, 10), Rat(0)}}),
      make_profile({{Rat(0), Rat(1, 3)}, {Rat(1, 5), Rat(5, 2)}, {Rat(2), Rat(1, 7)}}),
  };
  for (const RhoProfile& p : cases) {
    const Rat span = p.area_hi() - p.area_lo();
    for (int j = 0; j <= 8; ++j) {
      const Rat a = p.area_lo() + span * j / 8;
      CHECK(p.integral_to(a) == oracle_integral(p, a));
    }
  }
}

TEST_CASE("level_at equals the inner level plus the exact integral") {
  EdgeGeometry geom{Rat(1, 2), Rat(1), Rat(1, 2)};
  const RhoProfile p =
      make_profile({{Rat(1, 2), Rat(0)}, {Rat(3, 4), Rat(-2)}, {Rat(1), Rat(0)}});
  for (int j = 0; j <= 10; ++j) {
    const Rat a = Rat(1, 2) + Rat(j, 20);
    CHECK(unlk::level_at(geom, p, a) == oracle_level(geom, p, a));
  }
  // the outer end of a boundary edge returns to level zero
  CHECK(unlk::level_at(geom, p, Rat(1)) == Rat(0));
  CHECK_THROWS_AS(unlk::level_at(geom, p, Rat(1, 4)), unlk::OutOfRangeError);
}

TEST_CASE("level_at on randomly generated trees matches the oracle") {
  unlk::Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const unlk::PlaneTree tree = unlk::random_tree(rng);
    for (const auto& e : tree.edges) {
      const Rat span = e.geom.area_hi - e.geom.area_lo;
      for (int j = 0; j <= 6; ++j) {
        const Rat a = e.geom.area_lo + span * j / 6;
        CHECK(unlk::level_at(e.geom, e.profile, a) == oracle_level(e.geom, e.profile, a));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// orbit circles
// ---------------------------------------------------------------------------

TEST_CASE("fixed_points finds both transverse crossings of a vee") {
  EdgeGeometry geom{Rat(1, 2), Rat(1), Rat(1, 2)};
  const RhoProfile p =
      make_profile({{Rat(1, 2), Rat(0)}, {Rat(3, 4), Rat(-2)}, {Rat(1), Rat(0)}});
  const auto pts = unlk::fixed_points(geom, p, "e");
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].area == Rat(5, 8));
  CHECK(pts[0].k == -1);
  CHECK(pts[1].area == Rat(3, 4));
  CHECK(pts[1].k == -2);
  CHECK(pts[2].area == Rat(7, 8));
  CHECK(pts[2].k == -1);
  for (const auto& pt : pts) {
    CHECK(pt.edge_id == "e");
    CHECK(p.rho_at(pt.area) == Rat(pt.k));
    CHECK(pt.level == oracle_level(geom, p, pt.area));
    CHECK(pt.action == unlk::action_of(pt.level, pt.area, pt.k));
    CHECK(pt.action == pt.level - pt.area * pt.k);
  }
}

TEST_CASE("a tangential touch yields exactly one point") {
  EdgeGeometry geom{Rat(0), Rat(1), Rat(1)};
  const RhoProfile p = make_profile({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(-1)}, {Rat(1), Rat(0)}});
  const auto pts = unlk::fixed_points(geom, p);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].area == Rat(1, 2));
  CHECK(pts[0].k == -1);
}

TEST_CASE("interval endpoints do not produce orbit points") {
  // rho equals -1 exactly at both ends; the open interval holds nothing
  EdgeGeometry geom{Rat(0), Rat(1), Rat(0)};
  const RhoProfile p = make_profile({{Rat(0), Rat(-1)}, {Rat(1, 2), Rat(-1, 2)}, {Rat(1), Rat(-1)}});
  CHECK(unlk::fixed_points(geom, p).empty());
}

TEST_CASE("a flat segment at a nonzero integer is degenerate") {
  EdgeGeometry geom{Rat(0), Rat(1), Rat(0)};
  const RhoProfile p =
      make_profile({{Rat(0), Rat(-2)}, {Rat(1, 4), Rat(-1)}, {Rat(1, 2), Rat(-1)}, {Rat(1), Rat(0)}});
  CHECK_THROWS_AS(unlk::fixed_points(geom, p), unlk::DegenerateProfileError);
}

TEST_CASE("fixed_points agrees with the dense crossing count on random trees") {
  unlk::Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const unlk::PlaneTree tree = unlk::random_tree(rng);
    for (const auto& e : tree.edges) {
      const auto pts = unlk::fixed_points(e.geom, e.profile, e.id);
      int expected = 0;
      for (std::int64_t k = -16; k <= 16; ++k) {
        if (k == 0) continue;
        expected += oracle_crossing_count(e.profile, k);
      }
      CHECK(pts.size() == static_cast<std::size_t>(expected));
      for (const auto& pt : pts) {
        CHECK(e.profile.rho_at(pt.area) == Rat(pt.k));
        CHECK(pt.level == oracle_level(e.geom, e.profile, pt.area));
        CHECK(pt.action == pt.level - pt.area * pt.k);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// profile validation
// ---------------------------------------------------------------------------

TEST_CASE("validate_profile accepts the worked profiles") {
  CHECK(unlk::validate_profile(
            make_profile({{Rat(1, 2), Rat(0)}, {Rat(3, 4), Rat(-2)}, {Rat(1), Rat(0)}}))
            .empty());
  CHECK(unlk::validate_profile(make_profile({{Rat(0), Rat(-2)}, {Rat(1), Rat(0)}})).empty());
}

TEST_CASE("validate_profile flags structural defects") {
  auto has = [](const std::vector<unlk::Diagnostic>& ds, const char* code) {
    for (const auto& d : ds)
      if (d.code == code) return true;
    return false;
  };
  CHECK(has(unlk::validate_profile(make_profile({{Rat(0), Rat(1)}})),
            unlk::diag::kTooFewBreakpoints));
  CHECK(has(unlk::validate_profile(make_profile({})), unlk::diag::kTooFewBreakpoints));
  CHECK(has(unlk::validate_profile(make_profile({{Rat(1), Rat(1)}, {Rat(1), Rat(2)}})),
            unlk::diag::kBadAreaOrder));
  CHECK(has(unlk::validate_profile(make_profile({{Rat(1), Rat(1)}, {Rat(1, 2), Rat(2)}})),
            unlk::diag::kBadAreaOrder));
  CHECK(has(unlk::validate_profile(
                make_profile({{Rat(0), Rat(-1)}, {Rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}})),
            unlk::diag::kSignChangeInInterior));
  CHECK(has(unlk::validate_profile(make_profile(
                {{Rat(0), Rat(-2)}, {Rat(1, 4), Rat(-1)}, {Rat(1, 2), Rat(-1)}, {Rat(1), Rat(0)}})),
            unlk::diag::kFlatIntegerSegment));
}
