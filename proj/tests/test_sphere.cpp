#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "unlk/errors.hpp"
#include "unlk/profile.hpp"
#include "unlk/sphere.hpp"

using unlk::HeightProfile;
using unlk::Rat;

namespace {

// Flat cap on [0, 1/4], slope ramps to 3/2 at z = 1/2, back to 1/2 at the
// north pole. Slope crosses 1 upward at z = 5/12 and downward at z = 3/4.
HeightProfile hand_bump() {
  HeightProfile hp;
  hp.dh = {{Rat(0), Rat(0)}, {Rat(1, 4), Rat(0)}, {Rat(1, 2), Rat(3, 2)}, {Rat(1), Rat(1, 2)}};
  hp.h0 = Rat(0);
  return hp;
}

// Same cap, short bump, long shallow tail: the north level is the minimum.
HeightProfile tail_bump() {
  HeightProfile hp;
  hp.dh = {{Rat(0), Rat(0)},
           {Rat(1, 10), Rat(0)},
           {Rat(3, 10), Rat(3, 2)},
           {Rat(2, 5), Rat(1, 2)},
           {Rat(1), Rat(1, 100)}};
  hp.h0 = Rat(0);
  return hp;
}

}  // namespace

// ---------------------------------------------------------------------------
// height profiles and their validation
// ---------------------------------------------------------------------------

TEST_CASE("heights integrate the stored derivative exactly") {
  const HeightProfile hp = hand_bump();
  CHECK(hp.dh_at(Rat(1, 8)) == Rat(0));
  CHECK(hp.dh_at(Rat(5, 12)) == Rat(1));
  CHECK(hp.dh_at(Rat(3, 4)) == Rat(1));
  CHECK(hp.dh_at(Rat(1)) == Rat(1, 2));
  CHECK(hp.h_at(Rat(0)) == Rat(0));
  CHECK(hp.h_at(Rat(1, 4)) == Rat(0));
  CHECK(hp.h_at(Rat(5, 12)) == Rat(1, 12));
  CHECK(hp.h_at(Rat(1, 2)) == Rat(3, 16));
  CHECK(hp.h_at(Rat(3, 4)) == Rat(1, 2));
  CHECK(hp.h_at(Rat(1)) == Rat(11, 16));
  CHECK_THROWS_AS(hp.h_at(Rat(-1, 10)), unlk::OutOfRangeError);
  CHECK_THROWS_AS(hp.dh_at(Rat(11, 10)), unlk::OutOfRangeError);
}

TEST_CASE("sphere validation flags the structural defects") {
  CHECK(unlk::validate_sphere(hand_bump()).empty());
  CHECK(unlk::validate_sphere(tail_bump()).empty());

  HeightProfile hp;
  hp.dh = {{Rat(0), Rat(0)}};
  auto d = unlk::validate_sphere(hp);
  REQUIRE(d.size() == 1);
  CHECK(d[0].code == unlk::diag::kTooFewBreakpoints);

  hp = hand_bump();
  hp.dh[2].first = Rat(1, 4);
  d = unlk::validate_sphere(hp);
  REQUIRE(d.size() == 1);
  CHECK(d[0].code == unlk::diag::kBadAreaOrder);

  hp = hand_bump();
  hp.dh.front().first = Rat(1, 10);
  d = unlk::validate_sphere(hp);
  REQUIRE(d.size() == 1);
  CHECK(d[0].code == unlk::diag::kBadDomain);

  hp = hand_bump();  // slope parked at 1 over a whole segment
  hp.dh = {{Rat(0), Rat(0)}, {Rat(1, 4), Rat(1)}, {Rat(3, 4), Rat(1)}, {Rat(1), Rat(1, 2)}};
  d = unlk::validate_sphere(hp);
  REQUIRE(d.size() == 1);
  CHECK(d[0].code == unlk::diag::kFlatIntegerSegment);
  CHECK(d[0].index.has_value());
  CHECK(*d[0].index == 1);
  CHECK_THROWS_AS(unlk::require_valid(hp), unlk::ValidationError);
  CHECK_THROWS_AS(unlk::sphere_fixed_points(hp), unlk::DegenerateProfileError);
}

// ---------------------------------------------------------------------------
// fixed points
// ---------------------------------------------------------------------------

TEST_CASE("fixed points are the poles plus the integer slope circles") {
  const auto pts = unlk::sphere_fixed_points(hand_bump());
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].z == Rat(0));
  CHECK(pts[0].k == 0);
  CHECK(pts[1].z == Rat(5, 12));
  CHECK(pts[1].k == 1);
  CHECK(pts[2].z == Rat(3, 4));
  CHECK(pts[2].k == 1);
  CHECK(pts[3].z == Rat(1));
  CHECK(pts[3].k == 0);
}

TEST_CASE("negative slopes produce negative circles") {
  HeightProfile hp;
  hp.dh = {{Rat(0), Rat(0)}, {Rat(1, 2), Rat(-3, 2)}, {Rat(1), Rat(0)}};
  hp.h0 = Rat(2);
  const auto pts = unlk::sphere_fixed_points(hp);
  REQUIRE(pts.size() == 4);
  CHECK(pts[1].z == Rat(1, 3));
  CHECK(pts[1].k == -1);
  CHECK(pts[2].z == Rat(2, 3));
  CHECK(pts[2].k == -1);
}

// ---------------------------------------------------------------------------
// capping bookkeeping
// ---------------------------------------------------------------------------

TEST_CASE("pole cappings carry the base indices") {
  const HeightProfile hp = hand_bump();
  const auto south = unlk::capped_orbit(hp, Rat(0), 0, 0);
  CHECK(south.action == Rat(0));
  REQUIRE(south.cz_index.has_value());
  CHECK(*south.cz_index == 0);
  const auto south_up = unlk::capped_orbit(hp, Rat(0), 0, -1);  // one generator removed
  CHECK(south_up.action == Rat(1));
  CHECK(*south_up.cz_index == 2);
  const auto north = unlk::capped_orbit(hp, Rat(1), 0, 0);
  CHECK(north.action == Rat(11, 16));
  CHECK(*north.cz_index == 2);
}

TEST_CASE("interior crossings get 2k or 2k+2 and the recap shifts") {
  const HeightProfile hp = hand_bump();
  const auto beta = unlk::capped_orbit(hp, Rat(5, 12), 1, 0);
  CHECK(beta.action == Rat(2, 3));
  REQUIRE(beta.cz_index.has_value());
  CHECK(*beta.cz_index == 2);  // increasing crossing of 1
  const auto alpha = unlk::capped_orbit(hp, Rat(3, 4), 1, 0);
  CHECK(alpha.action == Rat(3, 4));
  CHECK(*alpha.cz_index == 4);  // decreasing crossing of 1
  for (std::int64_t m = 1; m <= 3; ++m) {
    const auto b = unlk::capped_orbit(hp, Rat(5, 12), 1, m);
    CHECK(b.action == beta.action + m * unlk::kRecapActionShift);
    CHECK(*b.cz_index == *beta.cz_index + m * unlk::kRecapIndexShift);
    const auto a = unlk::capped_orbit(hp, Rat(3, 4), 1, m);
    CHECK(a.action == alpha.action + m * unlk::kRecapActionShift);
    CHECK(*a.cz_index == *alpha.cz_index + m * unlk::kRecapIndexShift);
  }
  CHECK(unlk::capped_action(hp, Rat(3, 4), 1, 1) == Rat(-1, 4));
}

TEST_CASE("a tangential touch has no index") {
  HeightProfile hp;
  hp.dh = {{Rat(0), Rat(0)},
           {Rat(1, 4), Rat(0)},
           {Rat(1, 2), Rat(1)},
           {Rat(3, 4), Rat(1, 2)},
           {Rat(1), Rat(3, 2)}};
  hp.h0 = Rat(0);
  const auto touch = unlk::capped_orbit(hp, Rat(1, 2), 1, 0);
  CHECK_FALSE(touch.cz_index.has_value());
  CHECK(touch.action == Rat(1, 8) + Rat(1, 2));
}

TEST_CASE("ill-posed orbit requests are rejected") {
  const HeightProfile hp = hand_bump();
  CHECK_THROWS_AS(unlk::capped_orbit(hp, Rat(0), 1, 0), unlk::InvalidOrbitError);
  CHECK_THROWS_AS(unlk::capped_orbit(hp, Rat(3, 2), 1, 0), unlk::InvalidOrbitError);
  CHECK_THROWS_AS(unlk::capped_orbit(hp, Rat(1, 8), 0, 0), unlk::InvalidOrbitError);
  CHECK_THROWS_AS(unlk::capped_orbit(hp, Rat(1, 8), 1, 0), unlk::InvalidOrbitError);
}

// ---------------------------------------------------------------------------
// the closed-form invariant
// ---------------------------------------------------------------------------

TEST_CASE("the invariant is the first-crossing action when the north is high") {
  std::vector<std::string> notes;
  CHECK(unlk::c_simple_bump(hand_bump(), &notes) == Rat(2, 3));
  REQUIRE(notes.size() == 1);  // end slope 1/2 is at the warning threshold
  CHECK(notes[0].find("end slope") != std::string::npos);
}

TEST_CASE("the invariant is the north level when the tail is shallow") {
  std::vector<std::string> notes;
  CHECK(unlk::c_simple_bump(tail_bump(), &notes) == Rat(403, 1000));
  CHECK(notes.empty());
}

TEST_CASE("each hypothesis of the closed form is enforced") {
  HeightProfile hp = hand_bump();
  hp.dh[0].second = Rat(1, 10);
  hp.dh[1].second = Rat(1, 10);
  CHECK_THROWS_AS(unlk::c_simple_bump(hp), unlk::HypothesisViolatedError);

  hp = hand_bump();  // no flat cap
  hp.dh.erase(hp.dh.begin() + 1);
  CHECK_THROWS_AS(unlk::c_simple_bump(hp), unlk::HypothesisViolatedError);

  hp = hand_bump();
  hp.dh.back().second = Rat(0);  // flat end
  CHECK_THROWS_AS(unlk::c_simple_bump(hp), unlk::HypothesisViolatedError);

  hp = hand_bump();
  hp.dh[2].second = Rat(-1, 2);  // dips below zero after the cap
  CHECK_THROWS_AS(unlk::c_simple_bump(hp), unlk::HypothesisViolatedError);

  hp = hand_bump();
  hp.dh[2].second = Rat(2);  // slope reaches 2
  CHECK_THROWS_AS(unlk::c_simple_bump(hp), unlk::HypothesisViolatedError);

  hp = hand_bump();
  hp.dh[2].second = Rat(1, 2);  // never crosses 1
  hp.dh[3].second = Rat(3, 4);
  CHECK_THROWS_AS(unlk::c_simple_bump(hp), unlk::HypothesisViolatedError);

  // first meeting of slope 1 is a tangential touch, not a crossing
  hp.dh = {{Rat(0), Rat(0)},
           {Rat(1, 4), Rat(0)},
           {Rat(1, 2), Rat(1)},
           {Rat(3, 4), Rat(1, 2)},
           {Rat(1), Rat(3, 2)}};
  CHECK_THROWS_AS(unlk::c_simple_bump(hp), unlk::HypothesisViolatedError);

  // second meeting is a tangential dip back onto 1 from above
  hp.dh = {{Rat(0), Rat(0)},
           {Rat(1, 4), Rat(0)},
           {Rat(1, 2), Rat(3, 2)},
           {Rat(5, 8), Rat(1)},
           {Rat(1), Rat(3, 2)}};
  CHECK_THROWS_AS(unlk::c_simple_bump(hp), unlk::HypothesisViolatedError);
}

// ---------------------------------------------------------------------------
// the splitting counterexample
// ---------------------------------------------------------------------------

TEST_CASE("the splitting gap is frozen at the reference parameters") {
  const auto r = unlk::counterexample(Rat(1, 10), Rat(1, 100));
  CHECK(r.z_beta == Rat(1, 10));
  CHECK(r.delta_prime == Rat(1, 100));
  CHECK(r.shoulder_slope == Rat(95, 79));
  CHECK(r.c_sum == Rat(21, 50));
  CHECK(r.c1 == Rat(0));
  CHECK(r.c2 == Rat(65091, 133000));
  CHECK(r.gap == Rat(9231, 133000));
  CHECK(r.gap == r.c2 - r.c_sum);
  CHECK(r.z_gamma > Rat(1, 2));
  CHECK(r.z_gamma < Rat(1));
  CHECK(r.z_gamma == Rat(1, 2) + Rat(1, 100) + Rat(79, 66500));
  // the pieces really are height profiles of the advertised shape
  CHECK(unlk::validate_sphere(r.h).empty());
  CHECK(unlk::validate_sphere(r.h1).empty());
  CHECK(unlk::validate_sphere(r.h2).empty());
  CHECK(r.h.h_at(Rat(1, 2)) == Rat(0));
  CHECK(r.h1.h_at(Rat(1)) == Rat(0));
  CHECK(r.h2.h_at(Rat(0)) == Rat(0));
  CHECK(r.h2.dh_at(r.z_gamma) == Rat(1));
  // the combined invariant agrees with the closed form applied directly
  CHECK(unlk::c_simple_bump(r.h) == r.c_sum);
}

TEST_CASE("recapping laws hold on every enumerated orbit of the counterexample") {
  const auto r = unlk::counterexample(Rat(1, 10), Rat(1, 100));
  for (const HeightProfile* hp : {&r.h, &r.h2}) {
    for (const auto& p : unlk::sphere_fixed_points(*hp)) {
      const auto base = unlk::capped_orbit(*hp, p.z, p.k, 0);
      for (std::int64_t m = 1; m <= 2; ++m) {
        const auto o = unlk::capped_orbit(*hp, p.z, p.k, m);
        CHECK(o.action == base.action + m * unlk::kRecapActionShift);
        if (base.cz_index) {
          REQUIRE(o.cz_index.has_value());
          CHECK(*o.cz_index == *base.cz_index + m * unlk::kRecapIndexShift);
        }
      }
    }
  }
}

TEST_CASE("out-of-range counterexample parameters fail by name") {
  CHECK_THROWS_AS(unlk::counterexample(Rat(0), Rat(1, 100)), unlk::ConstructionFailedError);
  CHECK_THROWS_AS(unlk::counterexample(Rat(1, 2), Rat(1, 100)), unlk::ConstructionFailedError);
  CHECK_THROWS_AS(unlk::counterexample(Rat(1, 10), Rat(0)), unlk::ConstructionFailedError);
  CHECK_THROWS_AS(unlk::counterexample(Rat(1, 10), Rat(1, 5)), unlk::ConstructionFailedError);
  CHECK_THROWS_AS(unlk::counterexample(Rat(2, 5), Rat(1, 20)), unlk::ConstructionFailedError);
}
