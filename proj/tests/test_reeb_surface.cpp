#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>
#include <vector>

#include "unlk/errors.hpp"
#include "unlk/model_gen.hpp"
#include "unlk/surface.hpp"

using unlk::Rat;
using unlk::SurfaceEdge;
using unlk::SurfaceGraph;

namespace {

bool has_code(const std::vector<unlk::Diagnostic>& ds, const char* code) {
  return std::any_of(ds.begin(), ds.end(),
                     [&](const unlk::Diagnostic& d) { return d.code == code; });
}

SurfaceEdge cycle_edge(const std::string& id, const std::string& a, const std::string& b) {
  SurfaceEdge e;
  e.id = id;
  e.ends = {a, b};
  return e;
}

SurfaceEdge disk_edge(const std::string& id, const std::string& extremum,
                      const std::string& saddle, const Rat& extremum_level,
                      const Rat& saddle_level, const Rat& area) {
  SurfaceEdge e;
  e.id = id;
  e.ends = {extremum, saddle};
  e.geom = unlk::EdgeGeometry{Rat(0), area, extremum_level};
  unlk::RhoProfile p;
  p.breakpoints = {{Rat(0), 2 * (saddle_level - extremum_level) / area}, {area, Rat(0)}};
  e.profile = std::move(p);
  return e;
}

// Single cycle of three saddles at the given levels, one pendant disk each.
SurfaceGraph triangle_core(const Rat& la, const Rat& lb, const Rat& lc) {
  SurfaceGraph g;
  g.genus = 1;
  g.vertices.push_back({"sa", unlk::NodeKind::saddle, la});
  g.vertices.push_back({"sb", unlk::NodeKind::saddle, lb});
  g.vertices.push_back({"sc", unlk::NodeKind::saddle, lc});
  const Rat top = std::max(la, std::max(lb, lc));
  const Rat bot = std::min(la, std::min(lb, lc));
  auto attach = [&](const char* s, const char* m, const Rat& saddle_level) {
    // pendants leave the cycle away from the other saddles so the global
    // extremes stay at extrema
    const Rat target =
        saddle_level == bot ? Rat(bot - 2) : Rat(top + 1 + (saddle_level - bot));
    g.vertices.push_back({m, unlk::NodeKind::extremum, target});
    g.edges.push_back(disk_edge(std::string("p") + s, m, s, target, saddle_level, Rat(1)));
  };
  g.edges.push_back(cycle_edge("ab", "sa", "sb"));
  g.edges.push_back(cycle_edge("bc", "sb", "sc"));
  g.edges.push_back(cycle_edge("ca", "sc", "sa"));
  attach("sa", "ma", la);
  attach("sb", "mb", lb);
  attach("sc", "mc", lc);
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// worked models validate
// ---------------------------------------------------------------------------

TEST_CASE("the torus and genus-2 figures validate cleanly") {
  CHECK(unlk::validate_surface(unlk::torus_model()).empty());
  CHECK(unlk::validate_surface(unlk::genus2_figure()).empty());
  CHECK(unlk::validate_surface(triangle_core(Rat(-3), Rat(1), Rat(2))).empty());
}

// ---------------------------------------------------------------------------
// core extraction
// ---------------------------------------------------------------------------

TEST_CASE("genus-2 figure decomposes into 6 saddles, 7 core edges, 4 disks") {
  const unlk::DiskDecomposition d = unlk::core_graph(unlk::genus2_figure());
  CHECK(d.essential_saddles ==
        std::vector<std::string>{"s1", "s2", "s3", "s4", "s5", "s6"});
  CHECK(d.core_edges ==
        std::vector<std::string>{"t12", "t23", "t31", "t45", "t56", "t64", "br"});
  REQUIRE(d.disks.size() == 4);
  const char* branch[] = {"p2", "p3", "p5", "p6"};
  const char* saddle[] = {"s2", "s3", "s5", "s6"};
  const Rat levels[] = {Rat(1, 2), Rat(2, 5), Rat(-1, 2), Rat(-3, 5)};
  for (int i = 0; i < 4; ++i) {
    CHECK(d.disks[i].branch_edge == branch[i]);
    CHECK(d.disks[i].saddle == saddle[i]);
    CHECK(d.disks[i].boundary_level == levels[i]);
    CHECK(d.disks[i].subtree.edges.size() == 1);
    CHECK(d.disks[i].subtree.edges[0].outer.empty());
  }
}

TEST_CASE("core extraction does not depend on stripping order") {
  for (const SurfaceGraph& g :
       {unlk::torus_model(), unlk::genus2_figure(), triangle_core(Rat(-3), Rat(1), Rat(2))}) {
    const auto a = unlk::core_graph(g);
    const auto b = unlk::core_graph_reverse(g);
    CHECK(a.essential_saddles == b.essential_saddles);
    CHECK(a.core_edges == b.core_edges);
    REQUIRE(a.disks.size() == b.disks.size());
    for (std::size_t i = 0; i < a.disks.size(); ++i) {
      CHECK(a.disks[i].saddle == b.disks[i].saddle);
      CHECK(a.disks[i].branch_edge == b.disks[i].branch_edge);
      CHECK(a.disks[i].boundary_level == b.disks[i].boundary_level);
    }
  }
}

TEST_CASE("the torus core is its two saddles and both cycle edges") {
  const auto d = unlk::core_graph(unlk::torus_model());
  CHECK(d.essential_saddles == std::vector<std::string>{"s0", "s1"});
  CHECK(d.core_edges == std::vector<std::string>{"c0", "c1"});
  REQUIRE(d.disks.size() == 2);
  CHECK(d.disks[0].branch_edge == "p0");
  CHECK(d.disks[1].branch_edge == "p1");
}

// ---------------------------------------------------------------------------
// surface invariant
// ---------------------------------------------------------------------------

TEST_CASE("torus invariant is 1 by both routes") {
  const SurfaceGraph g = unlk::torus_model();
  CHECK(unlk::nu_surface(g) == Rat(1));
  CHECK(unlk::nu_surface_oracle(g) == Rat(1));
}

TEST_CASE("genus-2 invariant is 4/3 by both routes") {
  // deepest disk: summit 2 over the saddle at 1/2; its shifted profile
  // crosses -1 at area 2/3 with action 5/6, so the disk contributes 4/3
  const SurfaceGraph g = unlk::genus2_figure();
  CHECK(unlk::nu_surface(g) == Rat(4, 3));
  CHECK(unlk::nu_surface_oracle(g) == Rat(4, 3));
}

TEST_CASE("surface routes agree on random graphs") {
  unlk::Rng rng(51);
  for (int i = 0; i < 15; ++i) {
    const SurfaceGraph g = unlk::random_surface(rng, 1 + i % 3);
    REQUIRE(unlk::validate_surface(g).empty());
    CHECK(unlk::nu_surface(g) == unlk::nu_surface_oracle(g));
  }
}

// ---------------------------------------------------------------------------
// quasi-state
// ---------------------------------------------------------------------------

TEST_CASE("zeta is the top essential level") {
  CHECK(unlk::zeta(unlk::torus_model()) == Rat(1, 2));
  CHECK(unlk::zeta(unlk::genus2_figure()) == Rat(3, 5));
  CHECK(unlk::zeta(triangle_core(Rat(-3), Rat(1), Rat(2))) == Rat(2));
}

TEST_CASE("threshold scanning recovers zeta exactly") {
  for (const SurfaceGraph& g : {unlk::torus_model(), unlk::genus2_figure()}) {
    std::vector<Rat> ts;
    Rat top = g.vertices.front().level;
    for (const auto& v : g.vertices) {
      ts.push_back(v.level);
      top = std::max(top, v.level);
    }
    ts.push_back(top + 1);
    const auto r = unlk::zeta_scan(g, ts);
    CHECK(!r.coarse);
    CHECK(r.value == unlk::zeta(g));
    REQUIRE(r.clearing_threshold.has_value());
    // The superlevel sets are open, so the threshold at zeta itself already
    // excludes the top core cell.
    CHECK(*r.clearing_threshold >= r.value);
  }
}

TEST_CASE("a one-sided threshold list only bounds zeta") {
  const SurfaceGraph g = unlk::torus_model();
  const auto above = unlk::zeta_scan(g, {Rat(10)});
  CHECK(above.coarse);
  CHECK(above.value == Rat(10));
  const auto below = unlk::zeta_scan(g, {Rat(-10)});
  CHECK(below.coarse);
  CHECK(below.value == Rat(-10));
  CHECK(!below.clearing_threshold.has_value());
  CHECK_THROWS_AS(unlk::zeta_scan(g, {}), unlk::OutOfRangeError);
}

TEST_CASE("zeta respects area rescaling and level shifts") {
  unlk::Rng rng(52);
  for (int i = 0; i < 10; ++i) {
    const SurfaceGraph g = unlk::random_surface(rng, 1 + i % 3);
    const Rat z = unlk::zeta(g);
    CHECK(unlk::zeta(unlk::scale_surface_areas(g, Rat(7, 3))) == z);
    CHECK(unlk::zeta(unlk::shift_surface_levels(g, Rat(5, 7))) == z + Rat(5, 7));
    CHECK(unlk::zeta(unlk::negate(unlk::negate(g))) == z);
  }
}

TEST_CASE("dispersion bounds match on the worked figures") {
  const auto tri = unlk::dispersion_check(triangle_core(Rat(-3), Rat(1), Rat(2)));
  CHECK(tri.first == Rat(9));
  CHECK(tri.second == Rat(9));
  const auto g2 = unlk::dispersion_check(unlk::genus2_figure());
  CHECK(g2.first == Rat(9, 25));
  CHECK(g2.second == Rat(9, 25));
  unlk::Rng rng(53);
  for (int i = 0; i < 10; ++i) {
    const auto p = unlk::dispersion_check(unlk::random_surface(rng, 1 + i % 3));
    CHECK(p.first == p.second);
  }
}

// ---------------------------------------------------------------------------
// superlevel cells, heavy and superheavy sets
// ---------------------------------------------------------------------------

TEST_CASE("superlevel cells collect vertices and edges above the threshold") {
  const SurfaceGraph g = unlk::torus_model();
  CHECK(unlk::superlevel_cells(g, Rat(0)) == std::vector<std::string>{"s0", "m0", "p0"});
  CHECK(unlk::superlevel_cells(g, Rat(-2)) ==
        std::vector<std::string>{"s0", "s1", "m0", "m1", "c0", "c1", "p0", "p1"});
  CHECK(unlk::superlevel_cells(g, Rat(2)).empty());
}

TEST_CASE("torus cells classify as the theory predicts") {
  const SurfaceGraph g = unlk::torus_model();
  CHECK(unlk::heavy(g, {"c0"}));
  CHECK(!unlk::superheavy(g, {"c0"}));
  CHECK(unlk::superheavy(g, {"s0", "s1", "c0", "c1"}));
  CHECK(unlk::heavy(g, {"s0", "s1", "c0", "c1"}));
  CHECK(!unlk::heavy(g, {"p0"}));
  CHECK(!unlk::superheavy(g, {"p0"}));
}

TEST_CASE("unknown cells are rejected, empty sets are trivial") {
  CHECK_THROWS_AS(unlk::heavy(unlk::torus_model(), {"nope"}), unlk::UnknownCellError);
  CHECK_THROWS_AS(unlk::superheavy(unlk::torus_model(), {"c9"}), unlk::UnknownCellError);
  CHECK(!unlk::heavy(unlk::torus_model(), {}));
  CHECK(!unlk::superheavy(unlk::torus_model(), {}));
}

TEST_CASE("superheavy always implies heavy") {
  unlk::Rng rng(54);
  const SurfaceGraph g = unlk::genus2_figure();
  std::vector<std::string> ids;
  for (const auto& v : g.vertices) ids.push_back(v.id);
  for (const auto& e : g.edges) ids.push_back(e.id);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> cells;
    for (const auto& id : ids)
      if (rng() % 2) cells.push_back(id);
    if (cells.empty()) cells.push_back(ids[rng() % ids.size()]);
    if (unlk::superheavy(g, cells)) CHECK(unlk::heavy(g, cells));
  }
}

// ---------------------------------------------------------------------------
// validation diagnostics
// ---------------------------------------------------------------------------

TEST_CASE("genus must match the cycle rank") {
  SurfaceGraph g = unlk::torus_model();
  g.genus = 2;
  CHECK(has_code(unlk::validate_surface(g), unlk::diag::kEulerMismatch));
  g.genus = 0;
  CHECK(has_code(unlk::validate_surface(g), unlk::diag::kBadGenus));
}

TEST_CASE("vertex degrees are pinned by kind") {
  SurfaceGraph g = unlk::torus_model();
  g.vertices.push_back({"m2", unlk::NodeKind::extremum, Rat(3, 4)});
  g.edges.push_back(disk_edge("px", "m2", "s0", Rat(3, 4), Rat(1, 2), Rat(1)));
  CHECK(has_code(unlk::validate_surface(g), unlk::diag::kBadDegree));
}

TEST_CASE("disconnected graphs are rejected") {
  SurfaceGraph g = unlk::torus_model();
  const SurfaceGraph other = unlk::shift_surface_levels(unlk::torus_model(), Rat(1, 7));
  for (auto v : other.vertices) {
    v.id += "x";
    g.vertices.push_back(v);
  }
  for (auto e : other.edges) {
    e.id += "x";
    e.ends[0] += "x";
    e.ends[1] += "x";
    g.edges.push_back(e);
  }
  g.genus = 2;
  CHECK(has_code(unlk::validate_surface(g), unlk::diag::kNotConnected));
}

TEST_CASE("global extremes must be extrema") {
  SurfaceGraph g = unlk::torus_model();
  for (auto& v : g.vertices)
    if (v.id == "s0") v.level = Rat(2);
  CHECK(has_code(unlk::validate_surface(g), unlk::diag::kExtremeLevelNotExtremum));
}

TEST_CASE("disk branches must carry annulus data") {
  SurfaceGraph g = unlk::torus_model();
  for (auto& e : g.edges)
    if (e.id == "p0") {
      e.profile.reset();
      e.geom.reset();
    }
  CHECK(has_code(unlk::validate_surface(g), unlk::diag::kMissingProfile));
}
