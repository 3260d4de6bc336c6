#include "unlk/model_gen.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace unlk {

namespace {

long long pick(Rng& rng, long long n) {
  return static_cast<long long>(rng() % static_cast<unsigned long long>(n));
}

Rat trapezoid(const RhoProfile& p) {
  Rat total = 0;
  for (std::size_t i = 0; i + 1 < p.breakpoints.size(); ++i) {
    const auto& [a0, v0] = p.breakpoints[i];
    const auto& [a1, v1] = p.breakpoints[i + 1];
    total += (v0 + v1) * (a1 - a0) / 2;
  }
  return total;
}

}  // namespace

PlaneTree single_mountain() {
  PlaneTree t;
  t.nodes.push_back({"m0", NodeKind::extremum, Rat(1)});
  TreeEdge e;
  e.id = "e0";
  e.inner = "m0";
  e.outer = "";
  e.geom = {Rat(0), Rat(1), Rat(1)};
  e.profile.breakpoints = {{Rat(0), Rat(-2)}, {Rat(1), Rat(0)}};
  t.edges.push_back(std::move(e));
  return t;
}

PlaneTree double_mountain() {
  PlaneTree t;
  t.nodes.push_back({"s0", NodeKind::saddle, Rat(1, 2)});
  t.nodes.push_back({"m0", NodeKind::extremum, Rat(29, 40)});
  t.nodes.push_back({"m1", NodeKind::extremum, Rat(31, 50)});
  TreeEdge base;
  base.id = "e0";
  base.inner = "s0";
  base.outer = "";
  base.geom = {Rat(1, 2), Rat(1), Rat(1, 2)};
  base.profile.breakpoints = {{Rat(1, 2), Rat(0)}, {Rat(3, 4), Rat(-2)}, {Rat(1), Rat(0)}};
  t.edges.push_back(std::move(base));
  TreeEdge left;
  left.id = "e1";
  left.inner = "m0";
  left.outer = "s0";
  left.geom = {Rat(0), Rat(3, 10), Rat(29, 40)};
  left.profile.breakpoints = {{Rat(0), Rat(-3, 2)}, {Rat(3, 10), Rat(0)}};
  t.edges.push_back(std::move(left));
  TreeEdge right;
  right.id = "e2";
  right.inner = "m1";
  right.outer = "s0";
  right.geom = {Rat(0), Rat(1, 5), Rat(31, 50)};
  right.profile.breakpoints = {{Rat(0), Rat(-6, 5)}, {Rat(1, 5), Rat(0)}};
  t.edges.push_back(std::move(right));
  return t;
}

PlaneTree negate_tree(const PlaneTree& t) {
  PlaneTree out = t;
  for (auto& n : out.nodes) n.level = -n.level;
  for (auto& e : out.edges) {
    e.geom.level_at_lo = -e.geom.level_at_lo;
    for (auto& bp : e.profile.breakpoints) bp.second = -bp.second;
  }
  return out;
}

namespace {

struct BuiltNode {
  std::string id;
  NodeKind kind = NodeKind::extremum;
  Rat level;
  Rat internal;  // total area of the strict subtree
};

struct TreeBuilder {
  Rng& rng;
  int max_depth;
  PlaneTree tree;
  std::vector<Rat> pool;
  std::size_t next_level = 0;
  int node_counter = 0;
  int edge_counter = 0;

  TreeBuilder(Rng& r, int depth) : rng(r), max_depth(depth) {
    for (int j = 1; j <= 32; ++j) {
      pool.push_back(Rat(j, 16));
      pool.push_back(Rat(-j, 16));
    }
    std::shuffle(pool.begin(), pool.end(), rng);
  }

  Rat take_level() { return pool.at(next_level++); }

  Rat width() {
    static const long long num[3] = {1, 3, 4};
    return Rat(num[pick(rng, 3)], 4);  // 1/4, 3/4, or 1
  }

  // Three-point profile hitting the exact level drop: rotation pinned to 0 at
  // saddle/boundary ends, a small same-sign value at an extremum end, and the
  // midpoint solved so the trapezoid integral equals the drop.
  void add_edge(const BuiltNode& child, const std::string& outer_id, const Rat& outer_level) {
    const Rat lo = child.internal;
    const Rat hi = lo + width();
    const Rat drop = outer_level - child.level;
    static const long long wn[3] = {1, 1, 2}, wd[3] = {3, 2, 3};
    const long long wi = pick(rng, 3);
    const Rat mid = lo + (hi - lo) * Rat(wn[wi], wd[wi]);
    const Rat d0 = mid - lo, d1 = hi - mid;
    Rat r_in = 0;
    if (child.kind == NodeKind::extremum) {
      static const long long un[3] = {1, 1, 3}, ud[3] = {4, 2, 4};
      const long long ui = pick(rng, 3);
      r_in = Rat(un[ui], ud[ui]) * (drop > 0 ? 1 : -1);
    }
    Rat r_mid;
    for (;;) {
      r_mid = (2 * drop - r_in * d0) / (d0 + d1);
      if ((r_mid > 0) == (drop > 0) && r_mid != 0) break;
      r_in /= 2;  // shrink the endpoint value until the midpoint keeps the sign
    }
    TreeEdge e;
    e.id = "e" + std::to_string(edge_counter++);
    e.inner = child.id;
    e.outer = outer_id;
    e.geom = {lo, hi, child.level};
    e.profile.breakpoints = {{lo, r_in}, {mid, r_mid}, {hi, Rat(0)}};
    tree.edges.push_back(std::move(e));
    child_totals.push_back(hi);
  }

  std::vector<Rat> child_totals;

  BuiltNode build(int depth) {
    const bool saddle = depth < max_depth && pick(rng, 2) == 0;
    BuiltNode out;
    out.level = take_level();
    if (!saddle) {
      out.id = "m" + std::to_string(node_counter++);
      out.kind = NodeKind::extremum;
      out.internal = 0;
      tree.nodes.push_back({out.id, out.kind, out.level});
      return out;
    }
    out.id = "s" + std::to_string(node_counter++);
    out.kind = NodeKind::saddle;
    tree.nodes.push_back({out.id, out.kind, out.level});
    const BuiltNode c0 = build(depth + 1);
    add_edge(c0, out.id, out.level);
    const Rat t0 = child_totals.back();
    const BuiltNode c1 = build(depth + 1);
    add_edge(c1, out.id, out.level);
    const Rat t1 = child_totals.back();
    out.internal = t0 + t1;
    return out;
  }

  PlaneTree run() {
    const BuiltNode root = build(0);
    add_edge(root, "", Rat(0));
    return std::move(tree);
  }
};

}  // namespace

PlaneTree random_tree(Rng& rng, int max_depth, int max_negative) {
  for (int attempt = 0; attempt < 512; ++attempt) {
    TreeBuilder builder(rng, max_depth);
    PlaneTree t = builder.run();
    if (!validate_tree(t).empty()) continue;
    int negatives = 0;
    for (const auto& entry : spectrum(t))
      if (entry.negative) ++negatives;
    if (negatives > max_negative) continue;
    return t;
  }
  throw ComputeError("random tree generation failed to meet the requested bounds");
}

PlaneTree random_simple_bump(Rng& rng) {
  const Rat start_dip = Rat(1 + pick(rng, 8), 8);     // (0, 1]
  const Rat r_start = -(Rat(1) + start_dip);          // below -1
  const Rat extra = Rat(1 + pick(rng, 8), 4);         // (0, 2]
  const Rat r_min = r_start - extra;                  // the unique minimum
  const Rat area = Rat(2 + pick(rng, 7), 4);          // [1/2, 2]
  const Rat a_min = area * Rat(1 + pick(rng, 3), 5);  // interior kink
  RhoProfile p;
  p.breakpoints = {{Rat(0), r_start}, {a_min, r_min}, {area, Rat(0)}};
  const Rat peak = -trapezoid(p);
  PlaneTree t;
  t.nodes.push_back({"m0", NodeKind::extremum, peak});
  TreeEdge e;
  e.id = "e0";
  e.inner = "m0";
  e.outer = "";
  e.geom = {Rat(0), area, peak};
  e.profile = std::move(p);
  t.edges.push_back(std::move(e));
  return t;
}

std::pair<Rat, Rat> simple_bump_prediction(const PlaneTree& t) {
  if (t.edges.size() != 1) throw ComputeError("prediction needs a single-edge model");
  const TreeEdge& e = t.edges.front();
  const auto& bp = e.profile.breakpoints;
  // Largest-area upward crossing of -1, found by direct segment solves.
  bool found = false;
  Rat a1 = 0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const auto& [x0, v0] = bp[i];
    const auto& [x1, v1] = bp[i + 1];
    if (v1 <= v0) continue;  // only rising segments
    if (v0 > Rat(-1) || v1 < Rat(-1)) continue;
    if (v0 == Rat(-1) && v1 == Rat(-1)) continue;
    const Rat a = x0 + (Rat(-1) - v0) * (x1 - x0) / (v1 - v0);
    if (!found || a > a1) {
      a1 = a;
      found = true;
    }
  }
  if (!found) throw ComputeError("profile has no upward crossing of -1");
  // Level by direct trapezoid accumulation from the inner end.
  Rat level = e.geom.level_at_lo;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const auto& [x0, v0] = bp[i];
    const auto& [x1, v1] = bp[i + 1];
    if (a1 <= x0) break;
    if (a1 >= x1) {
      level += (v0 + v1) * (x1 - x0) / 2;
    } else {
      const Rat va = v0 + (v1 - v0) * (a1 - x0) / (x1 - x0);
      level += (v0 + va) * (a1 - x0) / 2;
      break;
    }
  }
  return {a1, level + a1};
}

namespace {

SurfaceEdge pendant_edge(const std::string& id, const std::string& extremum_id,
                         const std::string& saddle_id, const Rat& extremum_level,
                         const Rat& saddle_level, const Rat& area) {
  SurfaceEdge e;
  e.id = id;
  e.ends = {extremum_id, saddle_id};
  e.geom = EdgeGeometry{Rat(0), area, extremum_level};
  RhoProfile p;
  p.breakpoints = {{Rat(0), 2 * (saddle_level - extremum_level) / area}, {area, Rat(0)}};
  e.profile = std::move(p);
  return e;
}

SurfaceEdge bare_edge(const std::string& id, const std::string& a, const std::string& b) {
  SurfaceEdge e;
  e.id = id;
  e.ends = {a, b};
  return e;
}

}  // namespace

SurfaceGraph torus_model() {
  SurfaceGraph g;
  g.genus = 1;
  g.vertices.push_back({"s0", NodeKind::saddle, Rat(1, 2)});
  g.vertices.push_back({"s1", NodeKind::saddle, Rat(-1, 2)});
  g.vertices.push_back({"m0", NodeKind::extremum, Rat(1)});
  g.vertices.push_back({"m1", NodeKind::extremum, Rat(-1)});
  g.edges.push_back(bare_edge("c0", "s0", "s1"));
  g.edges.push_back(bare_edge("c1", "s0", "s1"));
  g.edges.push_back(pendant_edge("p0", "m0", "s0", Rat(1), Rat(1, 2), Rat(1)));
  g.edges.push_back(pendant_edge("p1", "m1", "s1", Rat(-1), Rat(-1, 2), Rat(1)));
  return g;
}

SurfaceGraph genus2_figure() {
  SurfaceGraph g;
  g.genus = 2;
  const Rat s1(3, 5), s2(1, 2), s3(2, 5), s4(-2, 5), s5(-1, 2), s6(-3, 5);
  g.vertices.push_back({"s1", NodeKind::saddle, s1});
  g.vertices.push_back({"s2", NodeKind::saddle, s2});
  g.vertices.push_back({"s3", NodeKind::saddle, s3});
  g.vertices.push_back({"s4", NodeKind::saddle, s4});
  g.vertices.push_back({"s5", NodeKind::saddle, s5});
  g.vertices.push_back({"s6", NodeKind::saddle, s6});
  g.vertices.push_back({"m2", NodeKind::extremum, Rat(2)});
  g.vertices.push_back({"m3", NodeKind::extremum, Rat(1)});
  g.vertices.push_back({"m5", NodeKind::extremum, Rat(-2)});
  g.vertices.push_back({"m6", NodeKind::extremum, Rat(-1)});
  g.edges.push_back(bare_edge("t12", "s1", "s2"));
  g.edges.push_back(bare_edge("t23", "s2", "s3"));
  g.edges.push_back(bare_edge("t31", "s3", "s1"));
  g.edges.push_back(bare_edge("t45", "s4", "s5"));
  g.edges.push_back(bare_edge("t56", "s5", "s6"));
  g.edges.push_back(bare_edge("t64", "s6", "s4"));
  g.edges.push_back(bare_edge("br", "s1", "s4"));
  g.edges.push_back(pendant_edge("p2", "m2", "s2", Rat(2), s2, Rat(1)));
  g.edges.push_back(pendant_edge("p3", "m3", "s3", Rat(1), s3, Rat(1)));
  g.edges.push_back(pendant_edge("p5", "m5", "s5", Rat(-2), s5, Rat(1)));
  g.edges.push_back(pendant_edge("p6", "m6", "s6", Rat(-1), s6, Rat(1)));
  return g;
}

SurfaceGraph random_surface(Rng& rng, long genus) {
  if (genus < 1) throw OutOfRangeError("random surfaces need genus at least 1");
  const long extra = pick(rng, 3);
  const long n = 2 * genus + extra;
  SurfaceGraph g;
  g.genus = genus;
  // Distinct saddle levels from a shuffled pool.
  std::vector<Rat> pool;
  for (long j = 1; j <= 2 * n; ++j) {
    pool.push_back(Rat(j, n + 3));
    pool.push_back(Rat(-j, n + 3));
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  Rat max_sad = pool[0], min_sad = pool[0];
  for (long i = 0; i < n; ++i) {
    const Rat lv = pool[static_cast<std::size_t>(i)];
    g.vertices.push_back({"s" + std::to_string(i), NodeKind::saddle, lv});
    max_sad = std::max(max_sad, lv);
    min_sad = std::min(min_sad, lv);
  }
  for (long i = 0; i < n; ++i)
    g.edges.push_back(bare_edge("c" + std::to_string(i), "s" + std::to_string(i),
                                "s" + std::to_string((i + 1) % n)));
  std::vector<long> order(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  long used = 0;
  for (long j = 0; j + 1 < 2 * (genus - 1); j += 2) {
    g.edges.push_back(bare_edge("d" + std::to_string(j / 2),
                                "s" + std::to_string(order[static_cast<std::size_t>(j)]),
                                "s" + std::to_string(order[static_cast<std::size_t>(j + 1)])));
    used += 2;
  }
  // Every remaining degree-2 cycle vertex gets a pendant disk; the first two
  // pendants carry the global max and min so the extreme levels sit on
  // extrema.
  long pendant = 0;
  for (long j = used; j < n; ++j, ++pendant) {
    const long v = order[static_cast<std::size_t>(j)];
    const Rat saddle_level = g.vertices[static_cast<std::size_t>(v)].level;
    Rat level;
    if (pendant == 0)
      level = max_sad + 2;
    else if (pendant == 1)
      level = min_sad - 2;
    else
      level = max_sad + 1 + Rat(pendant, 8);
    const std::string mid = "m" + std::to_string(pendant);
    g.vertices.push_back({mid, NodeKind::extremum, level});
    const Rat area = Rat(4 + pick(rng, 5), 4);
    g.edges.push_back(pendant_edge("p" + std::to_string(pendant), mid,
                                   "s" + std::to_string(v), level, saddle_level, area));
  }
  return g;
}

SurfaceGraph scale_surface_areas(const SurfaceGraph& g, const Rat& factor) {
  if (factor <= 0) throw OutOfRangeError("area scale factor must be positive");
  SurfaceGraph out = g;
  for (auto& e : out.edges) {
    if (!e.geom || !e.profile) continue;
    e.geom->area_lo *= factor;
    e.geom->area_hi *= factor;
    for (auto& bp : e.profile->breakpoints) {
      bp.first *= factor;
      bp.second /= factor;  // levels preserved: integral of rho is invariant
    }
  }
  return out;
}

SurfaceGraph shift_surface_levels(const SurfaceGraph& g, const Rat& delta) {
  SurfaceGraph out = g;
  for (auto& v : out.vertices) v.level += delta;
  for (auto& e : out.edges)
    if (e.geom) e.geom->level_at_lo += delta;
  return out;
}

RhoProfile random_stage_profile(Rng& rng) {
  const Rat area = Rat(2 + pick(rng, 6), 2);                            // [1, 7/2]
  const Rat max_v = Rat(1) + Rat(1 + pick(rng, 6), 7) + pick(rng, 3);   // non-integer > 1
  const Rat a_peak = area * Rat(1 + pick(rng, 3), 5);
  RhoProfile p;
  if (pick(rng, 2) == 0) {
    p.breakpoints = {{Rat(0), Rat(0)}, {a_peak, max_v}, {area, Rat(0)}};
  } else {
    const Rat shoulder = max_v * Rat(1 + pick(rng, 2), 4);  // strictly inside (0, max)
    p.breakpoints = {{Rat(0), Rat(0)},
                     {a_peak / 2, shoulder},
                     {a_peak, max_v},
                     {area, Rat(0)}};
  }
  return p;
}

namespace {

void rank_fill(ScalarGrid& g, std::vector<std::pair<double, long long>>& bucket,
               const EdgeGeometry& geom, const RhoProfile& profile, const Rat& span_lo,
               const Rat& span_hi) {
  std::sort(bucket.begin(), bucket.end());
  const long long m = static_cast<long long>(bucket.size());
  for (long long j = 0; j < m; ++j) {
    const Rat area = span_lo + (span_hi - span_lo) * Rat(2 * j + 1, 2 * m);
    g.values[static_cast<std::size_t>(bucket[static_cast<std::size_t>(j)].second)] =
        rat_double(level_at(geom, profile, area));
  }
}

}  // namespace

ScalarGrid rasterize_single_mountain(int n) {
  if (n < 16) throw OutOfRangeError("raster grids need at least 16 samples per side");
  ScalarGrid g;
  g.width = g.height = n;
  g.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  const double c = (n - 1) / 2.0;
  const double radius = n / 2.0 - 3.0;
  std::vector<std::pair<double, long long>> bucket;
  for (int y = 1; y < n - 1; ++y)
    for (int x = 1; x < n - 1; ++x) {
      const double dx = x - c, dy = y - c;
      const double d2 = dx * dx + dy * dy;
      if (d2 <= radius * radius)
        bucket.emplace_back(d2, static_cast<long long>(y) * n + x);
    }
  const PlaneTree model = single_mountain();
  rank_fill(g, bucket, model.edges[0].geom, model.edges[0].profile, Rat(0), Rat(1));
  g.spacing = 1.0 / std::sqrt(static_cast<double>(bucket.size()));
  return g;
}

ScalarGrid rasterize_double_mountain(int n) {
  if (n < 32) throw OutOfRangeError("the two-mountain raster needs at least 32 samples per side");
  ScalarGrid g;
  g.width = g.height = n;
  g.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  const double c = (n - 1) / 2.0;
  const double radius = n / 2.0 - 3.0;
  // Tangent mountain disks of 3/10 and 1/5 of the support area, tangency
  // shifted so both fit inside the support circle.
  const double r0 = radius * std::sqrt(0.3);
  const double r1 = radius * std::sqrt(0.2);
  const double shift = 0.1 * radius;
  const double c0x = c + shift - r0, c1x = c + shift + r1;
  std::vector<std::pair<double, long long>> left, right, base;
  for (int y = 1; y < n - 1; ++y)
    for (int x = 1; x < n - 1; ++x) {
      const long long idx = static_cast<long long>(y) * n + x;
      const double dy = y - c;
      const double dl = (x - c0x) * (x - c0x) + dy * dy;
      const double dr = (x - c1x) * (x - c1x) + dy * dy;
      const double dc = (x - c) * (x - c) + dy * dy;
      if (dl <= r0 * r0)
        left.emplace_back(dl, idx);
      else if (dr <= r1 * r1)
        right.emplace_back(dr, idx);
      else if (dc <= radius * radius)
        base.emplace_back(std::min(dl / (r0 * r0), dr / (r1 * r1)), idx);
    }
  const PlaneTree model = double_mountain();
  rank_fill(g, left, model.edges[1].geom, model.edges[1].profile, Rat(0), Rat(3, 10));
  rank_fill(g, right, model.edges[2].geom, model.edges[2].profile, Rat(0), Rat(1, 5));
  rank_fill(g, base, model.edges[0].geom, model.edges[0].profile, Rat(1, 2), Rat(1));
  g.spacing = 1.0 / std::sqrt(static_cast<double>(left.size() + right.size() + base.size()));
  return g;
}

}  // namespace unlk
