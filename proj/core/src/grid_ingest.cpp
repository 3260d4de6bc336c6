#include "unlk/grid_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "unlk/parallel.hpp"

namespace unlk {

std::vector<Diagnostic> validate_grid(const ScalarGrid& g) {
  std::vector<Diagnostic> out;
  if (g.width < 3 || g.height < 3) {
    out.push_back({diag::kBadGridSize, "grid", {}, "grid must be at least 3x3"});
    return out;
  }
  if (g.values.size() != static_cast<std::size_t>(g.width) * g.height) {
    out.push_back({diag::kBadGridSize, "grid", {}, "value count does not match width*height"});
    return out;
  }
  if (!(g.spacing > 0) || !std::isfinite(g.spacing))
    out.push_back({diag::kBadGridSize, "grid", {}, "spacing must be positive and finite"});
  for (std::size_t i = 0; i < g.values.size(); ++i)
    if (!std::isfinite(g.values[i])) {
      out.push_back({diag::kNotFinite, "grid", i, "sample is not finite"});
      return out;
    }
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x)
      if ((x == 0 || y == 0 || x == g.width - 1 || y == g.height - 1) && g.at(x, y) != 0) {
        out.push_back({diag::kBoundaryNotZero, "grid",
                       static_cast<std::size_t>(y) * static_cast<std::size_t>(g.width) +
                           static_cast<std::size_t>(x),
                       "boundary ring must be identically zero"});
        return out;
      }
  return out;
}

void require_valid(const ScalarGrid& g) {
  auto diags = validate_grid(g);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

ScalarGrid read_grid_csv(std::istream& in) {
  ScalarGrid g;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty grid file");
  if (line.size() && line.back() == '\r') line.pop_back();
  if (line != "width,height,spacing")
    throw ParseError("grid CSV must start with the header 'width,height,spacing'");
  if (!std::getline(in, line)) throw ParseError("missing grid dimensions");
  {
    std::istringstream row(line);
    char c1 = 0, c2 = 0;
    if (!(row >> g.width >> c1 >> g.height >> c2 >> g.spacing) || c1 != ',' || c2 != ',')
      throw ParseError("malformed grid dimension line");
  }
  if (g.width < 1 || g.height < 1) throw ParseError("grid dimensions must be positive");
  g.values.reserve(static_cast<std::size_t>(g.width) * g.height);
  for (int y = 0; y < g.height; ++y) {
    if (!std::getline(in, line)) throw ParseError("missing grid row " + std::to_string(y));
    std::istringstream row(line);
    for (int x = 0; x < g.width; ++x) {
      double v = 0;
      if (!(row >> v)) throw ParseError("malformed grid row " + std::to_string(y));
      g.values.push_back(v);
      char comma = 0;
      if (x + 1 < g.width && !(row >> comma)) throw ParseError("short grid row");
    }
  }
  return g;
}

void write_grid_csv(std::ostream& out, const ScalarGrid& g) {
  out << "width,height,spacing\n" << g.width << ',' << g.height << ',';
  out.precision(17);
  out << g.spacing << '\n';
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (x) out << ',';
      out << g.at(x, y);
    }
    out << '\n';
  }
}

namespace {

template <typename T>
void read_raw(std::istream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParseError("truncated binary grid");
}

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

ScalarGrid read_grid_bin(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "UNLK", 4) != 0)
    throw ParseError("binary grid must start with the magic bytes UNLK");
  std::uint32_t w = 0, h = 0;
  float spacing = 0;
  read_raw(in, w);
  read_raw(in, h);
  read_raw(in, spacing);
  ScalarGrid g;
  g.width = static_cast<int>(w);
  g.height = static_cast<int>(h);
  g.spacing = spacing;
  if (g.width < 1 || g.height < 1 || static_cast<std::size_t>(w) * h > (1u << 28))
    throw ParseError("unreasonable binary grid dimensions");
  g.values.resize(static_cast<std::size_t>(w) * h);
  for (auto& v : g.values) {
    float f = 0;
    read_raw(in, f);
    v = f;
  }
  return g;
}

void write_grid_bin(std::ostream& out, const ScalarGrid& g) {
  out.write("UNLK", 4);
  write_raw(out, static_cast<std::uint32_t>(g.width));
  write_raw(out, static_cast<std::uint32_t>(g.height));
  write_raw(out, static_cast<float>(g.spacing));
  for (double v : g.values) write_raw(out, static_cast<float>(v));
}

ScalarGrid read_grid(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw ParseError("cannot open grid file " + path);
  char magic[4] = {};
  probe.read(magic, 4);
  const bool binary = probe.gcount() == 4 && std::memcmp(magic, "UNLK", 4) == 0;
  probe.seekg(0);
  if (binary) return read_grid_bin(probe);
  probe.close();
  std::ifstream text(path);
  return read_grid_csv(text);
}

std::vector<std::pair<double, double>> ContourArcChain::samples(
    double cell_area, const std::vector<double>& values) const {
  std::vector<std::pair<double, double>> out;
  out.reserve(cells.size() + 1);
  const double base = static_cast<double>(inside_count) * cell_area;
  for (std::size_t j = 0; j < cells.size(); ++j)
    out.emplace_back(values[static_cast<std::size_t>(cells[j])],
                     base + static_cast<double>(j) * cell_area);
  out.emplace_back(outer_vertex < 0 ? 0.0 : values[static_cast<std::size_t>(outer_vertex)],
                   base + static_cast<double>(cells.size()) * cell_area);
  return out;
}

namespace {

// Total order breaking ties by row-major index; the contracted zero region
// uses index -1 so it sits below every interior zero.
struct SosKey {
  double v = 0;
  long long i = 0;
  bool operator<(const SosKey& o) const { return v < o.v || (v == o.v && i < o.i); }
};

struct UnionFind {
  std::vector<int> parent, size;
  explicit UnionFind(int n) : parent(n), size(n, 1) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return a;
  }
};

// One directional merge pass: parent[v] = the vertex that absorbed v's
// component, scanning slots in `order`; head[] tracks each component's most
// recent vertex.
std::vector<int> merge_pass(const std::vector<int>& order,
                            const std::vector<std::vector<int>>& nbr) {
  const int n = static_cast<int>(nbr.size());
  std::vector<int> parent(n, -1), head(n, -1);
  std::vector<char> active(n, 0);
  UnionFind uf(n);
  for (int v : order) {
    active[v] = 1;
    head[v] = v;
    for (int u : nbr[v]) {
      if (!active[u]) continue;
      const int ru = uf.find(u), rv = uf.find(v);
      if (ru == rv) continue;
      parent[head[ru]] = v;
      head[uf.unite(ru, rv)] = v;
    }
    head[uf.find(v)] = v;
  }
  return parent;
}

}  // namespace

ContourTree contour_tree(const ScalarGrid& g) {
  require_valid(g);
  const int w = g.width, h = g.height;
  const long long total = static_cast<long long>(w) * h;
  // Triangulated connectivity: axis neighbors plus the (+1,+1) diagonal.
  const int dx[6] = {-1, 1, 0, 0, 1, -1};
  const int dy[6] = {0, 0, -1, 1, 1, -1};

  // Contract the zero region containing the boundary ring.
  std::vector<char> outer_zero(static_cast<std::size_t>(total), 0);
  std::deque<long long> bfs;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) {
        outer_zero[static_cast<std::size_t>(y) * w + x] = 1;
        bfs.push_back(static_cast<long long>(y) * w + x);
      }
  while (!bfs.empty()) {
    const long long v = bfs.front();
    bfs.pop_front();
    const int x = static_cast<int>(v % w), y = static_cast<int>(v / w);
    for (int d = 0; d < 6; ++d) {
      const int nx = x + dx[d], ny = y + dy[d];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const long long u = static_cast<long long>(ny) * w + nx;
      if (!outer_zero[static_cast<std::size_t>(u)] && g.values[static_cast<std::size_t>(u)] == 0) {
        outer_zero[static_cast<std::size_t>(u)] = 1;
        bfs.push_back(u);
      }
    }
  }

  // Slots: interior vertices first, the contracted region last.
  std::vector<long long> slot_vertex;
  std::vector<int> vertex_slot(static_cast<std::size_t>(total), -1);
  for (long long v = 0; v < total; ++v)
    if (!outer_zero[static_cast<std::size_t>(v)]) {
      vertex_slot[static_cast<std::size_t>(v)] = static_cast<int>(slot_vertex.size());
      slot_vertex.push_back(v);
    }
  const int boundary_slot = static_cast<int>(slot_vertex.size());
  const int n = boundary_slot + 1;

  ContourTree t;
  t.width = w;
  t.height = h;
  t.spacing = g.spacing;
  t.values = g.values;
  if (n == 1) {
    // All-zero grid: there is no support region at all.
    throw NonMorseGridError("support region is not a single disk");
  }

  auto key = [&](int s) -> SosKey {
    if (s == boundary_slot) return {0.0, -1};
    const long long v = slot_vertex[static_cast<std::size_t>(s)];
    return {g.values[static_cast<std::size_t>(v)], v};
  };

  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n));
  for (int s = 0; s < boundary_slot; ++s) {
    const long long v = slot_vertex[static_cast<std::size_t>(s)];
    const int x = static_cast<int>(v % w), y = static_cast<int>(v / w);
    std::set<int> ns;
    for (int d = 0; d < 6; ++d) {
      const int nx = x + dx[d], ny = y + dy[d];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const long long u = static_cast<long long>(ny) * w + nx;
      ns.insert(outer_zero[static_cast<std::size_t>(u)] ? boundary_slot
                                                        : vertex_slot[static_cast<std::size_t>(u)]);
    }
    nbr[static_cast<std::size_t>(s)].assign(ns.begin(), ns.end());
    if (ns.count(boundary_slot)) nbr[static_cast<std::size_t>(boundary_slot)].push_back(s);
  }

  std::vector<int> asc(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) asc[static_cast<std::size_t>(s)] = s;
  std::sort(asc.begin(), asc.end(), [&](int a, int b) { return key(a) < key(b); });
  std::vector<int> desc(asc.rbegin(), asc.rend());

  const std::vector<int> jparent = merge_pass(desc, nbr);  // toward lower values
  const std::vector<int> sparent = merge_pass(asc, nbr);   // toward higher values

  // Peel leaves off the combined trees to assemble the contour tree arcs.
  std::vector<int> up(static_cast<std::size_t>(n), 0), down(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> jkids(static_cast<std::size_t>(n)), skids(static_cast<std::size_t>(n));
  std::vector<int> jp = jparent, sp = sparent;
  for (int s = 0; s < n; ++s) {
    if (jp[static_cast<std::size_t>(s)] >= 0) {
      ++up[static_cast<std::size_t>(jp[static_cast<std::size_t>(s)])];
      jkids[static_cast<std::size_t>(jp[static_cast<std::size_t>(s)])].push_back(s);
    }
    if (sp[static_cast<std::size_t>(s)] >= 0) {
      ++down[static_cast<std::size_t>(sp[static_cast<std::size_t>(s)])];
      skids[static_cast<std::size_t>(sp[static_cast<std::size_t>(s)])].push_back(s);
    }
  }
  auto ready = [&](int v) {
    return (up[static_cast<std::size_t>(v)] == 0 && down[static_cast<std::size_t>(v)] <= 1) ||
           (down[static_cast<std::size_t>(v)] == 0 && up[static_cast<std::size_t>(v)] <= 1);
  };
  std::deque<int> queue;
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  for (int s : asc)
    if (ready(s)) queue.push_back(s);
  std::vector<std::pair<int, int>> arcs;
  arcs.reserve(static_cast<std::size_t>(n) - 1);
  int remaining = n;
  auto unique_kid = [&](std::vector<std::vector<int>>& kids, std::vector<int>& par, int v) {
    for (int c : kids[static_cast<std::size_t>(v)])
      if (alive[static_cast<std::size_t>(c)] && par[static_cast<std::size_t>(c)] == v) return c;
    return -1;
  };
  while (remaining > 1 && !queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (!alive[static_cast<std::size_t>(v)] || !ready(v)) continue;
    int attach = -1;
    if (up[static_cast<std::size_t>(v)] == 0 && jp[static_cast<std::size_t>(v)] >= 0) {
      attach = jp[static_cast<std::size_t>(v)];
      --up[static_cast<std::size_t>(attach)];
      const int c = unique_kid(skids, sp, v);
      if (c >= 0) {
        sp[static_cast<std::size_t>(c)] = sp[static_cast<std::size_t>(v)];
        if (sp[static_cast<std::size_t>(v)] >= 0)
          skids[static_cast<std::size_t>(sp[static_cast<std::size_t>(v)])].push_back(c);
      } else if (sp[static_cast<std::size_t>(v)] >= 0) {
        --down[static_cast<std::size_t>(sp[static_cast<std::size_t>(v)])];
      }
    } else if (down[static_cast<std::size_t>(v)] == 0 && sp[static_cast<std::size_t>(v)] >= 0) {
      attach = sp[static_cast<std::size_t>(v)];
      --down[static_cast<std::size_t>(attach)];
      const int c = unique_kid(jkids, jp, v);
      if (c >= 0) {
        jp[static_cast<std::size_t>(c)] = jp[static_cast<std::size_t>(v)];
        if (jp[static_cast<std::size_t>(v)] >= 0)
          jkids[static_cast<std::size_t>(jp[static_cast<std::size_t>(v)])].push_back(c);
      } else if (jp[static_cast<std::size_t>(v)] >= 0) {
        --up[static_cast<std::size_t>(jp[static_cast<std::size_t>(v)])];
      }
    } else {
      continue;
    }
    alive[static_cast<std::size_t>(v)] = 0;
    --remaining;
    arcs.push_back({v, attach});
    if (alive[static_cast<std::size_t>(attach)] && ready(attach)) queue.push_back(attach);
  }
  if (remaining != 1) throw NonMorseGridError("tiebreak failed to resolve the level-set tree");

  // Classify by degree in the assembled tree and cut it into monotone chains.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : arcs) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());
  if (adj[static_cast<std::size_t>(boundary_slot)].size() != 1)
    throw NonMorseGridError("support region is not a single disk");
  for (int s = 0; s < boundary_slot; ++s) {
    const std::size_t deg = adj[static_cast<std::size_t>(s)].size();
    if (deg > 3) throw NonMorseGridError("degenerate saddle configuration");
  }

  auto vertex_of = [&](int s) { return s == boundary_slot ? -1LL : slot_vertex[static_cast<std::size_t>(s)]; };
  // Preorder walk from the boundary: each step follows a chain of degree-2
  // slots to the next critical, emitting one arc chain per stretch.
  struct Item {
    int from, toward;
  };
  std::vector<Item> stack{{boundary_slot, adj[static_cast<std::size_t>(boundary_slot)][0]}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    ContourArcChain chain;
    chain.outer_vertex = vertex_of(it.from);
    int prev = it.from, cur = it.toward;
    std::vector<long long> cells;
    while (adj[static_cast<std::size_t>(cur)].size() == 2) {
      cells.push_back(vertex_of(cur));
      const auto& a = adj[static_cast<std::size_t>(cur)];
      const int next = a[0] == prev ? a[1] : a[0];
      prev = cur;
      cur = next;
    }
    cells.push_back(vertex_of(cur));
    std::reverse(cells.begin(), cells.end());  // inner critical first
    chain.inner_vertex = vertex_of(cur);
    chain.cells = std::move(cells);
    const std::size_t deg = adj[static_cast<std::size_t>(cur)].size();
    if (deg == 1) {
      t.extreme_cells.push_back(chain.inner_vertex);
    } else {
      t.saddle_cells.push_back(chain.inner_vertex);
      for (int nb : adj[static_cast<std::size_t>(cur)])
        if (nb != prev) stack.push_back({cur, nb});
    }
    t.edges.push_back(std::move(chain));
  }
  // Accumulate strictly-inside counts bottom-up; children appear after their
  // parent in preorder, so a backward walk sees each subtree completed.
  std::vector<long long> edge_count(t.edges.size(), 0);
  std::map<long long, std::size_t> by_inner;
  for (std::size_t i = 0; i < t.edges.size(); ++i)
    by_inner[t.edges[i].inner_vertex] = i;
  for (std::size_t i = t.edges.size(); i-- > 0;) {
    edge_count[i] += static_cast<long long>(t.edges[i].cells.size());
    t.edges[i].inside_count = edge_count[i] - static_cast<long long>(t.edges[i].cells.size());
    if (t.edges[i].outer_vertex >= 0)
      edge_count[by_inner[t.edges[i].outer_vertex]] += edge_count[i];
  }
  return t;
}

PlaneTree estimate_profiles(const ContourTree& t, int n_levels, double prune_eps,
                            std::vector<std::string>* warnings) {
  if (n_levels < 2) throw OutOfRangeError("need at least 2 sampling levels");
  if (n_levels == 2 && warnings)
    warnings->push_back("Coarse: 2 sampling levels only; expect wide tolerances");
  if (t.edges.empty()) throw ComputeError("grid has no support to model");

  struct WorkEdge {
    long long inner = 0, outer = -1;
    std::vector<long long> cells;
    long long inside = 0;
  };
  std::vector<WorkEdge> edges;
  for (const auto& e : t.edges) edges.push_back({e.inner_vertex, e.outer_vertex, e.cells, e.inside_count});
  auto value_of = [&](long long v) { return v < 0 ? 0.0 : t.values[static_cast<std::size_t>(v)]; };

  // Persistence pruning: repeatedly drop the smallest-span leaf feature and
  // splice the resulting degree-2 pass-through back into one chain.
  if (prune_eps > 0) {
    for (;;) {
      if (edges.size() < 3) break;
      std::size_t victim = edges.size();
      double best = prune_eps;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        bool leaf = true;
        for (const auto& o : edges)
          if (o.outer == edges[i].inner) leaf = false;
        if (!leaf || edges[i].outer < 0) continue;
        const double span = std::abs(value_of(edges[i].inner) - value_of(edges[i].outer));
        if (span < best) {
          best = span;
          victim = i;
        }
      }
      if (victim == edges.size()) break;
      const long long saddle = edges[victim].outer;
      std::size_t sibling = edges.size(), parent = edges.size();
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i != victim && edges[i].outer == saddle) sibling = i;
        if (edges[i].inner == saddle) parent = i;
      }
      if (sibling == edges.size() || parent == edges.size()) break;
      WorkEdge merged;
      merged.inner = edges[sibling].inner;
      merged.outer = edges[parent].outer;
      merged.inside = edges[sibling].inside;
      merged.cells = edges[sibling].cells;
      for (long long c : edges[victim].cells) merged.cells.push_back(c);
      for (long long c : edges[parent].cells) merged.cells.push_back(c);
      const bool descending = value_of(merged.inner) > value_of(merged.outer);
      std::stable_sort(merged.cells.begin(), merged.cells.end(), [&](long long a, long long b) {
        const SosKey ka{value_of(a), a}, kb{value_of(b), b};
        return descending ? kb < ka : ka < kb;
      });
      std::vector<WorkEdge> next;
      for (std::size_t i = 0; i < edges.size(); ++i)
        if (i != victim && i != sibling && i != parent) next.push_back(std::move(edges[i]));
      next.push_back(std::move(merged));
      edges = std::move(next);
    }
    // Re-root the document order: outer chain first, then inward.
    std::vector<WorkEdge> ordered;
    std::deque<long long> frontier{-1};
    while (!frontier.empty()) {
      const long long outer = frontier.front();
      frontier.pop_front();
      for (auto& e : edges)
        if (e.outer == outer) {
          ordered.push_back(e);
          frontier.push_back(e.inner);
        }
    }
    edges = std::move(ordered);
  }

  // Node bookkeeping: distinct rational levels with a deterministic nudge.
  std::map<long long, std::string> node_id;
  std::map<long long, Rat> node_level;
  std::set<Rat> used_levels{Rat(0)};
  int n_saddle = 0, n_extreme = 0;
  std::vector<char> is_saddle_node;
  for (const auto& e : edges) {
    const bool saddle = [&] {
      for (const auto& o : edges)
        if (o.outer == e.inner) return true;
      return false;
    }();
    Rat lv = rationalize(value_of(e.inner), 1000000);
    while (used_levels.count(lv)) lv += Rat(1, 1000000000000LL);
    used_levels.insert(lv);
    node_level[e.inner] = lv;
    node_id[e.inner] = saddle ? "s" + std::to_string(n_saddle++) : "m" + std::to_string(n_extreme++);
    is_saddle_node.push_back(saddle);
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (is_saddle_node[i]) {
      int kids = 0;
      for (const auto& o : edges)
        if (o.outer == edges[i].inner) ++kids;
      if (kids != 2) throw NonMorseGridError("saddle with a branch count other than two");
    }
  }

  const Rat cell = Rat(t.spacing) * Rat(t.spacing);

  PlaneTree tree;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    TreeNode node;
    node.id = node_id[edges[i].inner];
    node.kind = is_saddle_node[i] ? NodeKind::saddle : NodeKind::extremum;
    node.level = node_level[edges[i].inner];
    tree.nodes.push_back(node);
  }
  tree.edges.resize(edges.size());
  std::vector<std::string> errors(edges.size());
  parallel_for(edges.size(), [&](std::size_t i) {
    try {
      const WorkEdge& e = edges[i];
      const std::size_t m = e.cells.size();
      const Rat area_lo = Rat(e.inside) * cell;
      const Rat area_hi = Rat(e.inside + static_cast<long long>(m)) * cell;
      const Rat level_in = node_level[e.inner];
      const Rat level_out = e.outer < 0 ? Rat(0) : node_level[e.outer];
      // Sample indices along the chain, always keeping both ends.
      std::vector<std::size_t> picks;
      const std::size_t target = std::min<std::size_t>(static_cast<std::size_t>(n_levels), m);
      for (std::size_t s = 0; s <= target; ++s) {
        const std::size_t j = (s * m) / target;
        if (picks.empty() || picks.back() != j) picks.push_back(j);
      }
      std::vector<double> lv(picks.size()), ar(picks.size());
      std::vector<Rat> arr(picks.size());
      for (std::size_t s = 0; s < picks.size(); ++s) {
        const std::size_t j = picks[s];
        arr[s] = Rat(e.inside + static_cast<long long>(j)) * cell;
        ar[s] = rat_double(arr[s]);
        if (j == 0)
          lv[s] = rat_double(level_in);
        else if (j == m)
          lv[s] = rat_double(level_out);
        else
          lv[s] = value_of(e.cells[j]);
      }
      const std::size_t np = picks.size();
      const bool inner_saddle = is_saddle_node[i];
      const Rat drop = level_out - level_in;
      const Rat unit = drop > 0 ? Rat(1, 1000000) : Rat(-1, 1000000);
      RhoProfile profile;
      if (inner_saddle && np == 2) {
        // Both ends of an internal edge pinch to rotation 0; a midpoint keeps
        // the integral away from zero so the rescale below stays well posed.
        profile.breakpoints.emplace_back(arr[0], Rat(0));
        profile.breakpoints.emplace_back((arr[0] + arr[1]) / 2, unit);
        profile.breakpoints.emplace_back(arr[1], Rat(0));
      } else {
        std::vector<Rat> rho(np);
        for (std::size_t s = 0; s < np; ++s) {
          if (s == np - 1 || (s == 0 && inner_saddle)) {
            rho[s] = 0;  // saddle and boundary ends pinch to rotation 0
            continue;
          }
          double est = 0;
          if (s == 0)
            est = (lv[1] - lv[0]) / (ar[1] - ar[0]);
          else
            est = (lv[s + 1] - lv[s - 1]) / (ar[s + 1] - ar[s - 1]);
          Rat r = rationalize(est, 1000000);
          // The level is monotone along a chain, so every estimate must carry
          // the sign of the total drop; float noise gets clamped back.
          if (r == 0 || (r > 0) != (drop > 0)) r = unit;
          rho[s] = r;
        }
        for (std::size_t s = 0; s < np; ++s) profile.breakpoints.emplace_back(arr[s], rho[s]);
      }
      // Rescale so the rotation integrates exactly to the level drop.
      const Rat integral = profile.integral_to(profile.area_hi());
      if (integral == 0 || sign(integral) != sign(drop))
        throw ComputeError("rotation estimate degenerate on edge " + std::to_string(i));
      const Rat scale = drop / integral;
      for (auto& bp : profile.breakpoints) bp.second *= scale;
      TreeEdge te;
      te.id = "e" + std::to_string(i);
      te.inner = node_id[e.inner];
      te.outer = e.outer < 0 ? std::string() : node_id[e.outer];
      te.geom = {area_lo, area_hi, level_in};
      te.profile = std::move(profile);
      tree.edges[i] = std::move(te);
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });
  for (const auto& err : errors)
    if (!err.empty()) throw ComputeError(err);
  require_valid(tree);
  return tree;
}

}  // namespace unlk
