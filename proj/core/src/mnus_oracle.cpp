#include "unlk/mnus_oracle.hpp"

#include <algorithm>
#include <cstdint>

namespace unlk {

namespace {

constexpr std::size_t kMaxCandidates = 20;

struct Universe {
  std::vector<SpectrumEntry> points;
  std::vector<std::uint32_t> conflict;  // conflict[i]: members j inside disk of orbit i
};

Universe negative_universe(const PlaneTree& tree, const TreeIndex& ix) {
  Universe u;
  for (auto& s : spectrum(tree)) {
    if (s.kind == SpectrumKind::trivial) continue;
    if (s.negative) u.points.push_back(std::move(s));
  }
  if (u.points.size() > kMaxCandidates) {
    throw TooLargeError("brute force capped at " + std::to_string(kMaxCandidates) +
                        " negative fixed points, got " + std::to_string(u.points.size()));
  }
  const std::size_t n = u.points.size();
  u.conflict.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (u.points[i].kind != SpectrumKind::orbit) continue;  // only orbit disks constrain
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (strictly_inside(ix, u.points[j].ref, u.points[i].ref)) {
        u.conflict[i] |= (1u << j);
      }
    }
  }
  return u;
}

bool unlinked(const Universe& u, std::uint32_t mask) {
  for (std::size_t i = 0; i < u.points.size(); ++i) {
    if ((mask >> i) & 1u) {
      if (mask & u.conflict[i]) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<Mnus> enumerate_mnus(const PlaneTree& tree) {
  const TreeIndex ix = TreeIndex::build(tree);
  const Universe u = negative_universe(tree, ix);
  const std::size_t n = u.points.size();

  std::vector<bool> ok(std::size_t{1} << n, false);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    ok[mask] = unlinked(u, mask);
  }

  std::vector<Mnus> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    if (!ok[mask]) continue;
    bool maximal = true;
    for (std::size_t b = 0; b < n && maximal; ++b) {
      if (!((mask >> b) & 1u) && ok[mask | (1u << b)]) maximal = false;
    }
    if (!maximal) continue;
    Mnus m;
    m.sup_action = 0;  // the exterior point always contributes action 0
    for (std::size_t b = 0; b < n; ++b) {
      if ((mask >> b) & 1u) {
        m.members.push_back(u.points[b]);
        m.sup_action = std::max(m.sup_action, u.points[b].action);
      }
    }
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const Mnus& a, const Mnus& b) {
    if (a.sup_action != b.sup_action) return a.sup_action < b.sup_action;
    return a.members.size() < b.members.size();
  });
  return out;
}

Rat nu_oracle(const PlaneTree& tree) {
  const auto all = enumerate_mnus(tree);
  if (all.empty()) return 0;  // only the exterior point: sup over {0}
  Rat best = all.front().sup_action;
  for (const auto& m : all) best = std::min(best, m.sup_action);
  return best;
}

}  // namespace unlk
