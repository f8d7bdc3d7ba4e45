#pragma once
// Physical attack surface as a graph of hexagonal zones. Geometry is
// abstracted away: only adjacency and per-zone importance weights matter.

#include <algorithm>
#include <cstddef>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hopmdp {

struct Zone {
  int id = 0;
  double weight = 1.0;  // importance multiplier, must be > 0
  std::string label;
};

// Plain aggregate so that validate() can inspect malformed instances.
// Edges are stored directed; a well-formed surface carries both directions
// of every link. Use make_surface/build_hex7 for validated construction.
struct Surface {
  std::vector<Zone> zones;
  std::vector<std::pair<int, int>> edges;

  bool has_zone(int id) const {
    for (const auto& z : zones)
      if (z.id == id) return true;
    return false;
  }

  const Zone& zone(int id) const {
    for (const auto& z : zones)
      if (z.id == id) return z;
    throw std::invalid_argument("unknown zone id " + std::to_string(id));
  }

  // Position of a zone in the canonical ordering.
  std::size_t zone_pos(int id) const {
    for (std::size_t i = 0; i < zones.size(); ++i)
      if (zones[i].id == id) return i;
    throw std::invalid_argument("unknown zone id " + std::to_string(id));
  }
};

// Sorted ids adjacent to `id` (symmetrized view, never contains id itself).
inline std::vector<int> neighbors(const Surface& s, int id) {
  if (!s.has_zone(id)) throw std::invalid_argument("unknown zone id " + std::to_string(id));
  std::set<int> out;
  for (const auto& [a, b] : s.edges) {
    if (a == id && b != id) out.insert(b);
    if (b == id && a != id) out.insert(a);
  }
  return {out.begin(), out.end()};
}

// Structural diagnostics. Empty result means the surface is well formed.
inline std::vector<std::string> validate(const Surface& s) {
  std::vector<std::string> bad;
  if (s.zones.empty()) bad.push_back("surface has no zones");

  std::set<int> ids;
  for (const auto& z : s.zones) {
    if (!ids.insert(z.id).second)
      bad.push_back("duplicate zone id " + std::to_string(z.id));
  }

  std::set<std::pair<int, int>> edge_set(s.edges.begin(), s.edges.end());
  for (const auto& [a, b] : edge_set) {
    if (ids.count(a) == 0 || ids.count(b) == 0) {
      bad.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                    ") references unknown zone");
      continue;
    }
    if (a == b) {
      bad.push_back("self-loop at " + std::to_string(a));
      continue;
    }
    if (edge_set.count({b, a}) == 0)
      bad.push_back("asymmetric edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }

  // Connectivity over the symmetrized relation.
  if (!s.zones.empty() && ids.size() == s.zones.size()) {
    std::set<int> seen;
    std::queue<int> frontier;
    frontier.push(s.zones.front().id);
    seen.insert(s.zones.front().id);
    while (!frontier.empty()) {
      int cur = frontier.front();
      frontier.pop();
      for (const auto& [a, b] : edge_set) {
        int next = -1;
        if (a == cur) next = b;
        else if (b == cur) next = a;
        else continue;
        if (next != cur && ids.count(next) && seen.insert(next).second) frontier.push(next);
      }
    }
    if (seen.size() != s.zones.size()) bad.push_back("disconnected");
  }
  return bad;
}

// Validated constructor; `undirected_edges` are symmetrized. Throws with the
// joined diagnostics on any violation.
inline Surface make_surface(std::vector<Zone> zones,
                            const std::vector<std::pair<int, int>>& undirected_edges) {
  for (const auto& z : zones) {
    if (!(z.weight > 0.0))
      throw std::invalid_argument("zone " + std::to_string(z.id) + ": weight must be > 0");
  }
  Surface s;
  s.zones = std::move(zones);
  std::set<std::pair<int, int>> sym;
  for (const auto& [a, b] : undirected_edges) {
    sym.insert({a, b});
    sym.insert({b, a});
  }
  s.edges.assign(sym.begin(), sym.end());
  auto bad = validate(s);
  if (!bad.empty()) {
    std::string msg = "invalid surface:";
    for (const auto& v : bad) msg += " " + v + ";";
    throw std::invalid_argument(msg);
  }
  return s;
}

// Hex-flower layout: zones S1..S6 form the outer ring (cyclic), S7 is the
// center and adjacent to every ring zone. Weights are assigned in S1..S7
// order. Ids are 1..7.
inline Surface build_hex7(const std::vector<double>& weights) {
  if (weights.size() != 7) throw std::invalid_argument("build_hex7 expects exactly 7 weights");
  std::vector<Zone> zones;
  zones.reserve(7);
  for (int i = 0; i < 7; ++i) {
    if (!(weights[i] > 0.0))
      throw std::invalid_argument("build_hex7: weight for S" + std::to_string(i + 1) +
                                  " must be > 0");
    zones.push_back({i + 1, weights[i], "S" + std::to_string(i + 1)});
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= 6; ++i) {
    edges.push_back({i, i % 6 + 1});  // ring
    edges.push_back({7, i});          // spokes
  }
  return make_surface(std::move(zones), edges);
}

}  // namespace hopmdp
