#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "dehn/errors.hpp"
#include "dehn/pd_code.hpp"

namespace dehn {

using region_id = int;
using crossing_id = std::size_t;

enum class Shade { black, white };

/// Regions (faces) of a knot projection together with the local picture at
/// every crossing.
///
/// quadrants[k][i] is the region in the corner between edge ends i and i+1 of
/// crossing k (counterclockwise). Corners 0 and 2 are opposite, as are 1 and 3.
/// edge_sides[e] holds (left, right) when the edge is walked away from its
/// first occurrence in the PD code.
struct DiagramTopology {
  std::size_t crossing_count = 0;
  std::size_t region_count = 0;
  std::vector<std::array<region_id, 4>> quadrants;
  std::map<edge_label, std::pair<region_id, region_id>> edge_sides;
  std::vector<Shade> shading;
};

/// The four regions at a crossing named from the point of view of x1.
/// x2 lies across the under-arc from x1, x3 across the over-arc, x4 opposite.
struct CrossingCorners {
  crossing_id crossing = 0;
  region_id x1 = 0, x2 = 0, x3 = 0, x4 = 0;
};

/// Traces faces through the rotation system given by the PD code and checks
/// the result is a spherical projection (c + 2 faces, proper 2-coloring).
inline DiagramTopology extract_topology(const PDCode& pd) {
  DiagramTopology topo;
  const std::size_t c = pd.crossings.size();
  topo.crossing_count = c;
  if (c == 0) {
    topo.region_count = 2;
    topo.shading = {Shade::black, Shade::white};
    return topo;
  }

  // Pair up edge ends: end 4k+i is position i of crossing k.
  const std::size_t ends = 4 * c;
  std::vector<std::size_t> other_end(ends, ends);
  std::map<edge_label, std::size_t> first_seen;
  for (std::size_t k = 0; k < c; ++k)
    for (std::size_t i = 0; i < 4; ++i) {
      std::size_t end = 4 * k + i;
      auto [it, inserted] = first_seen.emplace(pd.crossings[k][i], end);
      if (!inserted) {
        if (other_end[it->second] != ends)
          throw InputError("edge label " + std::to_string(pd.crossings[k][i]) + " occurs more than twice");
        other_end[it->second] = end;
        other_end[end] = it->second;
      }
    }
  for (std::size_t e = 0; e < ends; ++e)
    if (other_end[e] == ends)
      throw InputError("edge label " + std::to_string(pd.crossings[e / 4][e % 4]) + " occurs only once");

  // Corner (k,i) continues along edge end (k,i+1); arriving at end (k',j) the
  // same face occupies corner (k',j).
  std::vector<region_id> corner_region(ends, -1);
  region_id next_region = 0;
  for (std::size_t start = 0; start < ends; ++start) {
    if (corner_region[start] != -1)
      continue;
    std::size_t corner = start;
    std::size_t steps = 0;
    do {
      if (corner_region[corner] != -1 || ++steps > ends)
        throw InputError("face traversal does not close up; PD code is not a planar projection");
      corner_region[corner] = next_region;
      std::size_t k = corner / 4, i = corner % 4;
      corner = other_end[4 * k + (i + 1) % 4];
    } while (corner != start);
    ++next_region;
  }
  topo.region_count = static_cast<std::size_t>(next_region);
  if (topo.region_count != c + 2)
    throw InputError("PD code yields " + std::to_string(topo.region_count) + " faces, expected " +
                     std::to_string(c + 2) + "; not a planar knot projection");

  topo.quadrants.resize(c);
  for (std::size_t k = 0; k < c; ++k)
    for (std::size_t i = 0; i < 4; ++i)
      topo.quadrants[k][i] = corner_region[4 * k + i];

  // Walking out along end (k,i): corner i is on the left, corner i-1 on the right.
  for (const auto& [label, end] : first_seen) {
    std::size_t k = end / 4, i = end % 4;
    topo.edge_sides[label] = {topo.quadrants[k][i], topo.quadrants[k][(i + 3) % 4]};
  }

  std::vector<std::vector<region_id>> adjacent(topo.region_count);
  for (const auto& [label, sides] : topo.edge_sides) {
    adjacent[static_cast<std::size_t>(sides.first)].push_back(sides.second);
    adjacent[static_cast<std::size_t>(sides.second)].push_back(sides.first);
  }
  std::vector<int> shade(topo.region_count, -1);
  std::queue<region_id> queue;
  shade[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    region_id r = queue.front();
    queue.pop();
    for (region_id s : adjacent[static_cast<std::size_t>(r)]) {
      auto& sh = shade[static_cast<std::size_t>(s)];
      if (sh == -1) {
        sh = 1 - shade[static_cast<std::size_t>(r)];
        queue.push(s);
      } else if (sh == shade[static_cast<std::size_t>(r)]) {
        throw InputError("regions do not admit a checkerboard shading; PD code is inconsistent");
      }
    }
  }
  topo.shading.reserve(topo.region_count);
  for (int s : shade) {
    if (s == -1)
      throw InputError("region graph is disconnected; PD code is inconsistent");
    topo.shading.push_back(s == 0 ? Shade::black : Shade::white);
  }
  return topo;
}

/// Corner naming with x1 in quadrant 0: (x1,x2,x3,x4) = (q0,q3,q1,q2).
inline CrossingCorners crossing_corners(const DiagramTopology& topo, crossing_id k) {
  if (k >= topo.crossing_count)
    throw InputError("unknown crossing id " + std::to_string(k));
  const auto& q = topo.quadrants[k];
  return {k, q[0], q[3], q[1], q[2]};
}

} // namespace dehn
