#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "snakes/engine.hpp"
#include "snakes/geometry.hpp"

namespace snakes {

// Shortest path from one cell to another around both snake bodies, start
// and goal cells inclusive. The start may sit on a body (a head does); the
// goal must be free. Manhattan distance is the heuristic, so path lengths
// match BFS exactly; ties in the open queue break toward lower heuristic,
// then lower cell index, for determinism. Returns nullopt when no path
// exists.
inline std::optional<std::vector<Cell>> astar_path(const GameState& state, Cell from, Cell to) {
  const int width = state.width();
  const int height = state.height();
  if (!on_board(from, width, height) || !on_board(to, width, height)) {
    throw std::logic_error("astar endpoints must be on board");
  }

  auto occupancy = body_occupancy(state);
  if (from == to) return std::vector<Cell>{from};
  if (occupancy[cell_index(to, width)]) return std::nullopt;

  struct OpenEntry {
    int f;
    int h;
    int idx;
    bool operator>(const OpenEntry& other) const {
      if (f != other.f) return f > other.f;
      if (h != other.h) return h > other.h;
      return idx > other.idx;
    }
  };

  std::vector<int> g(static_cast<std::size_t>(width) * height, -1);
  std::vector<int> parent(g.size(), -1);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<OpenEntry>> open;

  int start = cell_index(from, width);
  int goal = cell_index(to, width);
  g[start] = 0;
  open.push({manhattan(from, to), manhattan(from, to), start});

  while (!open.empty()) {
    OpenEntry entry = open.top();
    open.pop();
    int idx = entry.idx;
    Cell c{idx % width, idx / width};
    if (entry.f != g[idx] + manhattan(c, to)) continue;
    if (idx == goal) break;
    for (Direction d : kDirectionOrder) {
      Cell n = neighbor(c, d);
      if (!on_board(n, width, height)) continue;
      int nidx = cell_index(n, width);
      if (occupancy[nidx]) continue;
      int ng = g[idx] + 1;
      if (g[nidx] != -1 && g[nidx] <= ng) continue;
      g[nidx] = ng;
      parent[nidx] = idx;
      int h = manhattan(n, to);
      open.push({ng + h, h, nidx});
    }
  }

  if (g[goal] == -1) return std::nullopt;

  std::vector<Cell> path;
  for (int idx = goal; idx != -1; idx = parent[idx]) {
    path.push_back({idx % width, idx / width});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace snakes
