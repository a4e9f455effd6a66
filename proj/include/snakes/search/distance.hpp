#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "snakes/engine.hpp"
#include "snakes/geometry.hpp"

namespace snakes {

// Grid of shortest-path step counts from a set of source cells. Cells a
// search never reached hold kUnreachable.
struct DistanceField {
  static constexpr int kUnreachable = -1;

  int width = 0;
  int height = 0;
  std::vector<int> cells;

  int at(Cell c) const { return cells[cell_index(c, width)]; }
  bool reachable(Cell c) const { return at(c) != kUnreachable; }
};

namespace detail {

// Core BFS over the 4-neighborhood. Source cells are seeded at distance 0
// even when the blocked grid marks them (a snake head is on a body cell);
// blockage only gates which cells the frontier may enter.
inline DistanceField bfs_from(int width, int height, std::span<const Cell> sources,
                              const std::uint8_t* blocked) {
  DistanceField field;
  field.width = width;
  field.height = height;
  field.cells.assign(static_cast<std::size_t>(width) * height, DistanceField::kUnreachable);

  std::vector<int> queue;
  queue.reserve(field.cells.size());
  for (Cell s : sources) {
    if (!on_board(s, width, height)) throw std::logic_error("bfs source off board");
    int idx = cell_index(s, width);
    if (field.cells[idx] != 0) {
      field.cells[idx] = 0;
      queue.push_back(idx);
    }
  }

  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int idx = queue[qi];
    Cell c{idx % width, idx / width};
    int next = field.cells[idx] + 1;
    for (Direction d : kDirectionOrder) {
      Cell n = neighbor(c, d);
      if (!on_board(n, width, height)) continue;
      int nidx = cell_index(n, width);
      if (blocked[nidx] || field.cells[nidx] != DistanceField::kUnreachable) continue;
      field.cells[nidx] = next;
      queue.push_back(nidx);
    }
  }
  return field;
}

}  // namespace detail

// BFS distances over the board with an arbitrary blocked predicate.
template <class Blocked>
  requires requires(Blocked& pred, Cell c) {
    { pred(c) } -> std::convertible_to<bool>;
  }
DistanceField bfs_distances(const GameState& state, std::span<const Cell> sources,
                            Blocked&& blocked) {
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(state.width()) * state.height(), 0);
  for (int y = 0; y < state.height(); ++y) {
    for (int x = 0; x < state.width(); ++x) {
      Cell c{x, y};
      if (blocked(c)) grid[cell_index(c, state.width())] = 1;
    }
  }
  return detail::bfs_from(state.width(), state.height(), sources, grid.data());
}

// BFS distances treating every snake body cell as a wall.
inline DistanceField bfs_distances(const GameState& state, std::span<const Cell> sources) {
  auto grid = body_occupancy(state);
  return detail::bfs_from(state.width(), state.height(), sources, grid.data());
}

inline DistanceField bfs_distances(const GameState& state, std::span<const Cell> sources,
                                   const std::vector<std::uint8_t>& occupancy) {
  return detail::bfs_from(state.width(), state.height(), sources, occupancy.data());
}

// Number of cells the field reached, sources included.
inline int reachable_count(const DistanceField& field) {
  int count = 0;
  for (int d : field.cells) {
    if (d != DistanceField::kUnreachable) ++count;
  }
  return count;
}

}  // namespace snakes
