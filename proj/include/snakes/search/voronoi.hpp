#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "snakes/engine.hpp"
#include "snakes/search/distance.hpp"

namespace snakes {

// Board partition by who reaches each free cell first. Contested covers
// ties and cells neither snake can reach.
struct Ownership {
  int owned_self = 0;
  int owned_opponent = 0;
  int contested = 0;
};

namespace detail {

inline Ownership ownership_from_fields(const DistanceField& self_field,
                                       const DistanceField& opp_field,
                                       const std::vector<std::uint8_t>& occupancy) {
  Ownership own;
  for (std::size_t i = 0; i < occupancy.size(); ++i) {
    if (occupancy[i]) continue;
    int d_self = self_field.cells[i];
    int d_opp = opp_field.cells[i];
    bool self_reaches = d_self != DistanceField::kUnreachable;
    bool opp_reaches = d_opp != DistanceField::kUnreachable;
    if (self_reaches && (!opp_reaches || d_self < d_opp)) {
      ++own.owned_self;
    } else if (opp_reaches && (!self_reaches || d_opp < d_self)) {
      ++own.owned_opponent;
    } else {
      ++own.contested;
    }
  }
  return own;
}

}  // namespace detail

// Two-BFS Voronoi partition of the free cells from the two heads.
inline Ownership voronoi_ownership(const GameState& state, int snake_index) {
  if (snake_index < 0 || snake_index > 1) throw std::logic_error("snake index out of range");
  const Snake& self = state.snakes[snake_index];
  const Snake& opponent = state.snakes[1 - snake_index];
  if (!self.alive || !opponent.alive) throw std::logic_error("voronoi needs both snakes alive");

  auto occupancy = body_occupancy(state);
  std::array<Cell, 1> self_src{self.head()};
  std::array<Cell, 1> opp_src{opponent.head()};
  DistanceField self_field = bfs_distances(state, self_src, occupancy);
  DistanceField opp_field = bfs_distances(state, opp_src, occupancy);
  return detail::ownership_from_fields(self_field, opp_field, occupancy);
}

}  // namespace snakes
