#pragma once

#include <array>

#include "snakes/engine.hpp"
#include "snakes/search/distance.hpp"
#include "snakes/search/voronoi.hpp"

namespace snakes {

struct EvalWeights {
  double length = 10.0;
  double apple_distance = 1.0;
  double territory = 1.0;
};

// Decided games score far outside anything the heuristic can produce, so
// search always prefers a certain win over any position and any position
// over a certain loss.
inline constexpr double kWinScore = 1e9;

inline bool is_decided_score(double v) { return v >= kWinScore || v <= -kWinScore; }

// Score of a finished game from one snake's view. remaining_depth biases
// search toward faster wins and slower losses.
inline double terminal_value(const MatchOutcome& outcome, int snake_index, int remaining_depth) {
  if (outcome.result == MatchResult::Draw) return 0.0;
  double magnitude = kWinScore + remaining_depth;
  return outcome.result == win_for(snake_index) ? magnitude : -magnitude;
}

// Heuristic position score: length lead, apple-race lead, and Voronoi
// territory lead, each from snake_index's view. An unreachable apple counts
// as width*height steps away; with no apple on the board the race term is
// zero. Finished games take the terminal score instead.
inline double evaluate(const GameState& state, int snake_index, const EvalWeights& weights) {
  if (!state.running()) return terminal_value(*state.outcome, snake_index, 0);

  const Snake& self = state.snakes[snake_index];
  const Snake& opponent = state.snakes[1 - snake_index];

  auto occupancy = body_occupancy(state);
  std::array<Cell, 1> self_src{self.head()};
  std::array<Cell, 1> opp_src{opponent.head()};
  DistanceField self_field = bfs_distances(state, self_src, occupancy);
  DistanceField opp_field = bfs_distances(state, opp_src, occupancy);

  double length_term = static_cast<double>(self.length() - opponent.length());

  double apple_term = 0.0;
  if (state.apple.position.has_value()) {
    int sentinel = state.width() * state.height();
    int d_self = self_field.at(*state.apple.position);
    int d_opp = opp_field.at(*state.apple.position);
    if (d_self == DistanceField::kUnreachable) d_self = sentinel;
    if (d_opp == DistanceField::kUnreachable) d_opp = sentinel;
    apple_term = static_cast<double>(d_opp - d_self);
  }

  Ownership own = detail::ownership_from_fields(self_field, opp_field, occupancy);
  double territory_term = static_cast<double>(own.owned_self - own.owned_opponent);

  return weights.length * length_term + weights.apple_distance * apple_term +
         weights.territory * territory_term;
}

}  // namespace snakes
