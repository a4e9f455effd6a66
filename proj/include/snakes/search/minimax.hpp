#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "snakes/engine.hpp"
#include "snakes/search/evaluate.hpp"

namespace snakes {

// Exhaustive paranoid minimax: the mover picks a direction, then the
// opponent picks the reply knowing it, both legal-or-not, depth plies of
// full (move, reply) rounds. Reference point for the pruned search; every
// step expansion is tallied into node_count when given.
inline double minimax_value(const GameState& state, int depth, int snake_index,
                            const EvalWeights& weights, std::uint64_t* node_count = nullptr) {
  if (depth < 0) throw std::logic_error("minimax depth must be non-negative");
  if (!state.running()) return terminal_value(*state.outcome, snake_index, depth);
  if (depth == 0) return evaluate(state, snake_index, weights);

  double best = -std::numeric_limits<double>::infinity();
  for (Direction own_move : kDirectionOrder) {
    double worst = std::numeric_limits<double>::infinity();
    for (Direction reply : kDirectionOrder) {
      Direction white = snake_index == 0 ? own_move : reply;
      Direction blue = snake_index == 0 ? reply : own_move;
      StepOutcome child = step(state, white, blue);
      if (node_count != nullptr) ++*node_count;
      worst = std::min(worst,
                       minimax_value(child.next, depth - 1, snake_index, weights, node_count));
    }
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace snakes
