#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "snakes/engine.hpp"
#include "snakes/search/budget.hpp"
#include "snakes/search/evaluate.hpp"

namespace snakes {

struct SearchResult {
  Direction move = Direction::North;
  double value = 0.0;
};

namespace detail {

// Own move fixed, minimize over opponent replies. Fail-hard window; the
// caller's scan order is the fixed N,E,S,W everywhere, which keeps the
// visited tree a subset of the exhaustive one at equal depth.
inline double alphabeta_reply(const GameState& state, Direction own_move, int depth,
                              int snake_index, double alpha, double beta,
                              const EvalWeights& weights, SearchBudget& budget,
                              SearchStats* stats);

inline double alphabeta_move(const GameState& state, int depth, int snake_index, double alpha,
                             double beta, const EvalWeights& weights, SearchBudget& budget,
                             SearchStats* stats) {
  if (!state.running()) return terminal_value(*state.outcome, snake_index, depth);
  if (depth == 0) return evaluate(state, snake_index, weights);
  double best = -std::numeric_limits<double>::infinity();
  for (Direction own_move : kDirectionOrder) {
    double v = alphabeta_reply(state, own_move, depth, snake_index, alpha, beta, weights, budget,
                               stats);
    best = std::max(best, v);
    alpha = std::max(alpha, best);
    if (best >= beta) break;
  }
  return best;
}

inline double alphabeta_reply(const GameState& state, Direction own_move, int depth,
                              int snake_index, double alpha, double beta,
                              const EvalWeights& weights, SearchBudget& budget,
                              SearchStats* stats) {
  double worst = std::numeric_limits<double>::infinity();
  for (Direction reply : kDirectionOrder) {
    Direction white = snake_index == 0 ? own_move : reply;
    Direction blue = snake_index == 0 ? reply : own_move;
    budget.charge();
    StepOutcome child = step(state, white, blue);
    if (stats != nullptr) ++stats->nodes;
    double v = alphabeta_move(child.next, depth - 1, snake_index, alpha, beta, weights, budget,
                              stats);
    worst = std::min(worst, v);
    beta = std::min(beta, worst);
    if (worst <= alpha) break;
  }
  return worst;
}

}  // namespace detail

// Depth-limited paranoid alpha-beta. Root value and move are exact: the
// returned move is the first direction in N,E,S,W order attaining the
// minimax value at this depth. Throws BudgetExhausted mid-search when the
// budget runs dry; partial results are discarded by the caller.
inline SearchResult alphabeta(const GameState& state, int depth, int snake_index,
                              const EvalWeights& weights, SearchBudget& budget,
                              SearchStats* stats = nullptr) {
  if (depth < 1) throw std::logic_error("alphabeta depth must be at least 1");
  detail::require_running(state, "alphabeta");

  SearchResult result;
  double alpha = -std::numeric_limits<double>::infinity();
  double beta = std::numeric_limits<double>::infinity();
  bool first = true;
  for (Direction own_move : kDirectionOrder) {
    double v = detail::alphabeta_reply(state, own_move, depth, snake_index, alpha, beta, weights,
                                       budget, stats);
    if (first || v > result.value) {
      result.move = own_move;
      result.value = v;
      first = false;
    }
    alpha = std::max(alpha, result.value);
  }
  return result;
}

// Iterative deepening under a budget: deepen one ply at a time, keep the
// last fully completed answer, stop on exhaustion, a decided value, or the
// depth cap. With no completed depth at all, falls back to the first legal
// survival move, then to the current heading.
inline Direction iterative_deepening(const GameState& state, int snake_index,
                                     const EvalWeights& weights, SearchBudget& budget,
                                     int max_depth = 128, SearchStats* stats = nullptr) {
  detail::require_running(state, "iterative_deepening");

  auto survival = legal_survival_moves(state, snake_index);
  Direction best = survival.empty() ? state.snakes[snake_index].heading : survival.front();

  for (int depth = 1; depth <= max_depth; ++depth) {
    SearchResult result;
    try {
      result = alphabeta(state, depth, snake_index, weights, budget, stats);
    } catch (const BudgetExhausted&) {
      break;
    }
    best = result.move;
    if (stats != nullptr) {
      stats->depth_completed = depth;
      ++stats->iterations;
    }
    if (is_decided_score(result.value)) break;
  }
  return best;
}

}  // namespace snakes
