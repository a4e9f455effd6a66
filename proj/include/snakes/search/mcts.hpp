#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "snakes/engine.hpp"
#include "snakes/rng.hpp"
#include "snakes/search/budget.hpp"
#include "snakes/search/evaluate.hpp"

namespace snakes {

struct MctsOptions {
  int rollout_horizon = 50;
  double exploration = 1.4142135623730951;
  std::uint64_t max_iterations = std::numeric_limits<std::uint64_t>::max();
  EvalWeights weights{};
};

namespace detail {

// The game tree alternates plies within one tick: the root player commits a
// direction, then the opponent replies and the engine steps. Ply 0 nodes own
// a game state; ply 1 nodes borrow their parent's state while the root
// player's direction is pending.
struct MctsNode {
  int parent = -1;
  int ply = 0;
  Direction move_in = Direction::North;
  GameState state;
  std::optional<MatchOutcome> outcome;
  std::vector<Direction> moves;
  std::vector<int> children;
  std::size_t untried = 0;
  std::uint32_t visits = 0;
  double reward = 0.0;
};

inline std::vector<Direction> mcts_candidates(const GameState& state, int mover) {
  auto moves = legal_survival_moves(state, mover);
  if (moves.empty()) moves.push_back(state.snakes[mover].heading);
  return moves;
}

inline double mcts_outcome_score(const MatchOutcome& outcome, int snake_index) {
  if (outcome.result == MatchResult::Draw) return 0.5;
  return outcome.result == win_for(snake_index) ? 1.0 : 0.0;
}

// Uniform self-play over survival moves until the game ends or the horizon
// runs out; a cut-off game scores by the sign of the evaluation.
inline double mcts_rollout(GameState state, int snake_index, int horizon,
                           Xoshiro256StarStar& rng, const MctsOptions& options,
                           SearchStats* stats) {
  for (int tick = 0; tick < horizon && state.running(); ++tick) {
    auto white_moves = mcts_candidates(state, 0);
    auto blue_moves = mcts_candidates(state, 1);
    Direction white = white_moves[rng.below(white_moves.size())];
    Direction blue = blue_moves[rng.below(blue_moves.size())];
    state = step(state, white, blue).next;
    if (stats != nullptr) ++stats->nodes;
  }
  if (!state.running()) return mcts_outcome_score(*state.outcome, snake_index);
  double v = evaluate(state, snake_index, options.weights);
  if (v > 0.0) return 1.0;
  if (v < 0.0) return 0.0;
  return 0.5;
}

}  // namespace detail

// UCT search from one snake's view. Deterministic for a fixed rng seed and
// logical budget: candidate lists, tie-breaks, and arena layout are all in
// fixed order, so only the rng draws vary. Returns the most-visited root
// move, ties resolved toward the earlier direction in N,E,S,W order.
inline Direction mcts_decide(const GameState& state, int snake_index, SearchBudget& budget,
                             Xoshiro256StarStar& rng, const MctsOptions& options = {},
                             SearchStats* stats = nullptr) {
  detail::require_running(state, "mcts_decide");

  auto root_moves = detail::mcts_candidates(state, snake_index);
  if (legal_survival_moves(state, snake_index).empty()) return state.snakes[snake_index].heading;
  if (root_moves.size() == 1) return root_moves.front();

  constexpr std::size_t kMaxArenaNodes = std::size_t{1} << 19;
  const int opponent = 1 - snake_index;

  std::vector<detail::MctsNode> arena;
  arena.reserve(1024);
  arena.push_back({});
  arena[0].state = state;
  arena[0].moves = root_moves;
  arena[0].children.assign(root_moves.size(), -1);

  auto combine = [&](Direction own, Direction reply, Direction& white, Direction& blue) {
    white = snake_index == 0 ? own : reply;
    blue = snake_index == 0 ? reply : own;
  };

  for (std::uint64_t iter = 0; iter < options.max_iterations; ++iter) {
    try {
      budget.charge();
    } catch (const BudgetExhausted&) {
      break;
    }
    if (arena.size() >= kMaxArenaNodes) break;
    if (stats != nullptr) ++stats->iterations;

    // Selection: walk fully expanded nodes by UCT until a node with an
    // untried move or a terminal node.
    int node = 0;
    while (!arena[node].outcome.has_value() && arena[node].untried >= arena[node].moves.size()) {
      const detail::MctsNode& n = arena[node];
      double log_visits = std::log(static_cast<double>(n.visits));
      int best_child = -1;
      double best_score = 0.0;
      for (int child : n.children) {
        const detail::MctsNode& c = arena[child];
        double mean = c.reward / c.visits;
        if (n.ply == 1) mean = 1.0 - mean;
        double score = mean + options.exploration *
                                  std::sqrt(log_visits / static_cast<double>(c.visits));
        if (best_child == -1 || score > best_score) {
          best_child = child;
          best_score = score;
        }
      }
      node = best_child;
    }

    // Expansion and rollout.
    double reward;
    if (arena[node].outcome.has_value()) {
      reward = detail::mcts_outcome_score(*arena[node].outcome, snake_index);
    } else {
      detail::MctsNode& n = arena[node];
      Direction move = n.moves[n.untried];
      int child_index = static_cast<int>(arena.size());
      n.children[n.untried] = child_index;
      ++n.untried;

      detail::MctsNode child;
      child.parent = node;
      child.move_in = move;
      if (n.ply == 0) {
        // Own move committed; replies come from the opponent in this state.
        child.ply = 1;
        child.moves = detail::mcts_candidates(n.state, opponent);
        child.children.assign(child.moves.size(), -1);
        Direction reply = child.moves[rng.below(child.moves.size())];
        Direction white, blue;
        combine(move, reply, white, blue);
        GameState stepped = step(n.state, white, blue).next;
        if (stats != nullptr) ++stats->nodes;
        reward = stepped.running()
                     ? detail::mcts_rollout(std::move(stepped), snake_index,
                                            options.rollout_horizon, rng, options, stats)
                     : detail::mcts_outcome_score(*stepped.outcome, snake_index);
      } else {
        // Opponent reply chosen; the tick resolves into a fresh state.
        const detail::MctsNode& grand = arena[n.parent];
        Direction white, blue;
        combine(n.move_in, move, white, blue);
        child.ply = 0;
        child.state = step(grand.state, white, blue).next;
        if (stats != nullptr) ++stats->nodes;
        if (child.state.running()) {
          child.moves = detail::mcts_candidates(child.state, snake_index);
          child.children.assign(child.moves.size(), -1);
          reward = detail::mcts_rollout(child.state, snake_index, options.rollout_horizon, rng,
                                        options, stats);
        } else {
          child.outcome = child.state.outcome;
          reward = detail::mcts_outcome_score(*child.outcome, snake_index);
        }
      }
      arena.push_back(std::move(child));
      node = child_index;
    }

    // Backpropagation, reward always from the root player's view.
    for (int up = node; up != -1; up = arena[up].parent) {
      ++arena[up].visits;
      arena[up].reward += reward;
    }
  }

  const detail::MctsNode& root = arena[0];
  std::size_t best = 0;
  std::uint32_t best_visits = 0;
  for (std::size_t i = 0; i < root.moves.size(); ++i) {
    int child = root.children[i];
    std::uint32_t visits = child == -1 ? 0 : arena[child].visits;
    if (visits > best_visits) {
      best = i;
      best_visits = visits;
    }
  }
  return root.moves[best];
}

}  // namespace snakes
