#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "snakes/geometry.hpp"
#include "snakes/rng.hpp"

namespace snakes {

// Match timing is counted in logical ticks; one tick corresponds to 100 ms
// of contest wall time. Wall vs logical mode only changes how the decision
// budget is enforced by the match runner, never the engine transition.
inline constexpr int kMsPerTick = 100;

enum class ClockMode : std::uint8_t { Wall, Logical };

constexpr std::string_view clock_mode_name(ClockMode m) {
  return m == ClockMode::Wall ? "wall" : "logical";
}

struct MatchConfig {
  int width = 15;
  int height = 15;
  int initial_length = 3;
  ClockMode clock_mode = ClockMode::Logical;
  int match_limit_ticks = 1800;          // 3 minutes at 100 ms per tick
  int decision_budget_ms = 1000;         // wall mode, per decision
  std::uint64_t decision_budget_nodes = 20000;  // logical mode, per decision
  int apple_ttl_ticks = 100;             // 10 seconds at 100 ms per tick

  friend bool operator==(const MatchConfig&, const MatchConfig&) = default;
};

struct InvalidConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoardFull : std::runtime_error {
  BoardFull() : std::runtime_error("no unoccupied cell for the apple") {}
};

struct Snake {
  std::vector<Cell> body;  // head first, consecutive cells are 4-neighbors
  Direction heading = Direction::East;
  bool alive = true;

  const Cell& head() const { return body.front(); }
  int length() const { return static_cast<int>(body.size()); }

  friend bool operator==(const Snake&, const Snake&) = default;
};

struct AppleState {
  std::optional<Cell> position;  // nullopt between eating/expiry and respawn
  int age_ticks = 0;

  friend bool operator==(const AppleState&, const AppleState&) = default;
};

enum class MatchResult : std::uint8_t { WhiteWins, BlueWins, Draw };

enum class MatchCause : std::uint8_t {
  OffBoard,
  SelfCollision,
  OpponentCollision,
  HeadToHead,
  Timeout,          // decision budget exceeded (recorded by the match runner)
  TimeLimit,        // match clock ran out, decided on score
  SimultaneousLoss,
  Forfeit,          // bot crashed (recorded by the match runner)
};

constexpr std::string_view result_name(MatchResult r) {
  switch (r) {
    case MatchResult::WhiteWins: return "white";
    case MatchResult::BlueWins: return "blue";
    case MatchResult::Draw: return "draw";
  }
  return "?";
}

constexpr std::string_view cause_name(MatchCause c) {
  switch (c) {
    case MatchCause::OffBoard: return "off_board";
    case MatchCause::SelfCollision: return "self_collision";
    case MatchCause::OpponentCollision: return "opponent_collision";
    case MatchCause::HeadToHead: return "head_to_head";
    case MatchCause::Timeout: return "timeout";
    case MatchCause::TimeLimit: return "time_limit";
    case MatchCause::SimultaneousLoss: return "simultaneous_loss";
    case MatchCause::Forfeit: return "forfeit";
  }
  return "?";
}

struct MatchOutcome {
  MatchResult result = MatchResult::Draw;
  MatchCause cause = MatchCause::TimeLimit;
  std::array<int, 2> final_scores = {0, 0};

  friend bool operator==(const MatchOutcome&, const MatchOutcome&) = default;
};

// Result is stated from white's point of view; index 0 = white, 1 = blue.
constexpr MatchResult win_for(int snake_index) {
  return snake_index == 0 ? MatchResult::WhiteWins : MatchResult::BlueWins;
}

struct GameState {
  MatchConfig config;
  std::array<Snake, 2> snakes;  // 0 = white, 1 = blue
  AppleState apple;
  std::array<int, 2> scores = {0, 0};
  int clock_ticks = 0;
  Xoshiro256StarStar rng;
  std::optional<MatchOutcome> outcome;  // engaged iff the match is finished

  int width() const { return config.width; }
  int height() const { return config.height; }
  bool running() const { return !outcome.has_value(); }

  friend bool operator==(const GameState&, const GameState&) = default;
};

struct StepOutcome {
  GameState next;
  std::optional<MatchOutcome> terminal;  // engaged iff next is finished
};

// Occupancy bitmap of both snake bodies, independent of alive flags.
inline std::vector<std::uint8_t> body_occupancy(const GameState& state) {
  std::vector<std::uint8_t> grid(
      static_cast<std::size_t>(state.width()) * state.height(), 0);
  for (const Snake& snake : state.snakes)
    for (Cell c : snake.body) grid[cell_index(c, state.width())] = 1;
  return grid;
}

namespace detail {

// Places the apple uniformly over unoccupied cells, advancing the rng.
// Returns false when the board is full; the apple stays absent.
inline bool place_apple(GameState& state) {
  const auto occupied = body_occupancy(state);
  const std::uint64_t free_count = static_cast<std::uint64_t>(
      std::count(occupied.begin(), occupied.end(), std::uint8_t{0}));
  if (free_count == 0) return false;
  std::uint64_t pick = state.rng.below(free_count);
  for (int y = 0; y < state.height(); ++y) {
    for (int x = 0; x < state.width(); ++x) {
      if (occupied[static_cast<std::size_t>(y) * state.width() + x]) continue;
      if (pick == 0) {
        state.apple.position = Cell{x, y};
        state.apple.age_ticks = 0;
        return true;
      }
      --pick;
    }
  }
  return false;  // unreachable
}

inline void require_running(const GameState& state, const char* op) {
  if (!state.running())
    throw std::logic_error(std::string(op) + " requires a running match");
}

// One tick of apple lifetime; at the TTL the apple relocates. A full board
// leaves it absent, to be retried at the next step.
inline void age_apple(GameState& state) {
  if (!state.apple.position.has_value()) return;
  state.apple.age_ticks += 1;
  if (state.apple.age_ticks >= state.config.apple_ttl_ticks) {
    state.apple.position.reset();
    place_apple(state);
  }
}

}  // namespace detail

// Spawns a fresh apple on a uniformly random unoccupied cell. The rng
// embedded in the state advances, so equal states give equal positions.
inline GameState spawn_apple(const GameState& state) {
  if (state.apple.position.has_value())
    throw std::logic_error("spawn_apple requires an absent apple");
  GameState next = state;
  if (!detail::place_apple(next)) throw BoardFull{};
  return next;
}

// Ages the apple by one tick; at apple_ttl_ticks it relocates to a fresh
// uniformly random unoccupied cell (2021 rule). No-op while absent.
inline GameState tick_apple(const GameState& state) {
  detail::require_running(state, "tick_apple");
  GameState next = state;
  detail::age_apple(next);
  return next;
}

// Creates the initial state: two point-symmetric snakes facing open space,
// one apple, zeroed scores and clock. Deterministic in (config, seed).
inline GameState new_match(const MatchConfig& config, std::uint64_t seed) {
  if (config.width < 5 || config.height < 5)
    throw InvalidConfig("board must be at least 5x5");
  if (config.initial_length < 1)
    throw InvalidConfig("initial_length must be at least 1");
  if (config.initial_length > config.height)
    throw InvalidConfig("snakes of that length cannot be placed disjointly");
  if (config.match_limit_ticks < 1 || config.apple_ttl_ticks < 1)
    throw InvalidConfig("match limit and apple TTL must be positive");

  GameState state;
  state.config = config;
  state.rng = Xoshiro256StarStar(seed);

  // White runs down a column near the left edge, head at the top, heading
  // East; blue is the 180-degree rotation. Narrow boards use column 1 so
  // the two columns stay distinct.
  const int column = config.width >= 7 ? 2 : 1;
  const int top = (config.height - config.initial_length) / 2;

  Snake& white = state.snakes[0];
  white.heading = Direction::East;
  for (int i = 0; i < config.initial_length; ++i)
    white.body.push_back(Cell{column, top + i});

  Snake& blue = state.snakes[1];
  blue.heading = Direction::West;
  for (Cell c : white.body)
    blue.body.push_back(Cell{config.width - 1 - c.x, config.height - 1 - c.y});

  if (!detail::place_apple(state))
    throw InvalidConfig("board too small to place both snakes and an apple");
  return state;
}

namespace detail {

inline bool contains(const std::vector<Cell>& cells, Cell c) {
  return std::find(cells.begin(), cells.end(), c) != cells.end();
}

// Body cells still occupied after the move: the tail vacates unless the
// snake grows by landing on the apple this step.
inline std::vector<Cell> post_move_body(const Snake& snake, Cell new_head,
                                        const std::optional<Cell>& apple) {
  std::vector<Cell> cells = snake.body;
  const bool grows = apple.has_value() && new_head == *apple;
  if (!grows) cells.pop_back();
  return cells;
}

}  // namespace detail

// Directions that keep the snake alive for one step if the opponent stands
// still: new head on-board, outside the own post-move body and outside the
// opponent's (unmoved) body. May be empty.
inline std::vector<Direction> legal_survival_moves(const GameState& state,
                                                   int snake_index) {
  const Snake& self = state.snakes[snake_index];
  const Snake& other = state.snakes[1 - snake_index];
  std::vector<Direction> moves;
  for (Direction d : kDirectionOrder) {
    const Cell target = neighbor(self.head(), d);
    if (!on_board(target, state.width(), state.height())) continue;
    if (detail::contains(
            detail::post_move_body(self, target, state.apple.position), target))
      continue;
    if (detail::contains(other.body, target)) continue;
    moves.push_back(d);
  }
  return moves;
}

// One simultaneous transition: respawn a missing apple, move both heads,
// resolve collisions against post-move bodies, feed the surviving eater,
// age the apple, advance the clock and apply the time limit.
inline StepOutcome step(const GameState& state, Direction move_white,
                        Direction move_blue) {
  detail::require_running(state, "step");
  GameState next = state;

  // Eaten or expired apples come back at the start of the following step,
  // so one step stays a single atomic transition.
  if (!next.apple.position.has_value()) detail::place_apple(next);

  const std::array<Direction, 2> moves = {move_white, move_blue};
  std::array<Cell, 2> new_heads;
  std::array<std::vector<Cell>, 2> post_bodies;
  std::array<bool, 2> grows{};
  for (int i = 0; i < 2; ++i) {
    new_heads[i] = neighbor(next.snakes[i].head(), moves[i]);
    grows[i] = next.apple.position.has_value() &&
               new_heads[i] == *next.apple.position;
    post_bodies[i] =
        detail::post_move_body(next.snakes[i], new_heads[i], next.apple.position);
  }

  std::array<bool, 2> off_board_loss{};
  std::array<bool, 2> self_loss{};
  std::array<bool, 2> opponent_loss{};
  for (int i = 0; i < 2; ++i) {
    off_board_loss[i] = !on_board(new_heads[i], next.width(), next.height());
    self_loss[i] = detail::contains(post_bodies[i], new_heads[i]);
    opponent_loss[i] = detail::contains(post_bodies[1 - i], new_heads[i]);
  }

  // Heads on the same cell, or heads swapping cells, is a head-to-head and
  // supersedes the plain body-collision reading of the same geometry.
  const bool head_to_head =
      new_heads[0] == new_heads[1] ||
      (new_heads[0] == state.snakes[1].head() &&
       new_heads[1] == state.snakes[0].head());

  std::array<bool, 2> h2h_loss{};
  if (head_to_head) {
    const int len_white = next.snakes[0].length();
    const int len_blue = next.snakes[1].length();
    h2h_loss[0] = len_white <= len_blue;
    h2h_loss[1] = len_blue <= len_white;
  }

  std::array<bool, 2> loses{};
  for (int i = 0; i < 2; ++i) {
    loses[i] = off_board_loss[i] || self_loss[i] ||
               (!head_to_head && opponent_loss[i]) || h2h_loss[i];
  }

  std::optional<MatchOutcome> terminal;
  if (loses[0] || loses[1]) {
    MatchOutcome out;
    if (loses[0] && loses[1]) {
      out.result = MatchResult::Draw;
      const bool pure_h2h = head_to_head && !off_board_loss[0] &&
                            !off_board_loss[1] && !self_loss[0] && !self_loss[1];
      out.cause =
          pure_h2h ? MatchCause::HeadToHead : MatchCause::SimultaneousLoss;
    } else {
      const int loser = loses[0] ? 0 : 1;
      out.result = win_for(1 - loser);
      if (off_board_loss[loser]) out.cause = MatchCause::OffBoard;
      else if (self_loss[loser]) out.cause = MatchCause::SelfCollision;
      else if (h2h_loss[loser]) out.cause = MatchCause::HeadToHead;
      else out.cause = MatchCause::OpponentCollision;
    }
    terminal = out;
  }

  // Survivors move; losers keep their pre-move bodies and are marked dead.
  for (int i = 0; i < 2; ++i) {
    if (loses[i]) {
      next.snakes[i].alive = false;
      continue;
    }
    std::vector<Cell> body;
    body.reserve(post_bodies[i].size() + 1);
    body.push_back(new_heads[i]);
    body.insert(body.end(), post_bodies[i].begin(), post_bodies[i].end());
    next.snakes[i].body = std::move(body);
    next.snakes[i].heading = moves[i];
    if (grows[i]) {
      next.scores[i] += 1;
      next.apple.position.reset();
      next.apple.age_ticks = 0;
    }
  }

  if (!terminal.has_value()) detail::age_apple(next);

  next.clock_ticks += 1;
  if (!terminal.has_value() && next.clock_ticks >= next.config.match_limit_ticks) {
    MatchOutcome out;
    out.cause = MatchCause::TimeLimit;
    out.result = next.scores[0] > next.scores[1]   ? MatchResult::WhiteWins
                 : next.scores[1] > next.scores[0] ? MatchResult::BlueWins
                                                   : MatchResult::Draw;
    terminal = out;
  }

  if (terminal.has_value()) {
    terminal->final_scores = next.scores;
    next.outcome = terminal;
  }
  return StepOutcome{std::move(next), terminal};
}

}  // namespace snakes
