#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "snakes/engine.hpp"
#include "snakes/rng.hpp"
#include "snakes/search.hpp"

namespace snakes {

// Everything a bot gets for one decision: a private copy of the state, its
// own side, and the remaining budget for this move.
struct BotView {
  GameState state;
  int self_index = 0;
  SearchBudget budget = SearchBudget::unlimited();
};

class Bot {
 public:
  virtual ~Bot() = default;
  virtual std::string_view name() const = 0;
  virtual Direction decide(const BotView& view) = 0;
  virtual void reset(std::uint64_t /*seed*/) { stats_ = {}; }
  const SearchStats& last_stats() const { return stats_; }

 protected:
  SearchStats stats_;
};

// Uniform pick among the survival moves; the current heading when boxed in,
// accepting the loss.
inline Direction random_safe_decide(const BotView& view, Xoshiro256StarStar& rng) {
  auto moves = legal_survival_moves(view.state, view.self_index);
  if (moves.empty()) return view.state.snakes[view.self_index].heading;
  return moves[rng.below(moves.size())];
}

namespace detail {

// State after only this snake advances, the opponent frozen in place. Used
// for one-move lookaheads; the move must keep the head on the board.
inline GameState advance_self_only(const GameState& state, int self, Direction move) {
  GameState next = state;
  Snake& snake = next.snakes[self];
  Cell new_head = neighbor(snake.head(), move);
  bool grows = next.apple.position.has_value() && new_head == *next.apple.position;
  std::vector<Cell> cells = post_move_body(snake, new_head, next.apple.position);
  cells.insert(cells.begin(), new_head);
  snake.body = std::move(cells);
  snake.heading = move;
  if (grows) next.apple.position.reset();
  return next;
}

inline int area_after_move(const GameState& state, int self, Direction move) {
  GameState after = advance_self_only(state, self, move);
  std::array<Cell, 1> src{after.snakes[self].head()};
  return reachable_count(bfs_distances(after, src));
}

}  // namespace detail

// Chase the apple along a shortest path when that first step is survivable
// one tick further; otherwise take the survival move that keeps the largest
// reachable area, ties toward the earlier direction in N,E,S,W order.
inline Direction greedy_bfs_decide(const BotView& view) {
  const GameState& state = view.state;
  const int self = view.self_index;
  const Cell head = state.snakes[self].head();

  auto survival = legal_survival_moves(state, self);
  if (survival.empty()) return state.snakes[self].heading;

  if (state.apple.position.has_value()) {
    auto path = astar_path(state, head, *state.apple.position);
    if (path.has_value() && path->size() >= 2) {
      Cell first_step = (*path)[1];
      for (Direction d : survival) {
        if (neighbor(head, d) != first_step) continue;
        GameState after = detail::advance_self_only(state, self, d);
        if (!legal_survival_moves(after, self).empty()) return d;
        break;
      }
    }
  }

  Direction best = survival.front();
  int best_area = -1;
  for (Direction d : survival) {
    int area = detail::area_after_move(state, self, d);
    if (area > best_area) {
      best_area = area;
      best = d;
    }
  }
  return best;
}

namespace detail {

// Clockwise ring of an axis-aligned rectangle, top-left corner first. Both
// sides span at least two cells so the ring is a proper cycle.
inline std::vector<Cell> rectangle_perimeter(int x0, int y0, int x1, int y1) {
  std::vector<Cell> ring;
  for (int x = x0; x <= x1; ++x) ring.push_back({x, y0});
  for (int y = y0 + 1; y <= y1; ++y) ring.push_back({x1, y});
  for (int x = x1 - 1; x >= x0; --x) ring.push_back({x, y1});
  for (int y = y1 - 1; y >= y0 + 1; --y) ring.push_back({x0, y});
  return ring;
}

// Walks the snake around the ring, tail vacating each step, to confirm a
// full lap plus settling distance never collides with either body. The ring
// holds no apple, so the body never grows mid-lap.
inline bool orbit_walkable(const GameState& state, int self, const std::vector<Cell>& ring,
                           std::size_t start, int turn) {
  const Snake& snake = state.snakes[self];
  const Snake& opponent = state.snakes[1 - self];
  const int lap = static_cast<int>(ring.size());
  if (snake.length() > lap) return false;

  std::vector<Cell> body = snake.body;
  std::size_t pos = start;
  for (int i = 0; i < lap + snake.length(); ++i) {
    pos = (pos + ring.size() + turn) % ring.size();
    Cell next = ring[pos];
    if (contains(opponent.body, next)) return false;
    body.pop_back();
    if (contains(body, next)) return false;
    body.insert(body.begin(), next);
  }
  return true;
}

// Smallest safe rectangular ring through the head that seals the apple
// away: the apple sits strictly inside, or the ring covers one of its
// neighbors, without ever covering the apple itself. Preference order is
// ring length, then top-left corner row-major; per ring, the orientation
// not doubling back through the neck is tried first.
inline std::optional<Direction> find_orbit_move(const GameState& state, int self) {
  const Snake& snake = state.snakes[self];
  const Cell head = snake.head();
  const Cell apple = *state.apple.position;
  const Snake& opponent = state.snakes[1 - self];

  struct Candidate {
    int perimeter;
    int y0;
    int x0;
    int x1;
    int y1;
  };
  std::vector<Candidate> candidates;
  for (int x0 = head.x - 4; x0 <= head.x; ++x0) {
    for (int y0 = head.y - 4; y0 <= head.y; ++y0) {
      for (int x1 = std::max(x0 + 1, head.x); x1 <= x0 + 4; ++x1) {
        for (int y1 = std::max(y0 + 1, head.y); y1 <= y0 + 4; ++y1) {
          if (x0 < 0 || y0 < 0 || x1 >= state.width() || y1 >= state.height()) continue;
          bool head_on_ring = head.x == x0 || head.x == x1 || head.y == y0 || head.y == y1;
          if (!head_on_ring) continue;
          candidates.push_back({2 * (x1 - x0) + 2 * (y1 - y0), y0, x0, x1, y1});
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.perimeter != b.perimeter) return a.perimeter < b.perimeter;
    if (a.y0 != b.y0) return a.y0 < b.y0;
    return a.x0 < b.x0;
  });

  for (const Candidate& c : candidates) {
    bool apple_inside = apple.x > c.x0 && apple.x < c.x1 && apple.y > c.y0 && apple.y < c.y1;
    auto ring = rectangle_perimeter(c.x0, c.y0, c.x1, c.y1);
    if (contains(ring, apple)) continue;
    bool seals = apple_inside;
    for (Direction d : kDirectionOrder) {
      if (contains(ring, neighbor(apple, d))) seals = true;
    }
    if (!seals) continue;
    bool blocked = false;
    for (Cell cell : ring) {
      if (contains(opponent.body, cell)) blocked = true;
    }
    if (blocked) continue;

    std::size_t head_pos = 0;
    while (ring[head_pos] != head) ++head_pos;

    std::array<int, 2> turns{1, -1};
    if (snake.length() >= 2) {
      Cell neck = snake.body[1];
      if (ring[(head_pos + 1) % ring.size()] == neck) turns = {-1, 1};
    }
    for (int turn : turns) {
      if (orbit_walkable(state, self, ring, head_pos, turn)) {
        std::size_t next_pos = (head_pos + ring.size() + turn) % ring.size();
        Cell next = ring[next_pos];
        for (Direction d : kDirectionOrder) {
          if (neighbor(head, d) == next) return d;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

// When strictly ahead on score, stop racing: circle a safe ring that seals
// the apple off and let the clock run out. Any tick without both a strict
// lead and a standing apple and a walkable ring delegates to the wrapped
// policy.
inline Direction stall_guard_decide(const BotView& view,
                                    const std::function<Direction(const BotView&)>& wrapped) {
  const GameState& state = view.state;
  const int self = view.self_index;
  if (state.scores[self] <= state.scores[1 - self] || !state.apple.position.has_value()) {
    return wrapped(view);
  }
  if (auto orbit = detail::find_orbit_move(state, self)) return *orbit;
  return wrapped(view);
}

class RandomSafeBot final : public Bot {
 public:
  std::string_view name() const override { return "randomsafe"; }
  void reset(std::uint64_t seed) override {
    Bot::reset(seed);
    rng_ = Xoshiro256StarStar(seed);
  }
  Direction decide(const BotView& view) override { return random_safe_decide(view, rng_); }

 private:
  Xoshiro256StarStar rng_{0};
};

class GreedyBfsBot final : public Bot {
 public:
  std::string_view name() const override { return "greedy"; }
  Direction decide(const BotView& view) override { return greedy_bfs_decide(view); }
};

// Iterative-deepening alpha-beta under the per-move budget. An explicit
// depth cap (the alphabeta agent) stops deepening early; a node cap
// tightens logical budgets below the match default.
class TreeSearchBot final : public Bot {
 public:
  TreeSearchBot(std::string name, EvalWeights weights, int max_depth, std::uint64_t node_cap)
      : name_(std::move(name)), weights_(weights), max_depth_(max_depth), node_cap_(node_cap) {}

  std::string_view name() const override { return name_; }

  Direction decide(const BotView& view) override {
    stats_ = {};
    SearchBudget budget = node_cap_ > 0 ? view.budget.capped(node_cap_) : view.budget;
    return iterative_deepening(view.state, view.self_index, weights_, budget, max_depth_,
                               &stats_);
  }

 private:
  std::string name_;
  EvalWeights weights_;
  int max_depth_;
  std::uint64_t node_cap_;
};

class MctsBot final : public Bot {
 public:
  MctsBot(EvalWeights weights, std::uint64_t iteration_cap) {
    options_.weights = weights;
    if (iteration_cap > 0) options_.max_iterations = iteration_cap;
  }

  std::string_view name() const override { return "mcts"; }

  void reset(std::uint64_t seed) override {
    Bot::reset(seed);
    rng_ = Xoshiro256StarStar(seed);
  }

  Direction decide(const BotView& view) override {
    stats_ = {};
    SearchBudget budget = view.budget;
    return mcts_decide(view.state, view.self_index, budget, rng_, options_, &stats_);
  }

 private:
  MctsOptions options_;
  Xoshiro256StarStar rng_{0};
};

class StallGuardBot final : public Bot {
 public:
  explicit StallGuardBot(std::unique_ptr<Bot> inner)
      : inner_(std::move(inner)), name_(std::string(inner_->name()) + "+stall") {}

  std::string_view name() const override { return name_; }

  void reset(std::uint64_t seed) override {
    Bot::reset(seed);
    inner_->reset(seed);
  }

  Direction decide(const BotView& view) override {
    Direction move = stall_guard_decide(
        view, [this](const BotView& v) { return inner_->decide(v); });
    stats_ = inner_->last_stats();
    return move;
  }

 private:
  std::unique_ptr<Bot> inner_;
  std::string name_;
};

enum class AgentKind { RandomSafe, GreedyBFS, IDS, AlphaBeta, MCTS };

// Raised for any malformed agent spec: unrecognized kind, unrecognized
// option key, or an unparsable value.
struct UnknownKind : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AgentSpec {
  AgentKind kind = AgentKind::RandomSafe;
  std::string id;
  int depth = 0;              // 0 picks the kind's default
  std::uint64_t iterations = 0;
  std::uint64_t node_cap = 0;
  bool stall_guard = false;
  EvalWeights weights{};
};

inline std::vector<std::string_view> registered_agent_names() {
  return {"randomsafe", "greedy", "ids", "alphabeta", "mcts"};
}

namespace detail {

inline std::uint64_t parse_spec_uint(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
    throw UnknownKind("agent option '" + std::string(key) + "' needs a positive integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

inline double parse_spec_weight(std::string_view key, std::string_view text) {
  try {
    std::size_t used = 0;
    double value = std::stod(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw UnknownKind("agent option '" + std::string(key) + "' needs a number, got '" +
                      std::string(text) + "'");
  }
}

inline std::string format_weight(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

}  // namespace detail

// Parses `kind[:key=value,...]`. Keys: depth, iters, nodes, stall, wl, wa,
// wt. The id field is the spec rebuilt in canonical key order with defaults
// dropped, so equivalent spellings collapse to one participant identity.
inline AgentSpec parse_agent_spec(std::string_view text) {
  AgentSpec spec;
  std::string_view kind_name = text;
  std::string_view options;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    kind_name = text.substr(0, colon);
    options = text.substr(colon + 1);
  }

  if (kind_name == "randomsafe") {
    spec.kind = AgentKind::RandomSafe;
  } else if (kind_name == "greedy") {
    spec.kind = AgentKind::GreedyBFS;
  } else if (kind_name == "ids") {
    spec.kind = AgentKind::IDS;
  } else if (kind_name == "alphabeta") {
    spec.kind = AgentKind::AlphaBeta;
  } else if (kind_name == "mcts") {
    spec.kind = AgentKind::MCTS;
  } else {
    std::string known;
    for (auto name : registered_agent_names()) {
      if (!known.empty()) known += ", ";
      known += name;
    }
    throw UnknownKind("unknown agent kind '" + std::string(kind_name) + "' (known: " + known +
                      ")");
  }

  while (!options.empty()) {
    auto comma = options.find(',');
    std::string_view item = options.substr(0, comma);
    options = comma == std::string_view::npos ? std::string_view{} : options.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw UnknownKind("agent option '" + std::string(item) + "' is not key=value");
    }
    std::string_view key = item.substr(0, eq);
    std::string_view value = item.substr(eq + 1);
    if (key == "depth") {
      spec.depth = static_cast<int>(detail::parse_spec_uint(key, value));
    } else if (key == "iters") {
      spec.iterations = detail::parse_spec_uint(key, value);
    } else if (key == "nodes") {
      spec.node_cap = detail::parse_spec_uint(key, value);
    } else if (key == "stall") {
      if (value == "1") {
        spec.stall_guard = true;
      } else if (value == "0") {
        spec.stall_guard = false;
      } else {
        throw UnknownKind("agent option 'stall' must be 0 or 1, got '" + std::string(value) +
                          "'");
      }
    } else if (key == "wl") {
      spec.weights.length = detail::parse_spec_weight(key, value);
    } else if (key == "wa") {
      spec.weights.apple_distance = detail::parse_spec_weight(key, value);
    } else if (key == "wt") {
      spec.weights.territory = detail::parse_spec_weight(key, value);
    } else {
      throw UnknownKind("unknown agent option '" + std::string(key) + "'");
    }
  }

  const char* kind_text = "randomsafe";
  switch (spec.kind) {
    case AgentKind::RandomSafe: kind_text = "randomsafe"; break;
    case AgentKind::GreedyBFS: kind_text = "greedy"; break;
    case AgentKind::IDS: kind_text = "ids"; break;
    case AgentKind::AlphaBeta: kind_text = "alphabeta"; break;
    case AgentKind::MCTS: kind_text = "mcts"; break;
  }
  std::string id = kind_text;
  std::string sep = ":";
  EvalWeights defaults;
  auto append = [&](const std::string& piece) {
    id += sep + piece;
    sep = ",";
  };
  if (spec.depth > 0) append("depth=" + std::to_string(spec.depth));
  if (spec.iterations > 0) append("iters=" + std::to_string(spec.iterations));
  if (spec.node_cap > 0) append("nodes=" + std::to_string(spec.node_cap));
  if (spec.weights.length != defaults.length) {
    append("wl=" + detail::format_weight(spec.weights.length));
  }
  if (spec.weights.apple_distance != defaults.apple_distance) {
    append("wa=" + detail::format_weight(spec.weights.apple_distance));
  }
  if (spec.weights.territory != defaults.territory) {
    append("wt=" + detail::format_weight(spec.weights.territory));
  }
  if (spec.stall_guard) append("stall=1");
  spec.id = id;
  return spec;
}

// Splits a comma-separated agent list, keeping option commas attached to
// their spec: a segment without ':' but with '=' continues the previous
// spec's options.
inline std::vector<std::string> split_agent_list(std::string_view text) {
  std::vector<std::string> specs;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto comma = text.find(',', begin);
    std::string_view segment =
        text.substr(begin, comma == std::string_view::npos ? std::string_view::npos
                                                           : comma - begin);
    begin = comma == std::string_view::npos ? text.size() + 1 : comma + 1;
    if (segment.empty()) continue;
    bool continuation = segment.find(':') == std::string_view::npos &&
                        segment.find('=') != std::string_view::npos;
    if (continuation && !specs.empty()) {
      specs.back() += ',';
      specs.back() += segment;
    } else {
      specs.emplace_back(segment);
    }
  }
  return specs;
}

inline std::unique_ptr<Bot> make_agent(const AgentSpec& spec) {
  std::unique_ptr<Bot> bot;
  switch (spec.kind) {
    case AgentKind::RandomSafe:
      bot = std::make_unique<RandomSafeBot>();
      break;
    case AgentKind::GreedyBFS:
      bot = std::make_unique<GreedyBfsBot>();
      break;
    case AgentKind::IDS:
      bot = std::make_unique<TreeSearchBot>("ids", spec.weights,
                                            spec.depth > 0 ? spec.depth : 128, spec.node_cap);
      break;
    case AgentKind::AlphaBeta:
      bot = std::make_unique<TreeSearchBot>("alphabeta", spec.weights,
                                            spec.depth > 0 ? spec.depth : 6, spec.node_cap);
      break;
    case AgentKind::MCTS:
      bot = std::make_unique<MctsBot>(spec.weights, spec.iterations);
      break;
  }
  if (spec.stall_guard) bot = std::make_unique<StallGuardBot>(std::move(bot));
  return bot;
}

inline std::unique_ptr<Bot> make_agent(std::string_view spec_text) {
  return make_agent(parse_agent_spec(spec_text));
}

}  // namespace snakes
