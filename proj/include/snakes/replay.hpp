#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "snakes/engine.hpp"

namespace snakes {

inline constexpr std::string_view kReplayVersion = "snakes-replay/1";
inline constexpr std::string_view kReplayRngTag = "splitmix64/xoshiro256**";

// One match serializes as line-delimited JSON: a header line, one line per
// tick, and a terminal line. Heads are the cells the heads moved onto this
// tick, recorded even for a losing move, so they may sit off the board;
// apple and scores are the post-tick values.
struct HeaderRecord {
  std::string version = std::string(kReplayVersion);
  MatchConfig config;
  std::uint64_t seed = 0;
  std::string white_name;
  std::string blue_name;
};

struct TickRecord {
  int tick = 0;
  Direction white_move = Direction::North;
  Direction blue_move = Direction::North;
  std::array<Cell, 2> heads{};
  std::optional<Cell> apple;
  std::array<int, 2> scores{};
};

struct TerminalRecord {
  MatchOutcome outcome;
};

using ReplayRecord = std::variant<HeaderRecord, TickRecord, TerminalRecord>;

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_number, const std::string& what)
      : std::runtime_error("replay line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
};

struct VersionMismatch : std::runtime_error {
  explicit VersionMismatch(const std::string& found)
      : std::runtime_error("unsupported replay version '" + found + "', expected '" +
                           std::string(kReplayVersion) + "'") {}
};

// Replay verdict: valid, or the first tick whose re-simulation disagrees
// with the log. A terminal-line disagreement reports the tick count.
struct Verdict {
  std::optional<int> diverged_at;
  bool valid() const { return !diverged_at.has_value(); }
};

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json cell_json(Cell c) { return ordered_json::array({c.x, c.y}); }

inline Cell cell_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw std::runtime_error("cell must be an [x, y] integer pair");
  }
  return Cell{j[0].get<int>(), j[1].get<int>()};
}

inline Direction direction_from_json(const ordered_json& j) {
  std::string text = j.get<std::string>();
  for (Direction d : kDirectionOrder) {
    if (text == direction_name(d)) return d;
  }
  throw std::runtime_error("unknown direction '" + text + "'");
}

inline MatchResult result_from_name(const std::string& text) {
  for (MatchResult r : {MatchResult::WhiteWins, MatchResult::BlueWins, MatchResult::Draw}) {
    if (text == result_name(r)) return r;
  }
  throw std::runtime_error("unknown result '" + text + "'");
}

inline MatchCause cause_from_name(const std::string& text) {
  for (MatchCause c :
       {MatchCause::OffBoard, MatchCause::SelfCollision, MatchCause::OpponentCollision,
        MatchCause::HeadToHead, MatchCause::Timeout, MatchCause::TimeLimit,
        MatchCause::SimultaneousLoss, MatchCause::Forfeit}) {
    if (text == cause_name(c)) return c;
  }
  throw std::runtime_error("unknown cause '" + text + "'");
}

inline ClockMode clock_from_name(const std::string& text) {
  for (ClockMode m : {ClockMode::Wall, ClockMode::Logical}) {
    if (text == clock_mode_name(m)) return m;
  }
  throw std::runtime_error("unknown clock mode '" + text + "'");
}

inline ordered_json record_json(const HeaderRecord& header) {
  ordered_json config;
  config["width"] = header.config.width;
  config["height"] = header.config.height;
  config["initial_length"] = header.config.initial_length;
  config["clock"] = clock_mode_name(header.config.clock_mode);
  config["match_limit_ticks"] = header.config.match_limit_ticks;
  config["decision_budget_ms"] = header.config.decision_budget_ms;
  config["decision_budget_nodes"] = header.config.decision_budget_nodes;
  config["apple_ttl_ticks"] = header.config.apple_ttl_ticks;

  ordered_json j;
  j["type"] = "header";
  j["version"] = header.version;
  j["white"] = header.white_name;
  j["blue"] = header.blue_name;
  j["seed"] = header.seed;
  j["rng"] = kReplayRngTag;
  j["config"] = std::move(config);
  return j;
}

inline ordered_json record_json(const TickRecord& tick) {
  ordered_json j;
  j["type"] = "tick";
  j["t"] = tick.tick;
  j["white"] = direction_name(tick.white_move);
  j["blue"] = direction_name(tick.blue_move);
  j["heads"] = ordered_json::array({cell_json(tick.heads[0]), cell_json(tick.heads[1])});
  j["apple"] = tick.apple.has_value() ? cell_json(*tick.apple) : ordered_json(nullptr);
  j["scores"] = ordered_json::array({tick.scores[0], tick.scores[1]});
  return j;
}

inline ordered_json record_json(const TerminalRecord& terminal) {
  ordered_json j;
  j["type"] = "terminal";
  j["result"] = result_name(terminal.outcome.result);
  j["cause"] = cause_name(terminal.outcome.cause);
  j["scores"] =
      ordered_json::array({terminal.outcome.final_scores[0], terminal.outcome.final_scores[1]});
  return j;
}

inline std::array<int, 2> scores_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw std::runtime_error("scores must be a two-integer array");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

// Header line, dense ticks, one trailing terminal line, nothing else.
inline void check_replay_structure(std::span<const ReplayRecord> records) {
  if (records.empty() || !std::holds_alternative<HeaderRecord>(records.front())) {
    throw InvariantViolation("replay must start with a header record");
  }
  if (records.size() < 2 || !std::holds_alternative<TerminalRecord>(records.back())) {
    throw InvariantViolation("replay must end with a terminal record");
  }
  for (std::size_t i = 1; i + 1 < records.size(); ++i) {
    const auto* tick = std::get_if<TickRecord>(&records[i]);
    if (tick == nullptr) {
      throw InvariantViolation("replay interior must be tick records");
    }
    if (tick->tick != static_cast<int>(i) - 1) {
      throw InvariantViolation("tick records must count up from 0 without gaps");
    }
  }
}

}  // namespace detail

// Renders records to line-delimited JSON with a fixed key order, one record
// per line. Throws InvariantViolation on a malformed record sequence.
inline std::string write_replay(std::span<const ReplayRecord> records) {
  detail::check_replay_structure(records);
  std::string out;
  for (const ReplayRecord& record : records) {
    detail::ordered_json j =
        std::visit([](const auto& r) { return detail::record_json(r); }, record);
    out += j.dump();
    out += '\n';
  }
  return out;
}

// Parses line-delimited JSON back into records, enforcing the same shape
// write_replay emits. Structural problems raise ParseError with a 1-based
// line number; a foreign version string raises VersionMismatch.
inline std::vector<ReplayRecord> read_replay(std::string_view text) {
  std::vector<ReplayRecord> records;
  int line_number = 0;
  std::size_t begin = 0;
  bool saw_terminal = false;
  while (begin < text.size()) {
    auto newline = text.find('\n', begin);
    std::string_view line = text.substr(
        begin, newline == std::string_view::npos ? std::string_view::npos : newline - begin);
    begin = newline == std::string_view::npos ? text.size() : newline + 1;
    ++line_number;
    if (line.empty()) {
      if (begin >= text.size()) break;
      throw ParseError(line_number, "blank line inside replay");
    }
    if (saw_terminal) throw ParseError(line_number, "records after the terminal line");

    detail::ordered_json j;
    try {
      j = detail::ordered_json::parse(line);
    } catch (const detail::ordered_json::exception& e) {
      throw ParseError(line_number, e.what());
    }

    try {
      if (!j.is_object()) throw std::runtime_error("record must be a JSON object");
      std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (line_number != 1) throw std::runtime_error("header allowed only on line 1");
        HeaderRecord header;
        header.version = j.at("version").get<std::string>();
        if (header.version != kReplayVersion) throw VersionMismatch(header.version);
        header.white_name = j.at("white").get<std::string>();
        header.blue_name = j.at("blue").get<std::string>();
        header.seed = j.at("seed").get<std::uint64_t>();
        const auto& config = j.at("config");
        header.config.width = config.at("width").get<int>();
        header.config.height = config.at("height").get<int>();
        header.config.initial_length = config.at("initial_length").get<int>();
        header.config.clock_mode = detail::clock_from_name(config.at("clock").get<std::string>());
        header.config.match_limit_ticks = config.at("match_limit_ticks").get<int>();
        header.config.decision_budget_ms = config.at("decision_budget_ms").get<int>();
        header.config.decision_budget_nodes = config.at("decision_budget_nodes").get<int>();
        header.config.apple_ttl_ticks = config.at("apple_ttl_ticks").get<int>();
        records.emplace_back(std::move(header));
      } else if (type == "tick") {
        if (line_number == 1) throw std::runtime_error("replay must start with a header");
        TickRecord tick;
        tick.tick = j.at("t").get<int>();
        tick.white_move = detail::direction_from_json(j.at("white"));
        tick.blue_move = detail::direction_from_json(j.at("blue"));
        const auto& heads = j.at("heads");
        if (!heads.is_array() || heads.size() != 2) {
          throw std::runtime_error("heads must hold two cells");
        }
        tick.heads = {detail::cell_from_json(heads[0]), detail::cell_from_json(heads[1])};
        const auto& apple = j.at("apple");
        if (!apple.is_null()) tick.apple = detail::cell_from_json(apple);
        tick.scores = detail::scores_from_json(j.at("scores"));
        records.emplace_back(tick);
      } else if (type == "terminal") {
        if (line_number == 1) throw std::runtime_error("replay must start with a header");
        TerminalRecord terminal;
        terminal.outcome.result = detail::result_from_name(j.at("result").get<std::string>());
        terminal.outcome.cause = detail::cause_from_name(j.at("cause").get<std::string>());
        terminal.outcome.final_scores = detail::scores_from_json(j.at("scores"));
        records.emplace_back(terminal);
        saw_terminal = true;
      } else {
        throw std::runtime_error("unknown record type '" + type + "'");
      }
    } catch (const VersionMismatch&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line_number, e.what());
    }
  }
  if (records.empty()) throw ParseError(1, "empty replay");
  if (!saw_terminal) throw ParseError(line_number + 1, "missing terminal record");

  try {
    detail::check_replay_structure(records);
  } catch (const InvariantViolation& e) {
    throw ParseError(line_number, e.what());
  }
  return records;
}

// Re-simulates the match from the header's config and seed, applying the
// logged moves, and compares every logged head, apple, and score plus the
// terminal line against the engine. Timeout and forfeit terminals are
// runner decisions the engine cannot reproduce; they are accepted whenever
// the engine side is still running with matching scores.
inline Verdict verify_replay(std::span<const ReplayRecord> records) {
  detail::check_replay_structure(records);
  const auto& header = std::get<HeaderRecord>(records.front());
  const int tick_count = static_cast<int>(records.size()) - 2;

  GameState state;
  try {
    state = new_match(header.config, header.seed);
  } catch (const InvalidConfig&) {
    return Verdict{0};
  }

  for (int t = 0; t < tick_count; ++t) {
    const auto& tick = std::get<TickRecord>(records[t + 1]);
    if (!state.running()) return Verdict{t};
    std::array<Cell, 2> expected_heads{
        neighbor(state.snakes[0].head(), tick.white_move),
        neighbor(state.snakes[1].head(), tick.blue_move)};
    state = step(state, tick.white_move, tick.blue_move).next;
    if (tick.heads != expected_heads || tick.apple != state.apple.position ||
        tick.scores != state.scores) {
      return Verdict{t};
    }
  }

  const auto& terminal = std::get<TerminalRecord>(records.back());
  const MatchOutcome& logged = terminal.outcome;
  if (logged.cause == MatchCause::Timeout || logged.cause == MatchCause::Forfeit) {
    if (!state.running() || logged.final_scores != state.scores) return Verdict{tick_count};
    return Verdict{};
  }
  if (!state.outcome.has_value() || !(*state.outcome == logged)) return Verdict{tick_count};
  return Verdict{};
}

}  // namespace snakes
