#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "snakes/agents.hpp"
#include "snakes/replay.hpp"
#include "snakes/tournament.hpp"
#include "support/builders.hpp"

using namespace snakes;
using snakes::test::CrashBot;
using snakes::test::LoopBot;
using snakes::test::small_config;

namespace {

std::shared_ptr<Bot> white_looper() {
  return std::make_shared<LoopBot>(std::vector<Direction>{
      Direction::East, Direction::South, Direction::West, Direction::North});
}

std::shared_ptr<Bot> blue_looper() {
  return std::make_shared<LoopBot>(std::vector<Direction>{
      Direction::West, Direction::North, Direction::East, Direction::South});
}

// Seed whose opening apple sits outside both 2x2 loops and any extra cells
// a scripted walk will cross, so nobody grows and nothing relocates.
std::uint64_t quiet_loop_seed(const MatchConfig& config,
                              std::set<std::pair<int, int>> avoid = {}) {
  avoid.insert({{3, 3}, {3, 4}, {2, 4}, {2, 3}, {5, 5}, {5, 4}, {6, 4}, {6, 5}});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GameState state = new_match(config, seed);
    auto apple = *state.apple.position;
    if (!avoid.count({apple.x, apple.y})) return seed;
  }
  FAIL("no quiet seed in range");
  return 0;
}

// Twelve clock-limited ticks between the loopers: header, ticks 0..11, and
// a time-limit terminal, fourteen records in all.
std::vector<ReplayRecord> looper_records() {
  MatchConfig config = small_config(9, 9, 3, 12);
  auto [outcome, records] =
      run_match(white_looper(), blue_looper(), config, quiet_loop_seed(config), "white", "blue");
  REQUIRE(outcome.cause == MatchCause::TimeLimit);
  REQUIRE(records.size() == 14);
  return records;
}

int parse_error_line(const std::string& text) {
  try {
    read_replay(text);
  } catch (const ParseError& e) {
    return e.line;
  }
  FAIL("expected a parse error");
  return -1;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t begin = 0;
  while (begin < text.size()) {
    auto end = text.find('\n', begin);
    lines.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& line : lines) {
    text += line;
    text += '\n';
  }
  return text;
}

Direction rotated(Direction d) {
  switch (d) {
    case Direction::North: return Direction::East;
    case Direction::East: return Direction::South;
    case Direction::South: return Direction::West;
    case Direction::West: return Direction::North;
  }
  return Direction::North;
}

}  // namespace

TEST_CASE("a short match round-trips through text byte for byte", "[replay]") {
  auto records = looper_records();
  std::string text = write_replay(records);

  auto lines = lines_of(text);
  REQUIRE(lines.size() == records.size());
  CHECK(text.back() == '\n');

  auto reread = read_replay(text);
  REQUIRE(reread.size() == records.size());
  CHECK(write_replay(reread) == text);

  const auto& header = std::get<HeaderRecord>(reread.front());
  CHECK(header.version == kReplayVersion);
  CHECK(header.white_name == "white");
  CHECK(header.blue_name == "blue");
  CHECK(header.config == small_config(9, 9, 3, 12));

  const auto& first = std::get<TickRecord>(reread[1]);
  const auto& original = std::get<TickRecord>(records[1]);
  CHECK(first.tick == 0);
  CHECK(first.white_move == original.white_move);
  CHECK(first.heads == original.heads);
  CHECK(first.apple == original.apple);
  CHECK(first.scores == original.scores);

  const auto& terminal = std::get<TerminalRecord>(reread.back());
  CHECK(terminal.outcome.result == MatchResult::Draw);
  CHECK(terminal.outcome.cause == MatchCause::TimeLimit);
}

TEST_CASE("a zero-tick match still writes and reads", "[replay]") {
  MatchConfig config = small_config(9, 9);
  auto [outcome, records] = run_match(std::make_shared<CrashBot>(), blue_looper(), config, 7,
                                      "crasher", "blue");
  REQUIRE(outcome.cause == MatchCause::Forfeit);
  REQUIRE(records.size() == 2);

  std::string text = write_replay(records);
  auto reread = read_replay(text);
  REQUIRE(reread.size() == 2);
  CHECK(write_replay(reread) == text);
  CHECK(std::get<TerminalRecord>(reread.back()).outcome == outcome);
}

TEST_CASE("the writer refuses malformed record sequences", "[replay]") {
  auto records = looper_records();
  const auto& header = std::get<HeaderRecord>(records.front());
  const auto& tick0 = std::get<TickRecord>(records[1]);
  const auto& terminal = std::get<TerminalRecord>(records.back());

  CHECK_THROWS_AS(write_replay(std::vector<ReplayRecord>{}), InvariantViolation);
  CHECK_THROWS_AS(write_replay(std::vector<ReplayRecord>{tick0, terminal}), InvariantViolation);
  CHECK_THROWS_AS(write_replay(std::vector<ReplayRecord>{header, tick0}), InvariantViolation);
  CHECK_THROWS_AS(write_replay(std::vector<ReplayRecord>{header}), InvariantViolation);
  CHECK_THROWS_AS(write_replay(std::vector<ReplayRecord>{header, terminal, terminal, terminal}),
                  InvariantViolation);

  auto gap = records;
  std::get<TickRecord>(gap[3]).tick = 5;
  CHECK_THROWS_AS(write_replay(gap), InvariantViolation);
}

TEST_CASE("the reader pins structural damage to a line number", "[replay]") {
  auto records = looper_records();
  std::string text = write_replay(records);
  auto lines = lines_of(text);
  const int line_count = static_cast<int>(lines.size());

  SECTION("empty input") {
    CHECK(parse_error_line("") == 1);
  }

  SECTION("truncation loses the terminal") {
    auto cut = lines;
    cut.pop_back();
    CHECK(parse_error_line(join_lines(cut)) == line_count);
    cut.pop_back();
    CHECK(parse_error_line(join_lines(cut)) == line_count - 1);
  }

  SECTION("a missing final newline still parses") {
    std::string clipped = text.substr(0, text.size() - 1);
    CHECK(write_replay(read_replay(clipped)) == text);
  }

  SECTION("blank interior line") {
    auto padded = lines;
    padded.insert(padded.begin() + 1, "");
    CHECK(parse_error_line(join_lines(padded)) == 2);
  }

  SECTION("garbage line") {
    auto garbled = lines;
    garbled[4] = "not json at all";
    CHECK(parse_error_line(join_lines(garbled)) == 5);
  }

  SECTION("records after the terminal") {
    auto extended = lines;
    extended.push_back(lines[2]);
    CHECK(parse_error_line(join_lines(extended)) == line_count + 1);
  }

  SECTION("tick line first") {
    auto swapped = lines;
    std::swap(swapped[0], swapped[1]);
    CHECK(parse_error_line(join_lines(swapped)) == 1);
  }

  SECTION("unknown record type") {
    auto foreign = lines;
    foreign[3] = R"({"type":"banana"})";
    CHECK(parse_error_line(join_lines(foreign)) == 4);
  }

  SECTION("unknown direction name") {
    auto bent = lines;
    auto at = bent[2].find("\"white\":\"");
    REQUIRE(at != std::string::npos);
    bent[2][at + 9] = 'Q';
    CHECK(parse_error_line(join_lines(bent)) == 3);
  }

  SECTION("renumbered tick") {
    auto shifted = lines;
    auto j = nlohmann::ordered_json::parse(shifted[5]);
    j["t"] = 9;
    shifted[5] = j.dump();
    CHECK(parse_error_line(join_lines(shifted)) == line_count);
  }
}

TEST_CASE("foreign version strings are refused", "[replay]") {
  auto records = looper_records();
  std::get<HeaderRecord>(records.front()).version = "snakes-replay/2";
  std::string text = write_replay(records);
  CHECK_THROWS_MATCHES(read_replay(text), VersionMismatch,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("snakes-replay/2")));
}

TEST_CASE("genuine logs verify clean", "[replay]") {
  SECTION("clock-limited looper match") {
    CHECK(verify_replay(looper_records()).valid());
  }

  SECTION("apple-chasing match with eaten apples") {
    MatchConfig config = small_config(9, 9, 3, 80);
    std::shared_ptr<Bot> white = make_agent("greedy");
    std::shared_ptr<Bot> blue = make_agent("greedy");
    auto [outcome, records] = run_match(white, blue, config, 8, "greedy", "greedy");
    bool someone_scored = outcome.final_scores[0] + outcome.final_scores[1] > 0;
    CHECK(someone_scored);
    CHECK(verify_replay(records).valid());
    CHECK(verify_replay(read_replay(write_replay(records))).valid());
  }

  SECTION("forfeit before the first tick") {
    MatchConfig config = small_config(9, 9);
    auto [outcome, records] = run_match(std::make_shared<CrashBot>(), blue_looper(), config, 7,
                                        "crasher", "blue");
    REQUIRE(outcome.cause == MatchCause::Forfeit);
    CHECK(verify_replay(records).valid());
  }
}

TEST_CASE("every tampered tick field is caught at its tick", "[replay]") {
  auto records = looper_records();
  const int tick_count = static_cast<int>(records.size()) - 2;
  REQUIRE(verify_replay(records).valid());

  auto expect_divergence = [&](int t, auto mutate) {
    auto tampered = records;
    mutate(std::get<TickRecord>(tampered[t + 1]));
    Verdict verdict = verify_replay(tampered);
    REQUIRE_FALSE(verdict.valid());
    CHECK(*verdict.diverged_at == t);
  };

  for (int t = 0; t < tick_count; ++t) {
    CAPTURE(t);
    expect_divergence(t, [](TickRecord& tick) { tick.white_move = rotated(tick.white_move); });
    expect_divergence(t, [](TickRecord& tick) { tick.blue_move = rotated(tick.blue_move); });
    expect_divergence(t, [](TickRecord& tick) { ++tick.heads[0].x; });
    expect_divergence(t, [](TickRecord& tick) { --tick.heads[1].y; });
    expect_divergence(t, [](TickRecord& tick) { ++tick.apple->x; });
    expect_divergence(t, [](TickRecord& tick) { tick.apple.reset(); });
    expect_divergence(t, [](TickRecord& tick) { ++tick.scores[0]; });
    expect_divergence(t, [](TickRecord& tick) { --tick.scores[1]; });
  }
}

TEST_CASE("tampered terminal lines are caught at the tick count", "[replay]") {
  auto records = looper_records();
  const int tick_count = static_cast<int>(records.size()) - 2;

  auto expect_divergence = [&](auto mutate) {
    auto tampered = records;
    mutate(std::get<TerminalRecord>(tampered.back()).outcome);
    Verdict verdict = verify_replay(tampered);
    REQUIRE_FALSE(verdict.valid());
    CHECK(*verdict.diverged_at == tick_count);
  };

  expect_divergence([](MatchOutcome& outcome) { outcome.result = MatchResult::WhiteWins; });
  expect_divergence([](MatchOutcome& outcome) { outcome.cause = MatchCause::OffBoard; });
  expect_divergence([](MatchOutcome& outcome) { ++outcome.final_scores[0]; });

  // A forfeit claim is only believed while the engine side is still alive,
  // so stamping it over a finished match reads as tampering.
  expect_divergence([](MatchOutcome& outcome) { outcome.cause = MatchCause::Forfeit; });

  SECTION("forfeit terminal with doctored scores") {
    MatchConfig config = small_config(9, 9);
    auto [outcome, records] = run_match(std::make_shared<CrashBot>(), blue_looper(), config, 7,
                                        "crasher", "blue");
    REQUIRE(outcome.cause == MatchCause::Forfeit);
    ++std::get<TerminalRecord>(records.back()).outcome.final_scores[1];
    Verdict verdict = verify_replay(records);
    REQUIRE_FALSE(verdict.valid());
    CHECK(*verdict.diverged_at == 0);
  }
}

TEST_CASE("ticks appended past the real ending are caught", "[replay]") {
  MatchConfig config = small_config(9, 9, 3, 12);

  // Blue marches straight down and leaves the board on tick 3. The quiet
  // seed keeps the apple off its path so the walk never changes.
  std::uint64_t seed = quiet_loop_seed(config, {{6, 6}, {6, 7}, {6, 8}});
  std::shared_ptr<Bot> blue =
      std::make_shared<LoopBot>(std::vector<Direction>{Direction::South});
  auto [outcome, records] = run_match(white_looper(), blue, config, seed, "white", "blue");
  REQUIRE(outcome.result == MatchResult::WhiteWins);
  REQUIRE(outcome.cause == MatchCause::OffBoard);
  REQUIRE(records.size() == 6);
  const int tick_count = static_cast<int>(records.size()) - 2;

  TickRecord ghost = std::get<TickRecord>(records[tick_count]);
  ghost.tick = tick_count;
  records.insert(records.end() - 1, ghost);
  Verdict verdict = verify_replay(records);
  REQUIRE_FALSE(verdict.valid());
  CHECK(*verdict.diverged_at == tick_count);
}

TEST_CASE("an unplayable header invalidates the log at tick zero", "[replay]") {
  HeaderRecord header;
  header.config = small_config(9, 9);
  header.config.width = 3;
  header.white_name = "white";
  header.blue_name = "blue";
  TerminalRecord terminal;
  terminal.outcome = {MatchResult::Draw, MatchCause::TimeLimit, {0, 0}};

  std::vector<ReplayRecord> records{header, terminal};
  Verdict verdict = verify_replay(records);
  REQUIRE_FALSE(verdict.valid());
  CHECK(*verdict.diverged_at == 0);
}
