#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "snakes/agents.hpp"
#include "snakes/engine.hpp"
#include "snakes/replay.hpp"
#include "snakes/rng.hpp"

namespace snakes {

struct Pairing {
  std::string white_id;
  std::string blue_id;
  int repeat_index = 0;
  std::uint64_t seed = 0;
};

struct DuplicateParticipant : std::runtime_error {
  explicit DuplicateParticipant(const std::string& id)
      : std::runtime_error("duplicate participant '" + id + "'") {}
};

// All-play-all schedule: every unordered pair meets once per repeat, the
// earlier-listed participant as white. Pairing seeds mix the base seed with
// the sorted identifiers and the repeat index, so a pairing's seeds do not
// shift when unrelated participants join the field.
inline std::vector<Pairing> schedule_round_robin(const std::vector<std::string>& participants,
                                                 int repeats, std::uint64_t base_seed) {
  if (participants.size() < 2) {
    throw InvalidConfig("round robin needs at least two participants");
  }
  if (repeats < 1) throw InvalidConfig("repeats must be at least 1");
  for (std::size_t i = 0; i < participants.size(); ++i) {
    for (std::size_t j = i + 1; j < participants.size(); ++j) {
      if (participants[i] == participants[j]) throw DuplicateParticipant(participants[i]);
    }
  }

  std::vector<Pairing> pairings;
  for (std::size_t i = 0; i < participants.size(); ++i) {
    for (std::size_t j = i + 1; j < participants.size(); ++j) {
      const std::string& lo = std::min(participants[i], participants[j]);
      const std::string& hi = std::max(participants[i], participants[j]);
      for (int k = 0; k < repeats; ++k) {
        std::uint64_t seed =
            mix_seed({base_seed, fnv1a(lo), fnv1a(hi), static_cast<std::uint64_t>(k)});
        pairings.push_back({participants[i], participants[j], k, seed});
      }
    }
  }
  return pairings;
}

struct TallyRow {
  int wins = 0;
  int draws = 0;
  int losses = 0;
  int games() const { return wins + draws + losses; }
  bool operator==(const TallyRow&) const = default;
};

struct Standings {
  std::map<std::string, TallyRow> rows;
  bool operator==(const Standings&) const = default;
};

// Final order: wins, then draws, then identifier as the last stable tie
// break.
inline std::vector<std::string> rank(const Standings& standings) {
  std::vector<std::string> order;
  order.reserve(standings.rows.size());
  for (const auto& [id, row] : standings.rows) order.push_back(id);
  std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    const TallyRow& ra = standings.rows.at(a);
    const TallyRow& rb = standings.rows.at(b);
    if (ra.wins != rb.wins) return ra.wins > rb.wins;
    if (ra.draws != rb.draws) return ra.draws > rb.draws;
    return a < b;
  });
  return order;
}

using TickObserver = std::function<void(const GameState& after, const TickRecord&)>;

namespace detail {

struct DecideOutcome {
  std::optional<Direction> move;
  bool panicked = false;
};

inline SearchBudget decision_budget(const MatchConfig& config) {
  if (config.clock_mode == ClockMode::Wall) {
    return SearchBudget::wall_from_now_ms(config.decision_budget_ms);
  }
  return SearchBudget::logical(static_cast<std::uint64_t>(config.decision_budget_nodes));
}

// One decision under the clock. Logical mode trusts the bot to respect the
// budget object; wall mode races the call against a deadline on a helper
// thread and abandons it on timeout. The shared_ptr keeps a timed-out bot
// alive until its stray call unwinds.
inline DecideOutcome ask_bot(const std::shared_ptr<Bot>& bot, BotView view,
                             const MatchConfig& config) {
  if (config.clock_mode == ClockMode::Logical) {
    try {
      return {bot->decide(view), false};
    } catch (...) {
      return {std::nullopt, true};
    }
  }

  auto task = std::make_shared<std::packaged_task<Direction()>>(
      [bot, view = std::move(view)]() mutable { return bot->decide(view); });
  std::future<Direction> future = task->get_future();
  std::thread([task] { (*task)(); }).detach();
  if (future.wait_for(std::chrono::milliseconds(config.decision_budget_ms)) !=
      std::future_status::ready) {
    return {std::nullopt, false};
  }
  try {
    return {future.get(), false};
  } catch (...) {
    return {std::nullopt, true};
  }
}

}  // namespace detail

// Plays one match to its end. Bots are reseeded from the match seed and
// their side before the first tick. A timed-out or crashing bot loses on
// the spot with cause timeout or forfeit; the engine decides everything
// else. Returns the outcome plus the full replay record sequence.
inline std::pair<MatchOutcome, std::vector<ReplayRecord>> run_match(
    const std::shared_ptr<Bot>& white, const std::shared_ptr<Bot>& blue,
    const MatchConfig& config, std::uint64_t seed, const std::string& white_name,
    const std::string& blue_name, const TickObserver& observer = {}) {
  GameState state = new_match(config, seed);
  const std::array<std::shared_ptr<Bot>, 2> bots{white, blue};
  bots[0]->reset(mix_seed({seed, fnv1a("white")}));
  bots[1]->reset(mix_seed({seed, fnv1a("blue")}));

  std::vector<ReplayRecord> records;
  HeaderRecord header;
  header.config = config;
  header.seed = seed;
  header.white_name = white_name;
  header.blue_name = blue_name;
  records.emplace_back(std::move(header));

  std::optional<MatchOutcome> runner_outcome;
  while (state.running() && !runner_outcome.has_value()) {
    std::array<Direction, 2> moves{};
    for (int i = 0; i < 2; ++i) {
      detail::DecideOutcome decided =
          detail::ask_bot(bots[i], BotView{state, i, detail::decision_budget(config)}, config);
      if (!decided.move.has_value()) {
        runner_outcome = MatchOutcome{
            win_for(1 - i), decided.panicked ? MatchCause::Forfeit : MatchCause::Timeout,
            state.scores};
        break;
      }
      moves[i] = *decided.move;
    }
    if (runner_outcome.has_value()) break;

    std::array<Cell, 2> heads{neighbor(state.snakes[0].head(), moves[0]),
                              neighbor(state.snakes[1].head(), moves[1])};
    StepOutcome out = step(state, moves[0], moves[1]);
    TickRecord tick{state.clock_ticks, moves[0], moves[1], heads, out.next.apple.position,
                    out.next.scores};
    records.emplace_back(tick);
    if (observer) observer(out.next, tick);
    state = std::move(out.next);
  }

  MatchOutcome outcome = runner_outcome.has_value() ? *runner_outcome : *state.outcome;
  records.emplace_back(TerminalRecord{outcome});
  return {outcome, std::move(records)};
}

struct MatchRecord {
  Pairing pairing;
  MatchOutcome outcome;
  std::vector<ReplayRecord> replay;
};

struct TournamentOptions {
  MatchConfig config{};
  int repeats = 3;
  std::uint64_t base_seed = 0;
  int parallelism = 1;
  std::filesystem::path out_dir;  // empty skips replay and standings files
};

struct TournamentResult {
  Standings standings;
  std::vector<MatchRecord> matches;
};

// Replay file name for one pairing; characters foreign to file names are
// folded to '-'.
inline std::string replay_file_name(const Pairing& pairing) {
  auto sanitize = [](const std::string& id) {
    std::string out;
    for (char c : id) {
      bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '.' || c == '_' || c == '-';
      out += keep ? c : '-';
    }
    return out;
  };
  return sanitize(pairing.white_id) + "_vs_" + sanitize(pairing.blue_id) + "_r" +
         std::to_string(pairing.repeat_index) + ".jsonl";
}

inline std::string standings_csv(const Standings& standings) {
  auto escape = [](const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
    return out;
  };
  std::string csv = "rank,participant,wins,draws,losses,games\n";
  std::vector<std::string> order = rank(standings);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const TallyRow& row = standings.rows.at(order[i]);
    csv += std::to_string(i + 1) + "," + escape(order[i]) + "," + std::to_string(row.wins) +
           "," + std::to_string(row.draws) + "," + std::to_string(row.losses) + "," +
           std::to_string(row.games()) + "\n";
  }
  return csv;
}

// Round-robin tournament over agent specs. Each match builds fresh bot
// instances from the specs, so matches are independent and the standings
// and replay bytes do not depend on worker count. Results aggregate in
// schedule order.
inline TournamentResult run_tournament(const std::vector<AgentSpec>& participants,
                                       const TournamentOptions& options) {
  std::vector<std::string> ids;
  std::map<std::string, const AgentSpec*> by_id;
  for (const AgentSpec& spec : participants) {
    if (!by_id.emplace(spec.id, &spec).second) throw DuplicateParticipant(spec.id);
    ids.push_back(spec.id);
  }
  std::vector<Pairing> pairings = schedule_round_robin(ids, options.repeats, options.base_seed);

  if (!options.out_dir.empty()) std::filesystem::create_directories(options.out_dir);

  std::vector<MatchRecord> matches(pairings.size());
  std::atomic<std::size_t> next_job{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      std::size_t job = next_job.fetch_add(1);
      if (job >= pairings.size()) return;
      try {
        const Pairing& pairing = pairings[job];
        std::shared_ptr<Bot> white = make_agent(*by_id.at(pairing.white_id));
        std::shared_ptr<Bot> blue = make_agent(*by_id.at(pairing.blue_id));
        auto [outcome, replay] = run_match(white, blue, options.config, pairing.seed,
                                           pairing.white_id, pairing.blue_id);
        if (!options.out_dir.empty()) {
          std::filesystem::path path = options.out_dir / replay_file_name(pairing);
          std::ofstream file(path, std::ios::binary | std::ios::trunc);
          file << write_replay(replay);
          if (!file) throw std::runtime_error("cannot write " + path.string());
        }
        matches[job] = MatchRecord{pairing, outcome, std::move(replay)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  int thread_count = std::max(1, options.parallelism);
  thread_count = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(thread_count), pairings.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  TournamentResult result;
  for (const std::string& id : ids) result.standings.rows[id];
  for (MatchRecord& match : matches) {
    TallyRow& white_row = result.standings.rows[match.pairing.white_id];
    TallyRow& blue_row = result.standings.rows[match.pairing.blue_id];
    switch (match.outcome.result) {
      case MatchResult::WhiteWins:
        ++white_row.wins;
        ++blue_row.losses;
        break;
      case MatchResult::BlueWins:
        ++blue_row.wins;
        ++white_row.losses;
        break;
      case MatchResult::Draw:
        ++white_row.draws;
        ++blue_row.draws;
        break;
    }
    result.matches.push_back(std::move(match));
  }

  if (!options.out_dir.empty()) {
    std::filesystem::path path = options.out_dir / "standings.csv";
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << standings_csv(result.standings);
    if (!file) throw std::runtime_error("cannot write " + path.string());
  }
  return result;
}

}  // namespace snakes
