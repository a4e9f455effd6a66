#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "snakes/snakes.hpp"

namespace {

constexpr int kUsageError = 2;

struct ConfigFlags {
  std::string board = "15x15";
  int length = 3;
  std::uint64_t seed = 0;
  std::string clock = "logical";
  int ticks = 1800;
  int budget_ms = 1000;
  int budget_nodes = 20000;
  int apple_ttl = 100;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--board", flags.board, "Board size as WIDTHxHEIGHT")
      ->capture_default_str();
  cmd->add_option("--length", flags.length, "Initial snake length")->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Base RNG seed")
      ->envname("SNAKES_SEED")
      ->capture_default_str();
  cmd->add_option("--clock", flags.clock, "Decision clock: wall or logical")
      ->check(CLI::IsMember({"wall", "logical"}))
      ->capture_default_str();
  cmd->add_option("--ticks", flags.ticks, "Match length limit in ticks")->capture_default_str();
  cmd->add_option("--budget-ms", flags.budget_ms, "Per-move budget in wall mode, milliseconds")
      ->capture_default_str();
  cmd->add_option("--budget-nodes", flags.budget_nodes,
                  "Per-move budget in logical mode, search units")
      ->capture_default_str();
  cmd->add_option("--apple-ttl", flags.apple_ttl, "Ticks before an uneaten apple relocates")
      ->capture_default_str();
}

snakes::MatchConfig build_config(const ConfigFlags& flags) {
  snakes::MatchConfig config;
  auto x = flags.board.find('x');
  if (x == std::string::npos) {
    throw snakes::InvalidConfig("--board must look like 15x15, got '" + flags.board + "'");
  }
  try {
    config.width = std::stoi(flags.board.substr(0, x));
    config.height = std::stoi(flags.board.substr(x + 1));
  } catch (const std::exception&) {
    throw snakes::InvalidConfig("--board must look like 15x15, got '" + flags.board + "'");
  }
  config.initial_length = flags.length;
  config.clock_mode =
      flags.clock == "wall" ? snakes::ClockMode::Wall : snakes::ClockMode::Logical;
  config.match_limit_ticks = flags.ticks;
  config.decision_budget_ms = flags.budget_ms;
  config.decision_budget_nodes = flags.budget_nodes;
  config.apple_ttl_ticks = flags.apple_ttl;
  return config;
}

std::string sanitize_for_file(const std::string& id) {
  std::string out;
  for (char c : id) {
    bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                c == '.' || c == '_' || c == '-';
    out += keep ? c : '-';
  }
  return out;
}

std::string cell_text(const snakes::Cell& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

int run_match_command(const ConfigFlags& flags, const std::string& white_text,
                      const std::string& blue_text, const std::string& out_dir, bool trace) {
  snakes::MatchConfig config = build_config(flags);
  snakes::AgentSpec white_spec = snakes::parse_agent_spec(white_text);
  snakes::AgentSpec blue_spec = snakes::parse_agent_spec(blue_text);
  std::shared_ptr<snakes::Bot> white = snakes::make_agent(white_spec);
  std::shared_ptr<snakes::Bot> blue = snakes::make_agent(blue_spec);

  snakes::TickObserver observer;
  if (trace) {
    observer = [](const snakes::GameState& after, const snakes::TickRecord& tick) {
      std::cout << "[" << tick.tick << "] white=" << snakes::direction_name(tick.white_move)
                << " blue=" << snakes::direction_name(tick.blue_move)
                << " heads=" << cell_text(tick.heads[0]) << "/" << cell_text(tick.heads[1])
                << " apple=" << (tick.apple ? cell_text(*tick.apple) : std::string("none"))
                << " scores=" << tick.scores[0] << "-" << tick.scores[1]
                << (after.running() ? "" : " final") << "\n";
    };
  }

  auto [outcome, replay] =
      snakes::run_match(white, blue, config, flags.seed, white_spec.id, blue_spec.id, observer);

  std::filesystem::path dir = out_dir;
  std::filesystem::create_directories(dir);
  std::filesystem::path path =
      dir / (sanitize_for_file(white_spec.id) + "_vs_" + sanitize_for_file(blue_spec.id) + "_s" +
             std::to_string(flags.seed) + ".jsonl");
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << snakes::write_replay(replay);
  if (!file) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    return kUsageError;
  }

  std::cout << "result=" << snakes::result_name(outcome.result)
            << " cause=" << snakes::cause_name(outcome.cause)
            << " scores=" << outcome.final_scores[0] << "-" << outcome.final_scores[1]
            << " ticks=" << replay.size() - 2 << " replay=" << path.string() << "\n";
  return 0;
}

int run_tournament_command(const ConfigFlags& flags, const std::vector<std::string>& agent_args,
                           int repeats, int parallel, const std::string& out_dir) {
  std::vector<snakes::AgentSpec> specs;
  for (const std::string& arg : agent_args) {
    for (const std::string& item : snakes::split_agent_list(arg)) {
      specs.push_back(snakes::parse_agent_spec(item));
    }
  }
  if (specs.size() < 2) {
    std::cerr << "error: --agents needs at least two agent specs\n";
    return kUsageError;
  }

  snakes::TournamentOptions options;
  options.config = build_config(flags);
  options.repeats = repeats;
  options.base_seed = flags.seed;
  options.parallelism = parallel;
  options.out_dir = out_dir;

  snakes::TournamentResult result = snakes::run_tournament(specs, options);

  std::cout << "played " << result.matches.size() << " matches, replays in " << out_dir << "\n";
  std::vector<std::string> order = snakes::rank(result.standings);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const snakes::TallyRow& row = result.standings.rows.at(order[i]);
    std::cout << i + 1 << ". " << order[i] << " wins=" << row.wins << " draws=" << row.draws
              << " losses=" << row.losses << " games=" << row.games() << "\n";
  }
  std::cout << "standings=" << (std::filesystem::path(out_dir) / "standings.csv").string()
            << "\n";
  return 0;
}

int run_verify_command(const std::vector<std::string>& paths) {
  std::vector<std::filesystem::path> files;
  for (const std::string& arg : paths) {
    std::filesystem::path path = arg;
    if (std::filesystem::is_directory(path)) {
      std::vector<std::filesystem::path> found;
      for (const auto& entry : std::filesystem::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (std::filesystem::is_regular_file(path)) {
      files.push_back(path);
    } else {
      std::cerr << "error: no such file or directory: " << arg << "\n";
      return kUsageError;
    }
  }
  if (files.empty()) {
    std::cerr << "error: nothing to verify\n";
    return kUsageError;
  }

  int valid = 0;
  int invalid = 0;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in) {
      std::cerr << "error: cannot read " << file.string() << "\n";
      return kUsageError;
    }
    try {
      auto records = snakes::read_replay(buffer.str());
      snakes::Verdict verdict = snakes::verify_replay(records);
      if (verdict.valid()) {
        std::cout << file.string() << ": valid\n";
        ++valid;
      } else {
        std::cout << file.string() << ": diverges at tick " << *verdict.diverged_at << "\n";
        ++invalid;
      }
    } catch (const snakes::VersionMismatch& e) {
      std::cout << file.string() << ": " << e.what() << "\n";
      ++invalid;
    } catch (const snakes::ParseError& e) {
      std::cout << file.string() << ": parse error: " << e.what() << "\n";
      ++invalid;
    }
  }
  if (files.size() > 1) {
    std::cout << "verified " << files.size() << " replays: " << valid << " valid, " << invalid
              << " invalid\n";
  }
  return invalid == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic two-snake match engine, tournament runner, and replay verifier"};
  app.require_subcommand(1);

  ConfigFlags match_flags;
  std::string white_text;
  std::string blue_text;
  std::string match_out = "replays";
  bool trace = false;
  CLI::App* match_cmd = app.add_subcommand("match", "Play a single match between two agents");
  match_cmd->add_option("--white", white_text, "Agent spec for white")->required();
  match_cmd->add_option("--blue", blue_text, "Agent spec for blue")->required();
  add_config_flags(match_cmd, match_flags);
  match_cmd->add_option("--out", match_out, "Directory for the replay file")
      ->capture_default_str();
  match_cmd->add_flag("--trace", trace, "Print one line per tick");

  ConfigFlags tournament_flags;
  std::vector<std::string> agent_args;
  int repeats = 3;
  int parallel = 1;
  std::string tournament_out = "tournament";
  CLI::App* tournament_cmd =
      app.add_subcommand("tournament", "Play a round-robin tournament between agents");
  tournament_cmd
      ->add_option("--agents", agent_args,
                   "Comma-separated agent specs; repeat the flag to add more")
      ->required();
  add_config_flags(tournament_cmd, tournament_flags);
  tournament_cmd->add_option("--repeats", repeats, "Matches per pairing")->capture_default_str();
  tournament_cmd->add_option("--parallel", parallel, "Worker thread count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  tournament_cmd->add_option("--out", tournament_out, "Directory for replays and standings")
      ->capture_default_str();

  std::vector<std::string> verify_paths;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Re-simulate replay files and report divergences");
  verify_cmd->add_option("paths", verify_paths, "Replay files or directories of .jsonl files")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (match_cmd->parsed()) {
      return run_match_command(match_flags, white_text, blue_text, match_out, trace);
    }
    if (tournament_cmd->parsed()) {
      return run_tournament_command(tournament_flags, agent_args, repeats, parallel,
                                    tournament_out);
    }
    return run_verify_command(verify_paths);
  } catch (const snakes::UnknownKind& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const snakes::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}
