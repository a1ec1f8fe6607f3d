#include "sqgame/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "sqgame/analysis.hpp"
#include "sqgame/bot.hpp"
#include "sqgame/content.hpp"
#include "sqgame/error.hpp"
#include "sqgame/event_log.hpp"
#include "sqgame/http_api.hpp"
#include "sqgame/study.hpp"

namespace sqgame {

namespace fs = std::filesystem;

namespace {

const std::string kDefaultData = SQGAME_DATA_DIR;

std::int64_t wall_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void write_log(const fs::path& path, const std::vector<GameEvent>& events) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  write_jsonl(out, events);
  if (!out) throw Error(ErrorCode::MalformedData, "cannot write " + path.string());
}

GameConfig config_or_demo(const std::string& config_path, const std::string& pools, const std::string& standard,
                          std::uint64_t seed) {
  if (!config_path.empty()) return load_game_config(config_path);
  return demo_config(AttributePools::load(pools), load_standard_pool(standard), seed);
}

// ---- play ------------------------------------------------------------------

void print_view(std::ostream& out, const GameState& state, const ChallengeView& v) {
  out << "\n-- Challenge " << state.slot + 1 << " of " << kSchedule.size() << ": " << to_string(v.kind)
      << "   score " << v.score << "\n";
  out << "Pictures:";
  for (const auto& p : v.pictures) out << "  [" << p << "]";
  out << "\n";
  if (!v.cues.empty()) {
    out << "Cues:";
    for (const auto& c : v.cues) out << "  (" << (c.empty() ? "-" : c) << ")";
    out << "\n";
  }
  if (v.kind == ChallengeKind::Recognition) {
    out << "Which picture belongs to your security question?\n";
    for (std::size_t i = 0; i < v.options.size(); ++i) out << "  " << i + 1 << ") " << v.options[i] << "\n";
    out << "Enter 1-" << v.options.size();
  } else {
    out << "Letters:";
    for (std::size_t i = 0; i < v.bank.size(); ++i) {
      const bool gone = std::find(v.removed.begin(), v.removed.end(), i) != v.removed.end();
      out << ' ' << (gone ? "_" : v.bank[i]);
    }
    out << "\nType your answer, :hint";
  }
  if (v.cues_unlockable && !v.cues_enabled) out << ", :cues";
  if (v.kind != ChallengeKind::Recognition) out << ", :skip";
  out << " or :quit\n";
}

void print_outcome(std::ostream& out, const Command& cmd, const Outcome& o) {
  switch (cmd.type) {
    case CommandType::Hint: out << "One letter removed (" << o.points_delta << ")\n"; return;
    case CommandType::Cues: out << "Cues enabled\n"; return;
    case CommandType::Skip: out << "Skipped (" << o.points_delta << ")\n"; return;
    default: break;
  }
  if (o.correct) {
    out << "Correct! +" << o.points_delta << "\n";
  } else {
    out << "Wrong (" << o.points_delta << ")\n";
  }
}

int play(const GameConfig& config, std::istream& in, std::ostream& out, std::ostream& err,
         const std::string& log_path) {
  GameRecorder rec("play", std::make_shared<const GameConfig>(config), wall_ms());
  auto finish = [&](int code) {
    if (!log_path.empty()) write_log(log_path, rec.events());
    return code;
  };
  bool show = true;
  while (!rec.state().finished()) {
    const ChallengeView v = view_challenge(rec.state());
    if (show) print_view(out, rec.state(), v);
    show = false;
    out << "> " << std::flush;
    std::string line;
    if (!std::getline(in, line)) {
      err << "input ended before the game finished\n";
      return finish(3);
    }
    line = trim(line);
    Command cmd;
    if (line == ":quit") {
      out << "Quit with score " << rec.state().score << "\n";
      return finish(2);
    } else if (line == ":hint") {
      cmd = Command::hint();
    } else if (line == ":cues") {
      cmd = Command::cues();
    } else if (line == ":skip") {
      cmd = Command::skip();
    } else if (v.kind == ChallengeKind::Recognition) {
      int choice = 0;
      try {
        std::size_t used = 0;
        choice = std::stoi(line, &used);
        if (used != line.size()) choice = 0;
      } catch (const std::exception&) {
        choice = 0;
      }
      if (choice < 1 || choice > static_cast<int>(v.options.size())) {
        out << "Please enter a number from 1 to " << v.options.size() << ".\n";
        continue;
      }
      cmd = Command::choice(choice - 1);
    } else {
      cmd = Command::answer(line);
    }
    try {
      const Transition t = rec.apply(cmd, wall_ms());
      print_outcome(out, cmd, t.outcome);
      show = t.outcome.challenge_completed || cmd.type != CommandType::Answer;
    } catch (const Error& e) {
      out << "Not allowed: " << e.what() << "\n";
    }
  }
  out << "\nGame over. Final score: " << rec.state().score << "\n";
  return finish(0);
}

// ---- simulate --------------------------------------------------------------

struct SimOptions {
  std::string config;
  std::string pools = kDefaultData + "/pools";
  std::string standard = kDefaultData + "/standard_challenges.json";
  std::uint64_t seed = 1;
  int runs = 100;
  double p_standard = 1.0;
  double p_recognition = 1.0;
  double p_recall = 1.0;
  std::string hints = "never";
  int max_hints = 1;
  std::string out_dir;
  bool verbose = false;
};

int simulate(const SimOptions& o, std::ostream& out) {
  if (o.runs < 1) throw Error(ErrorCode::OutOfRange, "--runs must be at least 1");
  const GameConfig base = config_or_demo(o.config, o.pools, o.standard, o.seed);
  BotPolicy policy;
  policy.p_standard = o.p_standard;
  policy.p_recognition = o.p_recognition;
  policy.p_recall = o.p_recall;
  policy.max_hints = o.max_hints;
  if (o.hints == "never") {
    policy.hint_policy = HintPolicy::Never;
  } else if (o.hints == "when_affordable") {
    policy.hint_policy = HintPolicy::WhenAffordable;
  } else {
    throw Error(ErrorCode::BadRequest, "--hints must be never or when_affordable");
  }
  validate_policy(policy);

  double sum_score = 0, sum_std = 0, sum_rec = 0, sum_recall = 0, sum_hints = 0, sum_dur = 0;
  int min_score = 0, max_score = 0;
  for (int i = 0; i < o.runs; ++i) {
    GameConfig cfg = base;
    cfg.rng_seed = base.rng_seed + static_cast<std::uint64_t>(i);
    BotPolicy p = policy;
    p.seed = o.seed * 1000003ULL + static_cast<std::uint64_t>(i);
    char id[32];
    std::snprintf(id, sizeof id, "sim-%04d", i + 1);
    const BotRun run = play_bot_game(std::make_shared<const GameConfig>(std::move(cfg)), p, id);
    const SessionMetrics m = session_metrics(run.events);
    if (!o.out_dir.empty()) write_log(fs::path(o.out_dir) / (std::string(id) + ".jsonl"), run.events);
    if (o.verbose) {
      out << id << "  score " << m.final_score << "  solved " << m.solved_standard << "/" << m.solved_recognition
          << "/" << m.solved_recall << "  hints " << m.hints_used << "\n";
    }
    sum_score += m.final_score;
    sum_std += m.solved_standard;
    sum_rec += m.solved_recognition;
    sum_recall += m.solved_recall;
    sum_hints += m.hints_used;
    sum_dur += m.duration_seconds;
    min_score = i == 0 ? m.final_score : std::min(min_score, m.final_score);
    max_score = i == 0 ? m.final_score : std::max(max_score, m.final_score);
  }
  const double n = o.runs;
  out << std::fixed << std::setprecision(2);
  out << "runs               " << o.runs << "\n"
      << "final score        mean " << sum_score / n << "  min " << min_score << "  max " << max_score << "\n"
      << "solved standard    mean " << sum_std / n << "\n"
      << "solved recognition mean " << sum_rec / n << "\n"
      << "solved recall      mean " << sum_recall / n << "\n"
      << "hints used         mean " << sum_hints / n << "\n"
      << "duration (s)       mean " << sum_dur / n << "\n";
  return 0;
}

// ---- analyze ---------------------------------------------------------------

int analyze(const std::string& input, const std::string& test, bool no_cc, double alpha, const std::string& csv,
            std::ostream& out) {
  fs::path path = input;
  if (fs::is_directory(path)) path /= "tlx.csv";
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedData, "cannot read " + path.string());
  const TlxDataset data = read_tlx_csv(in);
  CompareOptions opts;
  if (test == "t") {
    opts.test = TestChoice::StudentT;
  } else if (test == "mw") {
    opts.test = TestChoice::MannWhitney;
  } else {
    throw Error(ErrorCode::BadRequest, "--test must be t or mw");
  }
  opts.mw.continuity_correction = !no_cc;
  opts.alpha = alpha;
  const auto rows = compare_groups(data, opts);
  out << format_report(rows);
  if (!csv.empty()) {
    std::ofstream f(csv);
    write_report_csv(f, rows);
    if (!f) throw Error(ErrorCode::MalformedData, "cannot write " + csv);
  }
  return 0;
}

}  // namespace

GameConfig demo_config(const AttributePools& pools, const std::vector<StandardSpec>& standard_pool,
                       std::uint64_t seed) {
  const Profile p = generate_profile(pools, seed, Gender::Male);
  std::vector<std::pair<std::string, std::string>> choices;
  for (const char* q : {"mothers_maiden", "last6_phone", "high_school_city"}) choices.emplace_back(q, derive_answer(p, q));
  return make_game_config(standard_pool, select_question_set(load_catalog(), choices), seed);
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Security question game toolkit"};
  app.require_subcommand(1);

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "Print a generated identity profile");
  std::uint64_t profile_seed = 1;
  std::string gender = "male";
  std::string profile_pools = kDefaultData + "/pools";
  profile_cmd->add_option("--seed", profile_seed, "Generator seed");
  profile_cmd->add_option("--gender", gender, "male or female");
  profile_cmd->add_option("--pools", profile_pools, "Attribute pool directory");

  // config
  auto* config_cmd = app.add_subcommand("config", "Write a game configuration");
  std::vector<std::string> answers;
  std::optional<std::uint64_t> from_profile;
  std::vector<std::string> question_ids;
  std::uint64_t config_seed = 1;
  std::string config_pools = kDefaultData + "/pools";
  std::string config_standard = kDefaultData + "/standard_challenges.json";
  std::string config_out;
  config_cmd->add_option("--answer", answers, "question_id=answer, three times");
  config_cmd->add_option("--from-profile", from_profile, "Derive answers from the profile with this seed");
  config_cmd->add_option("--gender", gender, "Profile gender with --from-profile");
  config_cmd->add_option("--question", question_ids, "Question id with --from-profile, three times");
  config_cmd->add_option("--seed", config_seed, "Game seed");
  config_cmd->add_option("--pools", config_pools, "Attribute pool directory");
  config_cmd->add_option("--standard", config_standard, "Standard challenge pool (JSON)");
  config_cmd->add_option("--out", config_out, "Output file (default stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run scripted bot games");
  SimOptions sim;
  sim_cmd->add_option("--config", sim.config, "Game configuration (default: demo configuration)");
  sim_cmd->add_option("--pools", sim.pools, "Attribute pool directory for the demo configuration");
  sim_cmd->add_option("--standard", sim.standard, "Standard challenge pool for the demo configuration");
  sim_cmd->add_option("--seed", sim.seed, "Bot and demo seed");
  sim_cmd->add_option("--runs", sim.runs, "Number of games");
  sim_cmd->add_option("--p-standard", sim.p_standard, "Success probability on standard challenges");
  sim_cmd->add_option("--p-recognition", sim.p_recognition, "Success probability on recognition challenges");
  sim_cmd->add_option("--p-recall", sim.p_recall, "Success probability on recall challenges");
  sim_cmd->add_option("--hints", sim.hints, "never or when_affordable");
  sim_cmd->add_option("--max-hints", sim.max_hints, "Hint budget per game with when_affordable");
  sim_cmd->add_option("--out", sim.out_dir, "Directory for per-run event logs");
  sim_cmd->add_flag("--verbose", sim.verbose, "Print one line per run");

  // play
  auto* play_cmd = app.add_subcommand("play", "Play a game in the terminal");
  std::string play_config;
  std::string play_pools = kDefaultData + "/pools";
  std::string play_standard = kDefaultData + "/standard_challenges.json";
  std::uint64_t play_seed = 1;
  std::string play_log;
  play_cmd->add_option("--config", play_config, "Game configuration (default: demo configuration)");
  play_cmd->add_option("--pools", play_pools, "Attribute pool directory for the demo configuration");
  play_cmd->add_option("--standard", play_standard, "Standard challenge pool for the demo configuration");
  play_cmd->add_option("--seed", play_seed, "Demo configuration seed");
  play_cmd->add_option("--log", play_log, "Write the event log here");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Compare workload between the two groups");
  std::string analyze_in;
  std::string test = "t";
  bool no_cc = false;
  double alpha = 0.05;
  std::string report_csv;
  analyze_cmd->add_option("export", analyze_in, "Export directory or tlx.csv")->required();
  analyze_cmd->add_option("--test", test, "t or mw");
  analyze_cmd->add_flag("--no-continuity-correction", no_cc, "Plain normal approximation for Mann-Whitney");
  analyze_cmd->add_option("--alpha", alpha, "Significance level");
  analyze_cmd->add_option("--csv", report_csv, "Also write the report as CSV");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the study HTTP service");
  std::string host = "127.0.0.1";
  int port = 8080;
  ServiceConfig svc;
  std::string store = "study-data";
  std::string serve_pools = kDefaultData + "/pools";
  std::string serve_standard = kDefaultData + "/standard_challenges.json";
  serve_cmd->add_option("--host", host, "Listen address")->envname("SQGAME_HOST");
  serve_cmd->add_option("--port", port, "Listen port (0 picks one)")->envname("SQGAME_PORT");
  serve_cmd->add_option("--data", store, "Directory for event logs")->envname("SQGAME_DATA");
  serve_cmd->add_option("--pools", serve_pools, "Attribute pool directory")->envname("SQGAME_POOLS");
  serve_cmd->add_option("--standard", serve_standard, "Standard challenge pool")->envname("SQGAME_STANDARD");
  serve_cmd->add_flag("--test-mode", svc.test_mode, "Skip the stage timers")->envname("SQGAME_TEST_MODE");
  serve_cmd->add_option("--seed", svc.seed, "Service seed")->envname("SQGAME_SEED");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*profile_cmd) {
      const auto pools = AttributePools::load(profile_pools);
      out << format_profile(generate_profile(pools, profile_seed, parse_gender(gender)));
      return 0;
    }
    if (*config_cmd) {
      std::vector<std::pair<std::string, std::string>> choices;
      if (from_profile) {
        const Profile p = generate_profile(AttributePools::load(config_pools), *from_profile, parse_gender(gender));
        for (const auto& q : question_ids) {
          find_question(load_catalog(), q);
          choices.emplace_back(q, derive_answer(p, q));
        }
      } else {
        for (const auto& a : answers) {
          const auto eq = a.find('=');
          if (eq == std::string::npos) throw Error(ErrorCode::BadRequest, "--answer takes question_id=answer");
          choices.emplace_back(a.substr(0, eq), a.substr(eq + 1));
        }
      }
      const GameConfig cfg = make_game_config(load_standard_pool(config_standard),
                                              select_question_set(load_catalog(), choices), config_seed);
      if (config_out.empty()) {
        out << nlohmann::json(cfg).dump(2) << "\n";
      } else {
        save_game_config(config_out, cfg);
      }
      return 0;
    }
    if (*sim_cmd) return simulate(sim, out);
    if (*play_cmd) {
      return play(config_or_demo(play_config, play_pools, play_standard, play_seed), in, out, err, play_log);
    }
    if (*analyze_cmd) return analyze(analyze_in, test, no_cc, alpha, report_csv, out);
    if (*serve_cmd) {
      svc.data_dir = store;
      svc.pool_dir = serve_pools;
      svc.standard_pool_path = serve_standard;
      StudyService service(svc);
      ApiServer server(service);
      const int bound = server.bind(host, port);
      if (bound < 0) {
        err << "cannot listen on " << host << ":" << port << "\n";
        return 1;
      }
      out << "listening on http://" << host << ":" << bound << (svc.test_mode ? " (test mode)" : "") << std::endl;
      return server.run() ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace sqgame
