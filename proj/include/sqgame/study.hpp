#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sqgame/analysis.hpp"
#include "sqgame/catalog.hpp"
#include "sqgame/event_log.hpp"
#include "sqgame/game.hpp"
#include "sqgame/profile.hpp"

namespace sqgame {

enum class Stage { Setup, Memorize, Tlx1, Distraction1, Play, Tlx2, Distraction2, RecallTest, Tlx3, Done };

std::string_view to_string(Stage s) noexcept;
Stage parse_stage(std::string_view text);
bool is_tlx_stage(Stage s) noexcept;
bool is_timed_stage(Stage s) noexcept;
/// Task whose workload a TLX stage measures.
Task task_for_tlx(Stage s);

struct Participant {
  std::string id;
  Group group = Group::OwnAnswers;
  std::int64_t created_at_ms = 0;
};

/// Group assignment: an explicit group, or random assignment that keeps the
/// two group sizes within one of each other.
struct GroupPolicy {
  std::optional<Group> explicit_group;
  std::uint64_t seed = 0;

  static GroupPolicy fixed(Group g) { return {g, 0}; }
  static GroupPolicy balanced_random(std::uint64_t seed) { return {std::nullopt, seed}; }
};

struct StudySession {
  std::string id;
  std::string participant_id;
  Group group = Group::OwnAnswers;
  Stage stage = Stage::Setup;
  std::int64_t stage_entered_at_ms = 0;
  std::optional<QuestionSet> question_set;
  std::optional<int> chosen_profile;
  std::optional<std::string> game_id;
  std::map<Stage, TlxResponse> tlx;
  std::map<Stage, std::int64_t> stage_elapsed_ms;
  std::optional<std::vector<std::string>> recall_answers;
  std::optional<double> memorability;
  std::uint64_t next_seq = 0;
};

struct DistractionItem {
  std::string prompt;
  int answer = 0;
};

/// Factor and subtraction drills, deterministic per (session, stage).
std::vector<DistractionItem> make_distraction_items(const std::string& session_id, Stage stage, int count);

struct ServiceConfig {
  std::filesystem::path data_dir;
  std::filesystem::path pool_dir;
  std::filesystem::path standard_pool_path;
  /// Lifts the timer budget on Memorize and Distraction stages.
  bool test_mode = false;
  std::chrono::milliseconds stage_budget = std::chrono::minutes(5);
  std::uint64_t seed = 1;
  /// Milliseconds since the epoch; defaults to the system clock.
  std::function<std::int64_t()> clock;
};

struct GameCommandResult {
  Outcome outcome;
  std::optional<ChallengeView> view;  // absent once the game is finished
  int score = 0;
  bool finished = false;
};

/// Files produced by an export, keyed by relative path.
using ExportBundle = std::map<std::string, std::string>;

/// The two-session study protocol. Every mutation is appended to the
/// session's event log before it is acknowledged; constructing a service
/// over an existing data directory replays those logs.
///
/// Thread-safe. Commands for one session are applied one at a time;
/// distinct sessions proceed independently.
class StudyService {
 public:
  explicit StudyService(ServiceConfig config);
  ~StudyService();

  StudyService(const StudyService&) = delete;
  StudyService& operator=(const StudyService&) = delete;

  Participant create_participant(const GroupPolicy& policy);
  StudySession create_session(const std::string& participant_id);

  StudySession session(const std::string& session_id) const;
  std::vector<Participant> participants() const;

  /// Candidate profiles for a system_profile session in Setup.
  std::array<Profile, 2> offered_profiles(const std::string& session_id) const;

  StudySession setup_own_answers(const std::string& session_id,
                                 const std::vector<std::pair<std::string, std::string>>& choices);
  StudySession setup_from_profile(const std::string& session_id, int profile_choice,
                                  const std::vector<std::string>& question_ids);

  StudySession advance_stage(const std::string& session_id);

  /// Question prompts with configured answers; only during Memorize.
  nlohmann::json memorize_sheet(const std::string& session_id) const;

  std::vector<DistractionItem> distraction_items(const std::string& session_id, int count) const;
  /// Number of correct answers among the submitted ones (in item order).
  int submit_distraction(const std::string& session_id, const std::vector<int>& answers);

  /// `stage` defaults to the current stage.
  StudySession record_tlx(const std::string& session_id, std::optional<Stage> stage, const TlxResponse& response);

  double submit_recall_test(const std::string& session_id, const std::vector<std::string>& answers);

  GameCommandResult game_command(const std::string& game_id, const Command& command);
  ChallengeView game_view(const std::string& game_id) const;
  std::string session_of_game(const std::string& game_id) const;

  /// Completed (Done) sessions only: tlx.csv, sessions.csv, and per-game
  /// event logs with their configurations.
  ExportBundle export_study() const;
  void export_to(const std::filesystem::path& dir) const;

  /// Hash of the complete session state, including the game.
  std::uint64_t session_hash(const std::string& session_id) const;

  std::vector<nlohmann::json> session_events(const std::string& session_id) const;

  const ServiceConfig& config() const { return config_; }

 private:
  struct Slot;

  std::int64_t now() const;
  std::shared_ptr<Slot> slot(const std::string& session_id) const;
  std::shared_ptr<Slot> slot_for_game(const std::string& game_id) const;
  void append(Slot& slot, nlohmann::json event, bool persist);
  void apply_event(Slot& slot, const nlohmann::json& event);
  void recover();
  void persist_participant(const Participant& p);
  std::array<Profile, 2> profiles_for(const StudySession& s) const;

  ServiceConfig config_;
  AttributePools pools_;
  std::vector<StandardSpec> standard_pool_;

  mutable std::mutex registry_mutex_;
  std::map<std::string, Participant> participants_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::map<std::string, std::string> game_to_session_;
  std::uint64_t participant_counter_ = 0;
  std::uint64_t session_counter_ = 0;
};

nlohmann::json session_to_wire(const StudySession& s);
nlohmann::json profile_to_json(const Profile& p);

}  // namespace sqgame
