#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sqgame/catalog.hpp"
#include "sqgame/letter_bank.hpp"
#include "sqgame/rng.hpp"

namespace sqgame {

enum class ChallengeKind { Standard, Recognition, Recall };
enum class Phase { RecognitionPhase, RecallPhase, FinalStandard, Finished };

std::string_view to_string(ChallengeKind k) noexcept;
std::string_view to_string(Phase p) noexcept;
ChallengeKind parse_challenge_kind(std::string_view text);

inline constexpr std::size_t kStandardPoolSize = 7;
inline constexpr std::size_t kPicturesPerChallenge = 4;
inline constexpr std::size_t kRecognitionOptions = 4;

/// Kinds of the 13 challenges of every game, in order.
inline constexpr std::array<ChallengeKind, 13> kSchedule{
    ChallengeKind::Standard,  ChallengeKind::Recognition, ChallengeKind::Standard,
    ChallengeKind::Recognition, ChallengeKind::Standard,  ChallengeKind::Recognition,
    ChallengeKind::Standard,  ChallengeKind::Recall,      ChallengeKind::Standard,
    ChallengeKind::Recall,    ChallengeKind::Standard,    ChallengeKind::Recall,
    ChallengeKind::Standard};

struct StandardSpec {
  std::string id;
  std::string answer;
  std::array<std::string, kPicturesPerChallenge> pictures;
  std::array<std::string, kPicturesPerChallenge> cues;
};

struct PictureOption {
  std::string ref;
  std::string label;
  std::string cue;
};

/// Pictures for one security question: the recognition choice (one correct
/// picture among distractors) and the four pictures shown with its recall
/// challenge.
struct QuestionAssets {
  std::string question_id;
  PictureOption correct;
  std::vector<PictureOption> distractors;
  std::array<std::string, kPicturesPerChallenge> recall_pictures;
  std::array<std::string, kPicturesPerChallenge> recall_cues;
};

struct PointValues {
  int standard = 10;
  int recognition = 15;
  int recall = 20;

  int for_kind(ChallengeKind k) const noexcept {
    switch (k) {
      case ChallengeKind::Standard: return standard;
      case ChallengeKind::Recognition: return recognition;
      case ChallengeKind::Recall: return recall;
    }
    return 0;
  }
};

struct GameConfig {
  std::vector<StandardSpec> standard_pool;
  QuestionSet question_set;
  std::vector<QuestionAssets> question_assets;
  PointValues points;
  int hint_cost = 50;
  int cue_unlock_threshold = 50;
  std::uint64_t rng_seed = 0;
};

/// Throws InvalidConfig describing the first violated rule.
void validate_config(const GameConfig& config);

void to_json(nlohmann::json& j, const GameConfig& config);
void from_json(const nlohmann::json& j, GameConfig& config);

/// Case-insensitive containment test used wherever visible text is checked
/// against secret answers.
bool mentions_secret(std::string_view visible, std::string_view secret);

struct Challenge {
  ChallengeKind kind = ChallengeKind::Standard;
  std::string source_id;  // StandardSpec id or question id
  std::array<std::string, kPicturesPerChallenge> pictures;
  std::array<std::string, kPicturesPerChallenge> cues;
  std::string secret_answer;                               // Standard / Recall
  std::array<std::string, kRecognitionOptions> options{};  // Recognition labels
  int correct_option = -1;                                 // Recognition
  std::optional<LetterBank> bank;                          // Standard / Recall
};

struct CompletedChallenge {
  ChallengeKind kind;
  std::string source_id;
  bool solved;
  int attempts;
  int hints;
};

struct GameState {
  std::shared_ptr<const GameConfig> config;
  Phase phase = Phase::RecognitionPhase;
  int score = 0;
  int earned_total = 0;
  bool cues_enabled = false;
  std::size_t slot = 0;
  std::vector<std::size_t> remaining_standard;     // indices into standard_pool
  std::vector<std::size_t> remaining_recognition;  // indices into question_set
  std::vector<std::size_t> remaining_recall;       // indices into question_set
  std::optional<Challenge> active;
  int active_attempts = 0;
  int active_hints = 0;
  std::vector<CompletedChallenge> history;
  Rng rng;

  bool finished() const noexcept { return phase == Phase::Finished; }
};

struct Outcome {
  bool correct = false;
  int points_delta = 0;
  bool challenge_completed = false;
  bool game_finished = false;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

void to_json(nlohmann::json& j, const Outcome& outcome);

struct Transition {
  GameState state;
  Outcome outcome;
};

struct HintResult {
  GameState state;
  Outcome outcome;  // points_delta = -hint_cost
  std::size_t removed_position;
};

/// What the player sees. Carries neither the answer, its length, nor the
/// correct option.
struct ChallengeView {
  ChallengeKind kind = ChallengeKind::Standard;
  std::array<std::string, kPicturesPerChallenge> pictures;
  std::vector<std::string> bank;        // 12 symbols, Standard / Recall
  std::vector<std::size_t> removed;     // bank positions removed by hints
  std::vector<std::string> options;     // 4 labels, Recognition
  std::vector<std::string> cues;        // only when cues are enabled
  int score = 0;
  bool cues_enabled = false;
  bool cues_unlockable = false;
  bool hint_available = false;
};

void to_json(nlohmann::json& j, const ChallengeView& view);

/// Keys a serialized view or outcome may carry.
std::span<const std::string_view> view_keys();
std::span<const std::string_view> outcome_keys();

/// Throws InvalidConfig. The first challenge is a seeded-random standard one.
GameState new_game(GameConfig config);
GameState new_game(std::shared_ptr<const GameConfig> config);

/// Throws GameFinished.
ChallengeView view_challenge(const GameState& state);

/// Throws GameFinished, WrongChallengeKind.
Transition submit_text_answer(const GameState& state, std::string_view text);

/// One attempt; the challenge completes either way. Throws GameFinished,
/// WrongChallengeKind, IndexOutOfRange.
Transition submit_option(const GameState& state, int index);

/// Throws GameFinished, HintUnavailableForRecognition, InsufficientPoints,
/// NoFillersLeft.
HintResult buy_hint(const GameState& state);

/// Throws GameFinished, ThresholdNotReached. Idempotent.
GameState enable_cues(const GameState& state);

/// Completes the active text challenge as failed with one deduction.
/// Throws GameFinished, WrongChallengeKind.
Transition skip_challenge(const GameState& state);

enum class CommandType { Start, Answer, Choice, Hint, Cues, Skip };

std::string_view to_string(CommandType c) noexcept;
CommandType parse_command_type(std::string_view text);

struct Command {
  CommandType type = CommandType::Answer;
  std::string text;  // Answer
  int index = 0;     // Choice

  static Command answer(std::string t) { return {CommandType::Answer, std::move(t), 0}; }
  static Command choice(int i) { return {CommandType::Choice, {}, i}; }
  static Command hint() { return {CommandType::Hint, {}, 0}; }
  static Command cues() { return {CommandType::Cues, {}, 0}; }
  static Command skip() { return {CommandType::Skip, {}, 0}; }
};

/// Dispatches to the operation named by the command.
Transition apply_command(const GameState& state, const Command& command);

/// Full internal state (including secrets and generator state) in a
/// canonical form. For hashing and diagnostics only, never for players.
nlohmann::json state_digest(const GameState& state);
std::uint64_t state_hash(const GameState& state);

}  // namespace sqgame
