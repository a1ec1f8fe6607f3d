#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqgame/game.hpp"

namespace sqgame {

/// One line of a game's event log. The first record of every log is a
/// `start` record; every later record is one successfully applied command.
struct GameEvent {
  std::string game_id;
  std::uint64_t seq = 0;
  std::int64_t timestamp_ms = 0;
  CommandType command = CommandType::Start;
  std::string argument;  // answer text or option index
  int outcome_delta = 0;
  ChallengeKind challenge_kind = ChallengeKind::Standard;
  bool correct = false;
  bool completed = false;
  bool game_finished = false;
  int score = 0;  // after the command

  friend bool operator==(const GameEvent&, const GameEvent&) = default;
};

void to_json(nlohmann::json& j, const GameEvent& e);
void from_json(const nlohmann::json& j, GameEvent& e);

void write_jsonl(std::ostream& out, std::span<const GameEvent> events);
std::vector<GameEvent> read_jsonl(std::istream& in);

Command command_of(const GameEvent& e);

/// Applies commands to a game and records each one.
class GameRecorder {
 public:
  GameRecorder(std::string game_id, std::shared_ptr<const GameConfig> config, std::int64_t start_ms);

  /// Applies and records; on error nothing is recorded and state is unchanged.
  Transition apply(const Command& command, std::int64_t timestamp_ms);

  const GameState& state() const { return state_; }
  const std::vector<GameEvent>& events() const { return events_; }
  const std::string& game_id() const { return game_id_; }

 private:
  std::string game_id_;
  GameState state_;
  std::vector<GameEvent> events_;
};

/// Rebuilds the game by re-applying the recorded commands. Throws
/// MalformedData when a record disagrees with the recomputed outcome.
GameState replay_events(std::shared_ptr<const GameConfig> config, std::span<const GameEvent> events);

}  // namespace sqgame
