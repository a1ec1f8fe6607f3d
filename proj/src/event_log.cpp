#include "sqgame/event_log.hpp"

#include <string>

#include "sqgame/error.hpp"

namespace sqgame {

using nlohmann::json;

void to_json(json& j, const GameEvent& e) {
  j = json{{"game_id", e.game_id},
           {"seq", e.seq},
           {"timestamp", e.timestamp_ms},
           {"command", to_string(e.command)},
           {"argument", e.argument},
           {"outcome_delta", e.outcome_delta},
           {"challenge_kind", to_string(e.challenge_kind)},
           {"correct", e.correct},
           {"completed", e.completed},
           {"game_finished", e.game_finished},
           {"score", e.score}};
}

void from_json(const json& j, GameEvent& e) {
  try {
    e.game_id = j.at("game_id").get<std::string>();
    e.seq = j.at("seq").get<std::uint64_t>();
    e.timestamp_ms = j.at("timestamp").get<std::int64_t>();
    e.command = parse_command_type(j.at("command").get<std::string>());
    e.argument = j.value("argument", std::string{});
    e.outcome_delta = j.at("outcome_delta").get<int>();
    e.challenge_kind = parse_challenge_kind(j.at("challenge_kind").get<std::string>());
    e.correct = j.at("correct").get<bool>();
    e.completed = j.value("completed", false);
    e.game_finished = j.value("game_finished", false);
    e.score = j.value("score", 0);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::MalformedData, std::string("bad game event: ") + ex.what());
  }
}

void write_jsonl(std::ostream& out, std::span<const GameEvent> events) {
  for (const auto& e : events) out << json(e).dump() << '\n';
}

std::vector<GameEvent> read_jsonl(std::istream& in) {
  std::vector<GameEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      events.push_back(json::parse(line).get<GameEvent>());
    } catch (const json::parse_error& ex) {
      throw Error(ErrorCode::MalformedData, std::string("bad event line: ") + ex.what());
    }
  }
  return events;
}

Command command_of(const GameEvent& e) {
  Command c;
  c.type = e.command;
  if (e.command == CommandType::Answer) c.text = e.argument;
  if (e.command == CommandType::Choice) {
    try {
      c.index = std::stoi(e.argument);
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedData, "choice record without an index");
    }
  }
  return c;
}

GameRecorder::GameRecorder(std::string game_id, std::shared_ptr<const GameConfig> config,
                           std::int64_t start_ms)
    : game_id_(std::move(game_id)), state_(new_game(std::move(config))) {
  GameEvent start;
  start.game_id = game_id_;
  start.seq = 0;
  start.timestamp_ms = start_ms;
  start.command = CommandType::Start;
  start.challenge_kind = state_.active->kind;
  events_.push_back(start);
}

Transition GameRecorder::apply(const Command& command, std::int64_t timestamp_ms) {
  const ChallengeKind kind =
      state_.active ? state_.active->kind : ChallengeKind::Standard;
  Transition t = apply_command(state_, command);
  GameEvent e;
  e.game_id = game_id_;
  e.seq = events_.size();
  e.timestamp_ms = timestamp_ms;
  e.command = command.type;
  if (command.type == CommandType::Answer) e.argument = command.text;
  if (command.type == CommandType::Choice) e.argument = std::to_string(command.index);
  e.outcome_delta = t.outcome.points_delta;
  e.challenge_kind = kind;
  e.correct = t.outcome.correct;
  e.completed = t.outcome.challenge_completed;
  e.game_finished = t.outcome.game_finished;
  e.score = t.state.score;
  events_.push_back(std::move(e));
  state_ = t.state;
  return t;
}

GameState replay_events(std::shared_ptr<const GameConfig> config, std::span<const GameEvent> events) {
  if (events.empty() || events.front().command != CommandType::Start) {
    throw Error(ErrorCode::MalformedData, "event log must begin with a start record");
  }
  GameState state = new_game(std::move(config));
  for (std::size_t i = 1; i < events.size(); ++i) {
    const GameEvent& e = events[i];
    if (e.seq != i) throw Error(ErrorCode::MalformedData, "event sequence has a gap at " + std::to_string(i));
    if (state.active && state.active->kind != e.challenge_kind) {
      throw Error(ErrorCode::MalformedData, "challenge kind diverges at seq " + std::to_string(e.seq));
    }
    Transition t = apply_command(state, command_of(e));
    if (t.outcome.points_delta != e.outcome_delta || t.state.score != e.score ||
        t.outcome.correct != e.correct) {
      throw Error(ErrorCode::MalformedData, "outcome diverges at seq " + std::to_string(e.seq));
    }
    state = std::move(t.state);
  }
  return state;
}

}  // namespace sqgame
