#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sqgame/event_log.hpp"
#include "sqgame/game.hpp"

namespace sqgame {

enum class HintPolicy { Never, WhenAffordable };

/// Scripted player. Decisions are deterministic given (policy, game seed).
struct BotPolicy {
  double p_standard = 1.0;
  double p_recognition = 1.0;
  double p_recall = 1.0;
  HintPolicy hint_policy = HintPolicy::Never;
  int max_hints = 1;           // per game, with WhenAffordable
  int wrong_attempts = 1;      // wrong text answers before skipping a failed challenge
  bool use_cues = true;        // unlock cues as soon as allowed
  std::uint64_t seed = 0;
};

/// Throws InvalidConfig for probabilities outside [0, 1] or negative counts.
void validate_policy(const BotPolicy& policy);

/// A text answer guaranteed to differ from the active answer after
/// normalization, built from the bank's filler symbols.
std::string wrong_answer(const Challenge& challenge, Rng& rng);

struct BotRun {
  std::vector<GameEvent> events;
  GameState final_state;
};

/// Plays one full game. Timestamps advance on a simulated clock from
/// `start_ms` so runs are byte-reproducible.
BotRun play_bot_game(std::shared_ptr<const GameConfig> config, const BotPolicy& policy,
                     const std::string& game_id, std::int64_t start_ms = 0);

}  // namespace sqgame
