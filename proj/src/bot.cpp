#include "sqgame/bot.hpp"

#include <algorithm>

#include "sqgame/error.hpp"

namespace sqgame {

void validate_policy(const BotPolicy& p) {
  for (double prob : {p.p_standard, p.p_recognition, p.p_recall}) {
    if (!(prob >= 0.0 && prob <= 1.0)) throw Error(ErrorCode::InvalidConfig, "bot probabilities must lie in [0, 1]");
  }
  if (p.max_hints < 0 || p.wrong_attempts < 0) {
    throw Error(ErrorCode::InvalidConfig, "bot counts must be non-negative");
  }
}

std::string wrong_answer(const Challenge& c, Rng& rng) {
  std::vector<char> fillers;
  if (c.bank) {
    for (std::size_t i = 0; i < c.bank->symbols.size(); ++i) {
      if (!c.bank->reserved[i] && !c.bank->removed[i]) fillers.push_back(c.bank->symbols[i]);
    }
  }
  rng.shuffle(fillers);
  std::string guess(fillers.begin(), fillers.end());
  if (guess.empty() || guess == c.secret_answer) {
    // Longer than the answer, so never equal to it.
    guess = c.secret_answer;
    guess.erase(std::remove(guess.begin(), guess.end(), ' '), guess.end());
    guess.push_back(guess.empty() ? 'x' : guess.front());
  }
  return guess;
}

namespace {

double success_probability(const BotPolicy& p, ChallengeKind k) {
  switch (k) {
    case ChallengeKind::Standard: return p.p_standard;
    case ChallengeKind::Recognition: return p.p_recognition;
    case ChallengeKind::Recall: return p.p_recall;
  }
  return 0.0;
}

bool draw(Rng& rng, double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return static_cast<double>(rng.next() >> 11) * 0x1.0p-53 < p;
}

}  // namespace

BotRun play_bot_game(std::shared_ptr<const GameConfig> config, const BotPolicy& policy,
                     const std::string& game_id, std::int64_t start_ms) {
  validate_policy(policy);
  Rng rng(policy.seed ^ (config->rng_seed * 0x9e3779b97f4a7c15ULL + 1));
  std::int64_t clock = start_ms;
  auto tick = [&] {
    clock += 2000 + static_cast<std::int64_t>(rng.below(28000));
    return clock;
  };

  GameRecorder game(game_id, std::move(config), start_ms);
  int hints_bought = 0;
  while (!game.state().finished()) {
    const GameState& s = game.state();
    if (policy.use_cues && !s.cues_enabled && s.earned_total >= s.config->cue_unlock_threshold) {
      game.apply(Command::cues(), tick());
      continue;
    }
    const Challenge& c = *s.active;
    const bool succeed = draw(rng, success_probability(policy, c.kind));

    if (c.kind == ChallengeKind::Recognition) {
      int choice = c.correct_option;
      if (!succeed) {
        choice = static_cast<int>((static_cast<std::size_t>(c.correct_option) + 1 + rng.below(3)) %
                                  kRecognitionOptions);
      }
      game.apply(Command::choice(choice), tick());
      continue;
    }

    if (policy.hint_policy == HintPolicy::WhenAffordable && hints_bought < policy.max_hints &&
        s.score >= s.config->hint_cost && c.bank->fillers_left() > 0) {
      game.apply(Command::hint(), tick());
      ++hints_bought;
    }
    if (succeed) {
      game.apply(Command::answer(game.state().active->secret_answer), tick());
    } else {
      for (int i = 0; i < policy.wrong_attempts; ++i) {
        game.apply(Command::answer(wrong_answer(*game.state().active, rng)), tick());
      }
      game.apply(Command::skip(), tick());
    }
  }
  return {game.events(), game.state()};
}

}  // namespace sqgame
