#include "sqgame/game.hpp"

#include <algorithm>
#include <set>

#include "sqgame/error.hpp"

namespace sqgame {

using nlohmann::json;

std::string_view to_string(ChallengeKind k) noexcept {
  switch (k) {
    case ChallengeKind::Standard: return "standard";
    case ChallengeKind::Recognition: return "recognition";
    case ChallengeKind::Recall: return "recall";
  }
  return "?";
}

std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::RecognitionPhase: return "recognition_phase";
    case Phase::RecallPhase: return "recall_phase";
    case Phase::FinalStandard: return "final_standard";
    case Phase::Finished: return "finished";
  }
  return "?";
}

ChallengeKind parse_challenge_kind(std::string_view text) {
  for (auto k : {ChallengeKind::Standard, ChallengeKind::Recognition, ChallengeKind::Recall}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorCode::MalformedData, "unknown challenge kind '" + std::string(text) + "'");
}

std::string_view to_string(CommandType c) noexcept {
  switch (c) {
    case CommandType::Start: return "start";
    case CommandType::Answer: return "answer";
    case CommandType::Choice: return "choice";
    case CommandType::Hint: return "hint";
    case CommandType::Cues: return "cues";
    case CommandType::Skip: return "skip";
  }
  return "?";
}

CommandType parse_command_type(std::string_view text) {
  for (auto c : {CommandType::Start, CommandType::Answer, CommandType::Choice, CommandType::Hint,
                 CommandType::Cues, CommandType::Skip}) {
    if (to_string(c) == text) return c;
  }
  throw Error(ErrorCode::MalformedData, "unknown command '" + std::string(text) + "'");
}

bool mentions_secret(std::string_view visible, std::string_view secret) {
  if (secret.empty()) return false;
  auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; };
  auto it = std::search(visible.begin(), visible.end(), secret.begin(), secret.end(),
                        [&](char a, char b) { return lower(a) == lower(b); });
  return it != visible.end();
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); }

template <typename Strings>
void require_filled(const Strings& items, const std::string& what) {
  for (const auto& s : items) {
    if (s.empty()) invalid(what + " has an empty entry");
  }
}

std::vector<std::string> visible_strings(const QuestionAssets& a) {
  std::vector<std::string> out{a.correct.ref, a.correct.label, a.correct.cue};
  for (const auto& d : a.distractors) {
    out.insert(out.end(), {d.ref, d.label, d.cue});
  }
  out.insert(out.end(), a.recall_pictures.begin(), a.recall_pictures.end());
  out.insert(out.end(), a.recall_cues.begin(), a.recall_cues.end());
  return out;
}

}  // namespace

void validate_config(const GameConfig& config) {
  if (config.standard_pool.size() != kStandardPoolSize) {
    invalid("standard pool must hold exactly 7 challenges, got " +
            std::to_string(config.standard_pool.size()));
  }
  std::set<std::string> standard_ids;
  for (const auto& spec : config.standard_pool) {
    if (spec.id.empty() || !standard_ids.insert(spec.id).second) {
      invalid("standard challenge ids must be non-empty and unique");
    }
    std::string normalized;
    try {
      normalized = validate_bank_answer(AnswerClass::Letters, spec.answer);
    } catch (const Error& e) {
      invalid("standard challenge " + spec.id + ": " + e.what());
    }
    if (normalized != spec.answer) invalid("standard challenge " + spec.id + " answer is not normalized");
    require_filled(spec.pictures, "standard challenge " + spec.id + " pictures");
    for (const auto& text : spec.pictures) {
      if (mentions_secret(text, spec.answer)) invalid("standard challenge " + spec.id + " picture reveals its answer");
    }
    for (const auto& text : spec.cues) {
      if (mentions_secret(text, spec.answer)) invalid("standard challenge " + spec.id + " cue reveals its answer");
    }
  }

  const auto& entries = config.question_set.entries;
  if (entries.size() != kQuestionsPerSet) invalid("question set must hold exactly 3 questions");
  std::set<std::string> question_ids;
  for (const auto& e : entries) {
    if (!question_ids.insert(e.question_id).second) invalid("question set repeats " + e.question_id);
    try {
      const auto& q = find_question(load_catalog(), e.question_id);
      if (validate_configured_answer(q, e.answer) != e.answer) {
        invalid("answer for " + e.question_id + " is not normalized");
      }
    } catch (const Error& err) {
      if (err.code() == ErrorCode::InvalidConfig) throw;
      invalid("question " + e.question_id + ": " + err.what());
    }
  }

  if (config.question_assets.size() != kQuestionsPerSet) invalid("expected assets for exactly 3 questions");
  std::set<std::string> asset_ids;
  for (const auto& a : config.question_assets) {
    if (!question_ids.contains(a.question_id) || !asset_ids.insert(a.question_id).second) {
      invalid("question assets must cover each chosen question once");
    }
    if (a.distractors.size() < kRecognitionOptions - 1) {
      invalid("question " + a.question_id + " needs at least 3 distractor pictures");
    }
    const auto strings = visible_strings(a);
    require_filled(std::vector<std::string>{a.correct.ref, a.correct.label}, "question " + a.question_id + " picture");
    for (const auto& d : a.distractors) {
      require_filled(std::vector<std::string>{d.ref, d.label}, "question " + a.question_id + " distractor");
    }
    require_filled(a.recall_pictures, "question " + a.question_id + " recall pictures");
    for (const auto& text : strings) {
      for (const auto& e : entries) {
        if (mentions_secret(text, e.answer)) {
          invalid("assets of question " + a.question_id + " reveal a configured answer");
        }
      }
    }
  }

  if (config.points.standard <= 0 || config.points.recognition <= 0 || config.points.recall <= 0) {
    invalid("point values must be positive");
  }
  if (config.hint_cost <= 0) invalid("hint cost must be positive");
  if (config.cue_unlock_threshold < 0) invalid("cue unlock threshold must be non-negative");
}

void to_json(json& j, const GameConfig& c) {
  j = json::object();
  j["rng_seed"] = c.rng_seed;
  j["points"] = {{"standard", c.points.standard},
                 {"recognition", c.points.recognition},
                 {"recall", c.points.recall}};
  j["hint_cost"] = c.hint_cost;
  j["cue_unlock_threshold"] = c.cue_unlock_threshold;
  json pool = json::array();
  for (const auto& s : c.standard_pool) {
    pool.push_back({{"id", s.id}, {"answer", s.answer}, {"pictures", s.pictures}, {"cues", s.cues}});
  }
  j["standard_pool"] = pool;
  json set = json::array();
  for (const auto& e : c.question_set.entries) {
    set.push_back({{"question_id", e.question_id}, {"answer", e.answer}});
  }
  j["question_set"] = set;
  auto option = [](const PictureOption& o) { return json{{"ref", o.ref}, {"label", o.label}, {"cue", o.cue}}; };
  json assets = json::array();
  for (const auto& a : c.question_assets) {
    json distractors = json::array();
    for (const auto& d : a.distractors) distractors.push_back(option(d));
    assets.push_back({{"question_id", a.question_id},
                      {"correct", option(a.correct)},
                      {"distractors", distractors},
                      {"recall_pictures", a.recall_pictures},
                      {"recall_cues", a.recall_cues}});
  }
  j["question_assets"] = assets;
}

void from_json(const json& j, GameConfig& c) {
  try {
    c = GameConfig{};
    c.rng_seed = j.value("rng_seed", std::uint64_t{0});
    if (j.contains("points")) {
      const auto& p = j.at("points");
      c.points.standard = p.value("standard", 10);
      c.points.recognition = p.value("recognition", 15);
      c.points.recall = p.value("recall", 20);
    }
    c.hint_cost = j.value("hint_cost", 50);
    c.cue_unlock_threshold = j.value("cue_unlock_threshold", 50);
    for (const auto& s : j.at("standard_pool")) {
      c.standard_pool.push_back({s.at("id").get<std::string>(), s.at("answer").get<std::string>(),
                                 s.at("pictures").get<std::array<std::string, 4>>(),
                                 s.at("cues").get<std::array<std::string, 4>>()});
    }
    for (const auto& e : j.at("question_set")) {
      c.question_set.entries.push_back({e.at("question_id").get<std::string>(), e.at("answer").get<std::string>()});
    }
    auto option = [](const json& o) {
      return PictureOption{o.at("ref").get<std::string>(), o.at("label").get<std::string>(),
                           o.value("cue", std::string{})};
    };
    for (const auto& a : j.at("question_assets")) {
      QuestionAssets qa;
      qa.question_id = a.at("question_id").get<std::string>();
      qa.correct = option(a.at("correct"));
      for (const auto& d : a.at("distractors")) qa.distractors.push_back(option(d));
      qa.recall_pictures = a.at("recall_pictures").get<std::array<std::string, 4>>();
      qa.recall_cues = a.at("recall_cues").get<std::array<std::string, 4>>();
      c.question_assets.push_back(std::move(qa));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed game config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Serialization of player-facing records

namespace {

constexpr std::array<std::string_view, 10> kViewKeys{
    "kind", "pictures", "bank", "removed", "options", "cues",
    "score", "cues_enabled", "cues_unlockable", "hint_available"};
constexpr std::array<std::string_view, 4> kOutcomeKeys{
    "correct", "points_delta", "challenge_completed", "game_finished"};

}  // namespace

std::span<const std::string_view> view_keys() { return kViewKeys; }
std::span<const std::string_view> outcome_keys() { return kOutcomeKeys; }

void to_json(json& j, const Outcome& o) {
  j = json{{"correct", o.correct},
           {"points_delta", o.points_delta},
           {"challenge_completed", o.challenge_completed},
           {"game_finished", o.game_finished}};
}

void to_json(json& j, const ChallengeView& v) {
  j = json::object();
  j["kind"] = to_string(v.kind);
  j["pictures"] = v.pictures;
  if (v.kind == ChallengeKind::Recognition) {
    j["options"] = v.options;
  } else {
    j["bank"] = v.bank;
    j["removed"] = v.removed;
  }
  if (v.cues_enabled) j["cues"] = v.cues;
  j["score"] = v.score;
  j["cues_enabled"] = v.cues_enabled;
  j["cues_unlockable"] = v.cues_unlockable;
  j["hint_available"] = v.hint_available;
}

// ---------------------------------------------------------------------------
// Engine

namespace {

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::size_t take_random(std::vector<std::size_t>& remaining, Rng& rng) {
  const std::size_t pos = rng.below(remaining.size());
  const std::size_t value = remaining[pos];
  remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
  return value;
}

const QuestionAssets& assets_for(const GameConfig& config, const std::string& question_id) {
  for (const auto& a : config.question_assets) {
    if (a.question_id == question_id) return a;
  }
  throw Error(ErrorCode::InvalidConfig, "no assets for " + question_id);
}

Challenge make_standard(const StandardSpec& spec, Rng& rng) {
  Challenge c;
  c.kind = ChallengeKind::Standard;
  c.source_id = spec.id;
  c.pictures = spec.pictures;
  c.cues = spec.cues;
  c.secret_answer = spec.answer;
  c.bank = build_letter_bank(spec.answer, AnswerClass::Letters, rng);
  return c;
}

Challenge make_recognition(const GameConfig& config, const QuestionAnswer& entry, Rng& rng) {
  const auto& assets = assets_for(config, entry.question_id);
  std::vector<std::size_t> distractor_order = iota_indices(assets.distractors.size());
  rng.shuffle(distractor_order);

  std::vector<std::pair<const PictureOption*, bool>> options{{&assets.correct, true}};
  for (std::size_t i = 0; i + 1 < kRecognitionOptions; ++i) {
    options.emplace_back(&assets.distractors[distractor_order[i]], false);
  }
  rng.shuffle(options);

  Challenge c;
  c.kind = ChallengeKind::Recognition;
  c.source_id = entry.question_id;
  for (std::size_t i = 0; i < kRecognitionOptions; ++i) {
    c.pictures[i] = options[i].first->ref;
    c.cues[i] = options[i].first->cue;
    c.options[i] = options[i].first->label;
    if (options[i].second) c.correct_option = static_cast<int>(i);
  }
  return c;
}

Challenge make_recall(const GameConfig& config, const QuestionAnswer& entry, Rng& rng) {
  const auto& assets = assets_for(config, entry.question_id);
  const auto& question = find_question(load_catalog(), entry.question_id);
  Challenge c;
  c.kind = ChallengeKind::Recall;
  c.source_id = entry.question_id;
  c.pictures = assets.recall_pictures;
  c.cues = assets.recall_cues;
  c.secret_answer = entry.answer;
  c.bank = build_letter_bank(entry.answer, question.answer_class, rng);
  return c;
}

Phase phase_for_slot(std::size_t slot) {
  if (slot < 6) return Phase::RecognitionPhase;
  if (slot < 12) return Phase::RecallPhase;
  if (slot < kSchedule.size()) return Phase::FinalStandard;
  return Phase::Finished;
}

void issue_challenge(GameState& s) {
  const GameConfig& config = *s.config;
  const auto& entries = config.question_set.entries;
  switch (kSchedule[s.slot]) {
    case ChallengeKind::Standard:
      s.active = make_standard(config.standard_pool[take_random(s.remaining_standard, s.rng)], s.rng);
      break;
    case ChallengeKind::Recognition:
      s.active = make_recognition(config, entries[take_random(s.remaining_recognition, s.rng)], s.rng);
      break;
    case ChallengeKind::Recall:
      s.active = make_recall(config, entries[take_random(s.remaining_recall, s.rng)], s.rng);
      break;
  }
  s.active_attempts = 0;
  s.active_hints = 0;
}

/// Records the active challenge as completed and moves to the next slot.
void advance_scheduler(GameState& s, bool solved) {
  s.history.push_back({s.active->kind, s.active->source_id, solved, s.active_attempts, s.active_hints});
  s.active.reset();
  ++s.slot;
  s.phase = phase_for_slot(s.slot);
  if (!s.finished()) issue_challenge(s);
}

void apply_delta(GameState& s, int delta) {
  s.score += delta;
  if (delta > 0) s.earned_total += delta;
}

const Challenge& require_active(const GameState& s) {
  if (s.finished() || !s.active) throw Error(ErrorCode::GameFinished, "the game is finished");
  return *s.active;
}

void require_text_kind(const Challenge& c) {
  if (c.kind == ChallengeKind::Recognition) {
    throw Error(ErrorCode::WrongChallengeKind, "the active challenge takes a picture choice");
  }
}

}  // namespace

GameState new_game(GameConfig config) {
  return new_game(std::make_shared<const GameConfig>(std::move(config)));
}

GameState new_game(std::shared_ptr<const GameConfig> config) {
  validate_config(*config);
  GameState s;
  s.config = std::move(config);
  s.rng = Rng(s.config->rng_seed);
  s.remaining_standard = iota_indices(s.config->standard_pool.size());
  s.remaining_recognition = iota_indices(kQuestionsPerSet);
  s.remaining_recall = iota_indices(kQuestionsPerSet);
  s.phase = phase_for_slot(0);
  issue_challenge(s);
  return s;
}

ChallengeView view_challenge(const GameState& s) {
  const Challenge& c = require_active(s);
  ChallengeView v;
  v.kind = c.kind;
  v.pictures = c.pictures;
  if (c.kind == ChallengeKind::Recognition) {
    v.options.assign(c.options.begin(), c.options.end());
  } else {
    for (std::size_t i = 0; i < c.bank->symbols.size(); ++i) {
      v.bank.emplace_back(1, c.bank->symbols[i]);
      if (c.bank->removed[i]) v.removed.push_back(i);
    }
    v.hint_available = s.score >= s.config->hint_cost && c.bank->fillers_left() > 0;
  }
  if (s.cues_enabled) v.cues.assign(c.cues.begin(), c.cues.end());
  v.score = s.score;
  v.cues_enabled = s.cues_enabled;
  v.cues_unlockable = s.earned_total >= s.config->cue_unlock_threshold;
  return v;
}

Transition submit_text_answer(const GameState& state, std::string_view text) {
  const Challenge& c = require_active(state);
  require_text_kind(c);
  GameState next = state;
  ++next.active_attempts;
  const int points = state.config->points.for_kind(c.kind);

  bool correct = false;
  try {
    correct = normalize_answer(text) == c.secret_answer;
  } catch (const Error&) {
    correct = false;  // blank input is simply wrong
  }

  Outcome out;
  out.correct = correct;
  out.points_delta = correct ? points : -points;
  apply_delta(next, out.points_delta);
  if (correct) {
    advance_scheduler(next, true);
    out.challenge_completed = true;
  }
  out.game_finished = next.finished();
  return {std::move(next), out};
}

Transition submit_option(const GameState& state, int index) {
  const Challenge& c = require_active(state);
  if (c.kind != ChallengeKind::Recognition) {
    throw Error(ErrorCode::WrongChallengeKind, "the active challenge takes a text answer");
  }
  if (index < 0 || index >= static_cast<int>(kRecognitionOptions)) {
    throw Error(ErrorCode::IndexOutOfRange, "option index must be 0..3");
  }
  GameState next = state;
  ++next.active_attempts;
  const int points = state.config->points.recognition;
  Outcome out;
  out.correct = index == c.correct_option;
  out.points_delta = out.correct ? points : -points;
  apply_delta(next, out.points_delta);
  advance_scheduler(next, out.correct);
  out.challenge_completed = true;
  out.game_finished = next.finished();
  return {std::move(next), out};
}

HintResult buy_hint(const GameState& state) {
  const Challenge& c = require_active(state);
  if (c.kind == ChallengeKind::Recognition) {
    throw Error(ErrorCode::HintUnavailableForRecognition, "no hints for recognition challenges");
  }
  const int cost = state.config->hint_cost;
  if (state.score < cost) throw Error(ErrorCode::InsufficientPoints, "not enough points for a hint");
  if (c.bank->fillers_left() == 0) throw Error(ErrorCode::NoFillersLeft, "no symbols left to remove");

  GameState next = state;
  const auto removed = remove_random_filler(*next.active->bank, next.rng);
  next.score -= cost;
  ++next.active_hints;
  Outcome out;
  out.points_delta = -cost;
  return {std::move(next), out, *removed};
}

GameState enable_cues(const GameState& state) {
  require_active(state);
  if (state.cues_enabled) return state;
  if (state.earned_total < state.config->cue_unlock_threshold) {
    throw Error(ErrorCode::ThresholdNotReached, "cues unlock after earning " +
                                                    std::to_string(state.config->cue_unlock_threshold) +
                                                    " points");
  }
  GameState next = state;
  next.cues_enabled = true;
  return next;
}

Transition skip_challenge(const GameState& state) {
  const Challenge& c = require_active(state);
  require_text_kind(c);
  GameState next = state;
  Outcome out;
  out.points_delta = -state.config->points.for_kind(c.kind);
  apply_delta(next, out.points_delta);
  advance_scheduler(next, false);
  out.challenge_completed = true;
  out.game_finished = next.finished();
  return {std::move(next), out};
}

Transition apply_command(const GameState& state, const Command& command) {
  switch (command.type) {
    case CommandType::Answer: return submit_text_answer(state, command.text);
    case CommandType::Choice: return submit_option(state, command.index);
    case CommandType::Hint: {
      auto r = buy_hint(state);
      return {std::move(r.state), r.outcome};
    }
    case CommandType::Cues: return {enable_cues(state), Outcome{}};
    case CommandType::Skip: return skip_challenge(state);
    case CommandType::Start: break;
  }
  throw Error(ErrorCode::BadRequest, "start is not a game command");
}

json state_digest(const GameState& s) {
  json j;
  j["phase"] = to_string(s.phase);
  j["score"] = s.score;
  j["earned_total"] = s.earned_total;
  j["cues_enabled"] = s.cues_enabled;
  j["slot"] = s.slot;
  j["remaining_standard"] = s.remaining_standard;
  j["remaining_recognition"] = s.remaining_recognition;
  j["remaining_recall"] = s.remaining_recall;
  j["active_attempts"] = s.active_attempts;
  j["active_hints"] = s.active_hints;
  if (s.active) {
    const Challenge& c = *s.active;
    json a{{"kind", to_string(c.kind)}, {"source_id", c.source_id},   {"pictures", c.pictures},
           {"cues", c.cues},            {"secret", c.secret_answer},  {"options", c.options},
           {"correct_option", c.correct_option}};
    if (c.bank) {
      a["bank"] = {{"symbols", std::string(c.bank->symbols.begin(), c.bank->symbols.end())},
                   {"removed", c.bank->removed},
                   {"reserved", c.bank->reserved}};
    }
    j["active"] = a;
  }
  json history = json::array();
  for (const auto& h : s.history) {
    history.push_back({to_string(h.kind), h.source_id, h.solved, h.attempts, h.hints});
  }
  j["history"] = history;
  j["rng"] = fnv1a(s.rng.state());
  return j;
}

std::uint64_t state_hash(const GameState& s) { return fnv1a(state_digest(s).dump()); }

}  // namespace sqgame
