#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "sqgame/bot.hpp"
#include "sqgame/event_log.hpp"
#include "sqgame/letter_bank.hpp"
#include "support.hpp"

using namespace sqgame;
using nlohmann::json;
using testing::advance_to;
using testing::perfect_move;

namespace {

std::multiset<char> chars_of(std::string_view s) {
  std::multiset<char> m;
  for (char c : s) {
    if (c != ' ') m.insert(c);
  }
  return m;
}

bool contains_all(const std::vector<char>& bank, std::string_view answer) {
  std::multiset<char> have(bank.begin(), bank.end());
  for (char c : answer) {
    if (c == ' ') continue;
    auto it = have.find(c);
    if (it == have.end()) return false;
    have.erase(it);
  }
  return true;
}

GameState lucas_game(std::uint64_t seed = 5) { return new_game(testing::config_for(testing::lucas_set(), seed)); }

}  // namespace

// ---- letter bank -------------------------------------------------------------

TEST_CASE("letter bank for a word") {
  Rng rng(1);
  const auto bank = build_letter_bank("walk", AnswerClass::Letters, rng);
  CHECK(bank.symbols.size() == kBankSize);
  CHECK(contains_all(bank.symbols, "walk"));
  for (char c : bank.symbols) CHECK((c >= 'a' && c <= 'z'));
  CHECK(bank.fillers_left() == 8);

  Rng a(77), b(77);
  CHECK(build_letter_bank("walk", AnswerClass::Letters, a) == build_letter_bank("walk", AnswerClass::Letters, b));
}

TEST_CASE("letter bank for digits") {
  Rng rng(2);
  const auto bank = build_letter_bank("043015", AnswerClass::Digits, rng);
  CHECK(bank.symbols.size() == kBankSize);
  CHECK(contains_all(bank.symbols, "043015"));
  for (char c : bank.symbols) CHECK((c >= '0' && c <= '9'));
}

TEST_CASE("letter bank rejects long answers") {
  Rng rng(3);
  CHECK_CODE(build_letter_bank("superdupermarathons", AnswerClass::Letters, rng), ErrorCode::TooLongForBank);
}

TEST_CASE("hints only ever remove fillers") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::string answer;
    const int len = 1 + static_cast<int>(gen() % 12);
    for (int i = 0; i < len; ++i) answer += static_cast<char>('a' + gen() % 26);
    Rng rng(gen());
    auto bank = build_letter_bank(answer, AnswerClass::Letters, rng);
    REQUIRE(bank.symbols.size() == kBankSize);
    CHECK(std::count(bank.reserved.begin(), bank.reserved.end(), true) == len);
    std::size_t removed = 0;
    while (auto pos = remove_random_filler(bank, rng)) {
      CHECK_FALSE(bank.reserved[*pos]);
      ++removed;
      CHECK(bank_composes(bank, answer));
    }
    CHECK(removed == kBankSize - static_cast<std::size_t>(len));
    const auto left = bank.available();
    CHECK(chars_of(std::string(left.begin(), left.end())) == chars_of(answer));
  }
}

// ---- configuration -----------------------------------------------------------

TEST_CASE("config validation") {
  auto cfg = testing::config_for(testing::lucas_set(), 1);
  CHECK_NOTHROW(validate_config(cfg));

  auto six = cfg;
  six.standard_pool.pop_back();
  CHECK_CODE(new_game(six), ErrorCode::InvalidConfig);

  auto leaky_picture = cfg;
  leaky_picture.question_assets[0].recall_pictures[2] = "photos/Salisbury.png";
  CHECK_CODE(validate_config(leaky_picture), ErrorCode::InvalidConfig);

  auto leaky_cue = cfg;
  leaky_cue.standard_pool[0].cues[1] = "take a WALK";
  CHECK_CODE(validate_config(leaky_cue), ErrorCode::InvalidConfig);

  auto few_distractors = cfg;
  few_distractors.question_assets[1].distractors.resize(2);
  CHECK_CODE(validate_config(few_distractors), ErrorCode::InvalidConfig);

  auto dup = cfg;
  dup.standard_pool[1].id = dup.standard_pool[0].id;
  CHECK_CODE(validate_config(dup), ErrorCode::InvalidConfig);

  auto bad_points = cfg;
  bad_points.points.recall = 0;
  CHECK_CODE(validate_config(bad_points), ErrorCode::InvalidConfig);
}

TEST_CASE("config json round trip") {
  const auto cfg = testing::config_for(testing::lucas_set(), 3);
  const json j = cfg;
  const GameConfig back = j.get<GameConfig>();
  CHECK(json(back) == j);
  testing::TempDir dir;
  save_game_config(dir.path / "c.json", cfg);
  CHECK(json(load_game_config(dir.path / "c.json")) == j);
  CHECK_CODE(json::parse(R"({"standard_pool": 3})").get<GameConfig>(), ErrorCode::InvalidConfig);
}

TEST_CASE("placeholder assets never mention an answer") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto set = testing::random_set(seed);
    CHECK_NOTHROW(validate_config(testing::config_for(set, seed)));
  }
  // answers that collide with the default placeholder wording
  std::vector<std::pair<std::string, std::string>> c{
      {"favourite_hobby", "tile"}, {"favourite_pet", "picture"}, {"favourite_food", "svg"}};
  const auto set = select_question_set(load_catalog(), c);
  CHECK_NOTHROW(validate_config(testing::config_for(set, 1)));
}

// ---- engine ------------------------------------------------------------------

TEST_CASE("new_game is deterministic and starts with a standard challenge") {
  const auto a = lucas_game(9);
  const auto b = lucas_game(9);
  CHECK(state_hash(a) == state_hash(b));
  CHECK(a.active->kind == ChallengeKind::Standard);
  CHECK(a.score == 0);
  CHECK(a.phase == Phase::RecognitionPhase);
  CHECK(state_hash(lucas_game(10)) != state_hash(a));
}

TEST_CASE("views carry no answer, length, or correct option") {
  auto s = lucas_game();
  const auto standard = view_challenge(s);
  CHECK(standard.bank.size() == kBankSize);
  CHECK(standard.cues.empty());
  CHECK_FALSE(json(standard).contains("cues"));

  s = advance_to(s, ChallengeKind::Recognition);
  const auto rec = view_challenge(s);
  CHECK(rec.options.size() == 4);
  CHECK(rec.bank.empty());
  CHECK_FALSE(rec.hint_available);

  s = advance_to(s, ChallengeKind::Recall);
  const auto recall = view_challenge(s);
  CHECK(recall.bank.size() == kBankSize);
  const json j = recall;
  CHECK(testing::find_leak(j, testing::secrets_for(s), view_keys()).empty());
  for (const auto& key : {"length", "answer_length", "slots", "correct_option", "answer"}) CHECK_FALSE(j.contains(key));
}

TEST_CASE("text answers score per attempt") {
  auto s = lucas_game();
  const auto wrong = submit_text_answer(s, "definitely wrong");
  CHECK(wrong.outcome.points_delta == -10);
  CHECK_FALSE(wrong.outcome.challenge_completed);
  CHECK(wrong.state.active->source_id == s.active->source_id);

  const auto right = submit_text_answer(s, "  " + s.active->secret_answer + " ");
  CHECK(right.outcome.correct);
  CHECK(right.outcome.points_delta == 10);
  CHECK(right.outcome.challenge_completed);

  auto r = advance_to(s, ChallengeKind::Recall);
  const int before = r.score;
  auto w1 = submit_text_answer(r, "zzzz");
  auto w2 = submit_text_answer(w1.state, "");
  CHECK(w1.outcome.points_delta == -20);
  CHECK(w2.outcome.points_delta == -20);
  CHECK(w2.state.score == before - 40);
  CHECK_FALSE(w2.outcome.challenge_completed);
  // the secret stays out of the outcome
  CHECK(testing::find_leak(json(w2.outcome), testing::secrets_for(r), outcome_keys()).empty());
  const auto ok = submit_text_answer(w2.state, testing::answer_of(r, r.active->source_id));
  CHECK(ok.outcome.points_delta == 20);
  CHECK_CODE(submit_option(r, 0), ErrorCode::WrongChallengeKind);
}

TEST_CASE("recognition allows one attempt") {
  auto s = advance_to(lucas_game(), ChallengeKind::Recognition);
  const int correct = s.active->correct_option;
  const auto right = submit_option(s, correct);
  CHECK(right.outcome.points_delta == 15);
  CHECK(right.outcome.challenge_completed);
  const auto wrong = submit_option(s, (correct + 1) % 4);
  CHECK(wrong.outcome.points_delta == -15);
  CHECK(wrong.outcome.challenge_completed);
  CHECK_FALSE(wrong.outcome.correct);
  CHECK(wrong.state.history.back().solved == false);
  CHECK_CODE(submit_option(s, 4), ErrorCode::IndexOutOfRange);
  CHECK_CODE(submit_option(s, -1), ErrorCode::IndexOutOfRange);
  CHECK_CODE(submit_text_answer(s, "x"), ErrorCode::WrongChallengeKind);
  CHECK_CODE(skip_challenge(s), ErrorCode::WrongChallengeKind);
  CHECK_CODE(buy_hint(s), ErrorCode::HintUnavailableForRecognition);
}

TEST_CASE("correct tile position varies") {
  std::set<int> positions;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    positions.insert(advance_to(lucas_game(seed), ChallengeKind::Recognition).active->correct_option);
  }
  CHECK(positions.size() == 4);
}

TEST_CASE("hints cost 50 and remove a filler") {
  auto s = lucas_game();
  s.score = 60;
  const auto h = buy_hint(s);
  CHECK(h.state.score == 10);
  CHECK(h.outcome.points_delta == -50);
  CHECK(h.state.active->bank->removed[h.removed_position]);
  CHECK_FALSE(h.state.active->bank->reserved[h.removed_position]);
  CHECK(view_challenge(h.state).removed == std::vector<std::size_t>{h.removed_position});

  s.score = 40;
  CHECK_CODE(buy_hint(s), ErrorCode::InsufficientPoints);
  CHECK_FALSE(view_challenge(s).hint_available);

  s.score = 10000;
  while (s.active->bank->fillers_left() > 0) s = buy_hint(s).state;
  CHECK(bank_composes(*s.active->bank, s.active->secret_answer));
  CHECK_CODE(buy_hint(s), ErrorCode::NoFillersLeft);
}

TEST_CASE("cues unlock at 50 earned points") {
  auto s = lucas_game();
  s.earned_total = 30;
  CHECK_CODE(enable_cues(s), ErrorCode::ThresholdNotReached);
  CHECK_FALSE(view_challenge(s).cues_unlockable);
  s.earned_total = 50;
  const auto on = enable_cues(s);
  CHECK(on.cues_enabled);
  CHECK(on.score == s.score);
  CHECK(view_challenge(on).cues.size() == 4);
  CHECK(state_hash(enable_cues(on)) == state_hash(on));
}

TEST_CASE("skip deducts once and fails the challenge") {
  auto s = lucas_game();
  const auto sk = skip_challenge(s);
  CHECK(sk.outcome.points_delta == -10);
  CHECK(sk.outcome.challenge_completed);
  CHECK_FALSE(sk.state.history.back().solved);
  auto r = advance_to(s, ChallengeKind::Recall);
  CHECK(skip_challenge(r).outcome.points_delta == -20);

  auto done = s;
  while (!done.finished()) done = apply_command(done, perfect_move(done)).state;
  CHECK_CODE(skip_challenge(done), ErrorCode::GameFinished);
  CHECK_CODE(view_challenge(done), ErrorCode::GameFinished);
  CHECK_CODE(buy_hint(done), ErrorCode::GameFinished);
}

TEST_CASE("perfect play scores 175 over the fixed schedule") {
  auto s = lucas_game();
  std::vector<ChallengeKind> kinds;
  std::set<std::string> seen;
  while (!s.finished()) {
    kinds.push_back(s.active->kind);
    CHECK(seen.insert(std::string(to_string(s.active->kind)) + s.active->source_id).second);
    s = apply_command(s, perfect_move(s)).state;
  }
  CHECK(std::equal(kinds.begin(), kinds.end(), kSchedule.begin(), kSchedule.end()));
  CHECK(s.score == 175);
  CHECK(s.earned_total == 175);
  CHECK(s.phase == Phase::Finished);
}

TEST_CASE("scheduler orderings vary across seeds") {
  std::set<std::string> orders;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto s = lucas_game(seed);
    std::string order;
    std::size_t i = 0;
    while (!s.finished()) {
      REQUIRE(s.active->kind == kSchedule[i++]);
      order += s.active->source_id + ",";
      s = apply_command(s, perfect_move(s)).state;
    }
    CHECK(i == kSchedule.size());
    orders.insert(order);
  }
  CHECK(orders.size() > 900);
}

TEST_CASE("accounting matches outcome deltas under random play") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = new_game(testing::config_for(testing::random_set(trial), trial));
    int sum = 0, earned = 0;
    int steps = 0;
    while (!s.finished() && steps++ < 200) {
      Command cmd;
      switch (gen() % 6) {
        case 0: cmd = Command::hint(); break;
        case 1: cmd = Command::cues(); break;
        case 2: cmd = Command::skip(); break;
        case 3: cmd = Command::choice(static_cast<int>(gen() % 4)); break;
        case 4: cmd = Command::answer("nope"); break;
        default: cmd = perfect_move(s); break;
      }
      try {
        const auto t = apply_command(s, cmd);
        sum += t.outcome.points_delta;
        if (t.outcome.points_delta > 0) earned += t.outcome.points_delta;
        s = t.state;
      } catch (const Error&) {
      }
      if (s.active && s.active->bank) CHECK(bank_composes(*s.active->bank, s.active->secret_answer));
    }
    CHECK(s.score == sum);
    CHECK(s.earned_total == earned);
  }
}

// ---- event log and replay ----------------------------------------------------

TEST_CASE("recorded games replay exactly") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto cfg = std::make_shared<const GameConfig>(testing::config_for(testing::random_set(trial + 1000), trial));
    GameRecorder rec("g", cfg, 1000);
    std::int64_t ts = 1000;
    while (!rec.state().finished()) {
      ts += 1000;
      const int roll = static_cast<int>(gen() % 5);
      Command cmd = roll == 0 ? Command::hint() : roll == 1 ? Command::answer("qqq") : perfect_move(rec.state());
      try {
        rec.apply(cmd, ts);
      } catch (const Error&) {
      }
    }
    std::stringstream io;
    write_jsonl(io, rec.events());
    const auto events = read_jsonl(io);
    CHECK(events == rec.events());
    CHECK(events.front().command == CommandType::Start);
    for (std::size_t i = 0; i < events.size(); ++i) CHECK(events[i].seq == i);
    const auto replayed = replay_events(cfg, events);
    CHECK(state_hash(replayed) == state_hash(rec.state()));
    CHECK(replayed.score == events.back().score);
  }
}

TEST_CASE("replay detects tampering") {
  auto cfg = std::make_shared<const GameConfig>(testing::config_for(testing::lucas_set(), 4));
  GameRecorder rec("g", cfg, 0);
  rec.apply(perfect_move(rec.state()), 10);
  rec.apply(Command::choice((rec.state().active->correct_option + 1) % 4), 20);
  auto events = rec.events();
  events[2].outcome_delta = 15;
  CHECK_CODE(replay_events(cfg, events), ErrorCode::MalformedData);
  events = rec.events();
  events[1].seq = 5;
  CHECK_CODE(replay_events(cfg, events), ErrorCode::MalformedData);
}

TEST_CASE("failed commands are not recorded") {
  auto cfg = std::make_shared<const GameConfig>(testing::config_for(testing::lucas_set(), 4));
  GameRecorder rec("g", cfg, 0);
  const auto before = state_hash(rec.state());
  CHECK_CODE(rec.apply(Command::hint(), 5), ErrorCode::InsufficientPoints);
  CHECK(rec.events().size() == 1);
  CHECK(state_hash(rec.state()) == before);
}

// ---- bot ---------------------------------------------------------------------

TEST_CASE("bot scores") {
  auto cfg = std::make_shared<const GameConfig>(testing::config_for(testing::lucas_set(), 2));
  BotPolicy perfect;
  CHECK(play_bot_game(cfg, perfect, "b").final_state.score == 175);

  BotPolicy hint = perfect;
  hint.hint_policy = HintPolicy::WhenAffordable;
  const auto run = play_bot_game(cfg, hint, "b");
  CHECK(run.final_state.score == 125);
  CHECK(std::count_if(run.events.begin(), run.events.end(),
                      [](const GameEvent& e) { return e.command == CommandType::Hint; }) == 1);

  BotPolicy no_recall = perfect;
  no_recall.p_recall = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    no_recall.seed = seed;
    int solved = 0;
    for (const auto& c : play_bot_game(cfg, no_recall, "b").final_state.history) {
      if (c.kind == ChallengeKind::Recall && c.solved) ++solved;
    }
    CHECK(solved == 0);
  }

  BotPolicy bad = perfect;
  bad.p_standard = 1.5;
  CHECK_CODE(validate_policy(bad), ErrorCode::InvalidConfig);
}

TEST_CASE("bot runs are byte-reproducible") {
  auto cfg = std::make_shared<const GameConfig>(testing::config_for(testing::lucas_set(), 2));
  BotPolicy p{0.6, 0.5, 0.4, HintPolicy::WhenAffordable, 2, 2, true, 99};
  std::stringstream a, b;
  write_jsonl(a, play_bot_game(cfg, p, "x", 500).events);
  write_jsonl(b, play_bot_game(cfg, p, "x", 500).events);
  CHECK(a.str() == b.str());
}

TEST_CASE("bot wrong answers never match") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto s = new_game(testing::config_for(testing::random_set(seed), seed));
    Rng rng(seed);
    while (!s.finished()) {
      if (s.active->bank) {
        const auto w = wrong_answer(*s.active, rng);
        CHECK_FALSE(submit_text_answer(s, w).outcome.correct);
      }
      s = apply_command(s, perfect_move(s)).state;
    }
  }
}

TEST_CASE("command names round trip") {
  for (auto c : {CommandType::Start, CommandType::Answer, CommandType::Choice, CommandType::Hint, CommandType::Cues,
                 CommandType::Skip}) {
    CHECK(parse_command_type(to_string(c)) == c);
  }
  for (auto k : {ChallengeKind::Standard, ChallengeKind::Recognition, ChallengeKind::Recall}) {
    CHECK(parse_challenge_kind(to_string(k)) == k);
  }
}
