#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "sqgame/analysis.hpp"
#include "sqgame/event_log.hpp"
#include "study_support.hpp"

using namespace sqgame;
using nlohmann::json;
using testing::FakeClock;

namespace {

struct Fixture {
  testing::TempDir dir;
  FakeClock clock;
  std::unique_ptr<StudyService> svc;

  explicit Fixture(bool test_mode = true) { restart(test_mode); }
  void restart(bool test_mode = true) {
    svc.reset();
    svc = std::make_unique<StudyService>(testing::service_config(dir.path, test_mode, clock));
  }
  std::string new_session(Group g) { return svc->create_session(svc->create_participant(GroupPolicy::fixed(g)).id).id; }
};

std::vector<Stage> transitions(const std::vector<json>& events) {
  std::vector<Stage> out{Stage::Setup};
  for (const auto& e : events) {
    if (e.at("type") == "stage") {
      CHECK(parse_stage(e.at("from").get<std::string>()) == out.back());
      out.push_back(parse_stage(e.at("to").get<std::string>()));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("balanced random assignment") {
  Fixture f;
  int own = 0, profile = 0;
  for (int i = 0; i < 20; ++i) {
    const auto p = f.svc->create_participant(GroupPolicy::balanced_random(3));
    (p.group == Group::OwnAnswers ? own : profile)++;
    CHECK(std::abs(own - profile) <= 1);
  }
  CHECK(own == 10);
  CHECK(profile == 10);
  const auto p = f.svc->create_participant(GroupPolicy::fixed(Group::OwnAnswers));
  CHECK(p.group == Group::OwnAnswers);
  CHECK(f.svc->participants().size() == 21);
  CHECK_CODE(f.svc->create_session("p9999"), ErrorCode::NotFound);
  CHECK_CODE(f.svc->session("s9999"), ErrorCode::NotFound);
}

TEST_CASE("own-answer setup") {
  Fixture f;
  const auto sid = f.new_session(Group::OwnAnswers);
  CHECK(f.svc->session(sid).stage == Stage::Setup);
  CHECK_CODE(f.svc->offered_profiles(sid), ErrorCode::WrongGroup);
  CHECK_CODE(f.svc->setup_from_profile(sid, 0, testing::profile_questions()), ErrorCode::WrongGroup);
  std::vector<std::pair<std::string, std::string>> long_answer{
      {"mothers_maiden", "this is a very long answer"}, {"last6_visa", "043015"}, {"favourite_food", "noodles"}};
  CHECK_CODE(f.svc->setup_own_answers(sid, long_answer), ErrorCode::TooLongForBank);
  CHECK(f.svc->session(sid).stage == Stage::Setup);
  CHECK_CODE(f.svc->advance_stage(sid), ErrorCode::StageIncomplete);

  const auto s = f.svc->setup_own_answers(sid, testing::own_choices());
  CHECK(s.stage == Stage::Memorize);
  CHECK(s.question_set->entries[0].answer == "salisbury");
  CHECK_CODE(f.svc->setup_own_answers(sid, testing::own_choices()), ErrorCode::WrongStage);

  const auto group2 = f.new_session(Group::SystemProfile);
  CHECK_CODE(f.svc->setup_own_answers(group2, testing::own_choices()), ErrorCode::WrongGroup);
}

TEST_CASE("profile setup derives answers from the chosen profile") {
  Fixture f;
  const auto sid = f.new_session(Group::SystemProfile);
  const auto offered = f.svc->offered_profiles(sid);
  CHECK(offered[0].gender != offered[1].gender);
  auto ids = testing::profile_questions();
  ids.push_back("favourite_pet");
  CHECK_CODE(f.svc->setup_from_profile(sid, 0, ids), ErrorCode::WrongCount);
  CHECK_CODE(f.svc->setup_from_profile(sid, 2, testing::profile_questions()), ErrorCode::OutOfRange);
  const auto s = f.svc->setup_from_profile(sid, 0, testing::profile_questions());
  CHECK(s.stage == Stage::Memorize);
  CHECK(*s.chosen_profile == 0);
  for (const auto& e : s.question_set->entries) CHECK(e.answer == derive_answer(offered[0], e.question_id));
  const auto sheet = f.svc->memorize_sheet(sid);
  CHECK(sheet.at("entries").size() == 3);
  CHECK(sheet.at("profile").at("full_name") == offered[0].full_name);
}

TEST_CASE("stage timers") {
  Fixture f(false);
  const auto sid = f.new_session(Group::OwnAnswers);
  f.svc->setup_own_answers(sid, testing::own_choices());
  f.clock.advance_ms(3 * 60 * 1000);
  CHECK_CODE(f.svc->advance_stage(sid), ErrorCode::TimerNotElapsed);
  f.clock.advance_ms(2 * 60 * 1000);
  const auto s = f.svc->advance_stage(sid);
  CHECK(s.stage == Stage::Tlx1);
  CHECK(s.stage_elapsed_ms.at(Stage::Memorize) == 5 * 60 * 1000);
}

TEST_CASE("test mode lifts the timers") {
  Fixture f(true);
  const auto sid = f.new_session(Group::OwnAnswers);
  f.svc->setup_own_answers(sid, testing::own_choices());
  CHECK(f.svc->advance_stage(sid).stage == Stage::Tlx1);
}

TEST_CASE("workload questionnaires") {
  Fixture f;
  const auto sid = f.new_session(Group::OwnAnswers);
  f.svc->setup_own_answers(sid, testing::own_choices());
  CHECK_CODE(f.svc->record_tlx(sid, std::nullopt, testing::kTlx), ErrorCode::WrongStage);
  f.svc->advance_stage(sid);
  CHECK_CODE(f.svc->advance_stage(sid), ErrorCode::StageIncomplete);
  CHECK_CODE(f.svc->record_tlx(sid, std::nullopt, {105, 1, 1, 1, 1, 1}), ErrorCode::OutOfRange);
  CHECK_CODE(f.svc->record_tlx(sid, Stage::Tlx2, testing::kTlx), ErrorCode::WrongStage);
  const auto s = f.svc->record_tlx(sid, std::nullopt, testing::kTlx);
  CHECK(s.tlx.at(Stage::Tlx1) == testing::kTlx);
  CHECK_CODE(f.svc->record_tlx(sid, Stage::Tlx1, {1, 1, 1, 1, 1, 1}), ErrorCode::DuplicateSubmission);
  CHECK(f.svc->session(sid).tlx.at(Stage::Tlx1) == testing::kTlx);
  CHECK(f.svc->advance_stage(sid).stage == Stage::Distraction1);
}

TEST_CASE("distraction drills") {
  Fixture f;
  const auto sid = f.new_session(Group::OwnAnswers);
  f.svc->setup_own_answers(sid, testing::own_choices());
  CHECK_CODE(f.svc->distraction_items(sid, 10), ErrorCode::WrongStage);
  f.svc->advance_stage(sid);
  f.svc->record_tlx(sid, std::nullopt, testing::kTlx);
  f.svc->advance_stage(sid);
  const auto a = f.svc->distraction_items(sid, 10);
  const auto b = f.svc->distraction_items(sid, 10);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].prompt == b[i].prompt);
    CHECK(a[i].answer == b[i].answer);
  }
  // check every item's arithmetic
  for (const auto& item : make_distraction_items("any", Stage::Distraction2, 200)) {
    int x = 0, y = 0;
    if (std::sscanf(item.prompt.c_str(), "%d = %d", &x, &y) == 2) {
      CHECK(x == y * item.answer);
    } else {
      REQUIRE(std::sscanf(item.prompt.c_str(), "%d", &x) == 1);
      const auto minus = item.prompt.find("\xE2\x88\x92");
      REQUIRE(minus != std::string::npos);
      y = std::stoi(item.prompt.substr(minus + 3));
      CHECK(x - y == item.answer);
    }
  }
  std::vector<int> answers;
  for (const auto& item : a) answers.push_back(item.answer);
  answers[3] += 1;
  CHECK(f.svc->submit_distraction(sid, answers) == 9);
  CHECK(f.svc->advance_stage(sid).stage == Stage::Play);
  CHECK_CODE(f.svc->distraction_items(sid, 10), ErrorCode::WrongStage);
}

TEST_CASE("factor drill example") {
  bool found = false;
  for (int s = 0; s < 200 && !found; ++s) {
    for (const auto& item : make_distraction_items("s" + std::to_string(s), Stage::Distraction1, 40)) {
      if (item.prompt == "84 = 7 \xC3\x97 ?") {
        CHECK(item.answer == 12);
        found = true;
      }
    }
  }
  CHECK(found);
}

TEST_CASE("game commands through the service") {
  Fixture f;
  const auto sid = f.new_session(Group::OwnAnswers);
  f.svc->setup_own_answers(sid, testing::own_choices());
  for (int i = 0; i < 3; ++i) {
    if (is_tlx_stage(f.svc->session(sid).stage)) f.svc->record_tlx(sid, std::nullopt, testing::kTlx);
    f.svc->advance_stage(sid);
  }
  const auto s = f.svc->session(sid);
  REQUIRE(s.stage == Stage::Play);
  REQUIRE(s.game_id);
  CHECK(f.svc->session_of_game(*s.game_id) == sid);
  CHECK_CODE(f.svc->advance_stage(sid), ErrorCode::StageIncomplete);

  auto mirror = new_game(testing::session_game_config(*f.svc, sid));
  const auto r = f.svc->game_command(*s.game_id, testing::perfect_move(mirror));
  CHECK(r.outcome.points_delta == 10);
  CHECK(r.outcome.correct);
  REQUIRE(r.view);
  CHECK(r.view->kind == ChallengeKind::Recognition);
  CHECK_CODE(f.svc->game_command(*s.game_id, Command::answer("x")), ErrorCode::WrongChallengeKind);
  CHECK_CODE(f.svc->game_command("g9999", Command::hint()), ErrorCode::NotFound);
}

TEST_CASE("commands outside Play are rejected") {
  Fixture f;
  const auto sid = f.new_session(Group::OwnAnswers);
  testing::drive_to_done(*f.svc, sid, f.clock);
  const auto gid = *f.svc->session(sid).game_id;
  CHECK_CODE(f.svc->game_command(gid, Command::skip()), ErrorCode::WrongStage);
  CHECK_CODE(f.svc->game_view(gid), ErrorCode::WrongStage);
  CHECK_CODE(f.svc->advance_stage(sid), ErrorCode::WrongStage);
}

TEST_CASE("recall test") {
  Fixture f;
  const auto sid = f.new_session(Group::OwnAnswers);
  f.svc->setup_own_answers(sid, testing::own_choices());
  std::vector<std::string> answers{"SALISBURY", "043015", "noodles"};
  CHECK_CODE(f.svc->submit_recall_test(sid, answers), ErrorCode::WrongStage);
  while (f.svc->session(sid).stage != Stage::RecallTest) {
    const auto st = f.svc->session(sid).stage;
    if (is_tlx_stage(st)) f.svc->record_tlx(sid, st, testing::kTlx);
    if (st == Stage::Play) testing::play_through(*f.svc, sid, f.clock);
    f.svc->advance_stage(sid);
  }
  CHECK_CODE(f.svc->advance_stage(sid), ErrorCode::StageIncomplete);
  std::vector<std::string> two{"salisbury", "043015"};
  CHECK_CODE(f.svc->submit_recall_test(sid, two), ErrorCode::WrongCount);
  CHECK(f.svc->submit_recall_test(sid, answers) == 1.0);
  CHECK_CODE(f.svc->submit_recall_test(sid, answers), ErrorCode::DuplicateSubmission);
  CHECK(f.svc->advance_stage(sid).stage == Stage::Tlx3);
}

TEST_CASE("full sessions obey the stage machine") {
  Fixture f;
  for (auto g : {Group::OwnAnswers, Group::SystemProfile}) {
    const auto sid = f.new_session(g);
    testing::drive_to_done(*f.svc, sid, f.clock);
    const auto s = f.svc->session(sid);
    CHECK(s.stage == Stage::Done);
    CHECK(s.tlx.size() == 3);
    CHECK(s.recall_answers);
    CHECK(*s.memorability == 1.0);
    const auto events = f.svc->session_events(sid);
    const auto stages = transitions(events);
    CHECK(stages.size() == 10);
    CHECK(stages.back() == Stage::Done);
    int tlx = 0, recall = 0;
    for (const auto& e : events) {
      tlx += e.at("type") == "tlx";
      recall += e.at("type") == "recall_test";
    }
    CHECK(tlx == 3);
    CHECK(recall == 1);
  }
}

TEST_CASE("group-two answers equal the chosen profile's derived answers") {
  Fixture f;
  for (int i = 0; i < 10; ++i) {
    const auto sid = f.new_session(Group::SystemProfile);
    const auto offered = f.svc->offered_profiles(sid);
    const int choice = i % 2;
    f.svc->setup_from_profile(sid, choice, testing::profile_questions());
    const auto session = f.svc->session(sid);
    for (const auto& e : session.question_set->entries) {
      CHECK(e.answer == derive_answer(offered[static_cast<std::size_t>(choice)], e.question_id));
    }
  }
}

TEST_CASE("session wire form never carries answers") {
  Fixture f;
  const auto sid = f.new_session(Group::OwnAnswers);
  auto check_clean = [&] {
    const auto text = session_to_wire(f.svc->session(sid)).dump();
    for (const auto& a : {"salisbury", "043015", "noodles"}) CHECK(text.find(a) == std::string::npos);
  };
  check_clean();
  f.svc->setup_own_answers(sid, testing::own_choices());
  while (f.svc->session(sid).stage != Stage::Done) {
    check_clean();
    const auto st = f.svc->session(sid).stage;
    if (is_tlx_stage(st)) f.svc->record_tlx(sid, st, testing::kTlx);
    if (st == Stage::Play) testing::play_through(*f.svc, sid, f.clock);
    if (st == Stage::RecallTest) f.svc->submit_recall_test(sid, testing::remembered(*f.svc, sid));
    f.svc->advance_stage(sid);
  }
  check_clean();
  CHECK_CODE(f.svc->memorize_sheet(sid), ErrorCode::WrongStage);
}

TEST_CASE("restart recovers identical state") {
  Fixture f;
  const auto a = f.new_session(Group::OwnAnswers);
  const auto b = f.new_session(Group::SystemProfile);
  testing::drive_to_done(*f.svc, a, f.clock);
  f.svc->setup_from_profile(b, 1, testing::profile_questions());
  for (int i = 0; i < 3; ++i) {
    const auto st = f.svc->session(b).stage;
    if (is_tlx_stage(st)) f.svc->record_tlx(b, st, testing::kTlx);
    f.svc->advance_stage(b);
  }
  REQUIRE(f.svc->session(b).stage == Stage::Play);
  const auto gid = *f.svc->session(b).game_id;
  auto mirror = new_game(testing::session_game_config(*f.svc, b));
  for (int i = 0; i < 5; ++i) {
    const auto cmd = testing::perfect_move(mirror);
    f.svc->game_command(gid, cmd);
    mirror = apply_command(mirror, cmd).state;
  }
  const auto hash_a = f.svc->session_hash(a);
  const auto hash_b = f.svc->session_hash(b);
  const auto view_b = json(f.svc->game_view(gid)).dump();
  const auto participants = f.svc->participants().size();

  f.restart();
  CHECK(f.svc->session_hash(a) == hash_a);
  CHECK(f.svc->session_hash(b) == hash_b);
  CHECK(json(f.svc->game_view(gid)).dump() == view_b);
  CHECK(f.svc->participants().size() == participants);

  // the recovered game keeps going where it stopped
  while (!mirror.finished()) {
    const auto cmd = testing::perfect_move(mirror);
    const auto r = f.svc->game_command(gid, cmd);
    mirror = apply_command(mirror, cmd).state;
    CHECK(r.score == mirror.score);
  }
  CHECK(mirror.score == 175);
  // new ids continue after the recovered ones
  const auto c = f.new_session(Group::OwnAnswers);
  CHECK(c != a);
  CHECK(c != b);
}

TEST_CASE("corrupted logs are refused") {
  Fixture f;
  const auto sid = f.new_session(Group::OwnAnswers);
  f.svc->setup_own_answers(sid, testing::own_choices());
  f.svc.reset();
  {
    std::ofstream out(f.dir.path / "sessions" / (sid + ".jsonl"), std::ios::app);
    out << R"({"type":"stage","from":"play","to":"tlx2","seq":3,"timestamp":5,"session_id":")" << sid << "\"}\n";
  }
  CHECK_CODE(f.restart(), ErrorCode::MalformedData);
}

TEST_CASE("racing commands on one game apply serially") {
  Fixture f;
  const auto sid = f.new_session(Group::OwnAnswers);
  f.svc->setup_own_answers(sid, testing::own_choices());
  for (int i = 0; i < 3; ++i) {
    if (is_tlx_stage(f.svc->session(sid).stage)) f.svc->record_tlx(sid, std::nullopt, testing::kTlx);
    f.svc->advance_stage(sid);
  }
  const auto gid = *f.svc->session(sid).game_id;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      std::mt19937 gen(static_cast<unsigned>(t));
      for (int i = 0; i < 40; ++i) {
        Command cmd;
        switch (gen() % 4) {
          case 0: cmd = Command::answer("zzz"); break;
          case 1: cmd = Command::choice(static_cast<int>(gen() % 4)); break;
          case 2: cmd = Command::skip(); break;
          default: cmd = Command::hint(); break;
        }
        try {
          f.svc->game_command(gid, cmd);
        } catch (const Error&) {
        }
      }
    });
  }
  // a second session proceeds meanwhile
  const auto other = f.new_session(Group::SystemProfile);
  testing::drive_to_done(*f.svc, other, f.clock);
  for (auto& th : threads) th.join();

  std::vector<GameEvent> events;
  for (const auto& e : f.svc->session_events(sid)) {
    if (e.at("type") == "game") events.push_back(e.at("event").get<GameEvent>());
  }
  auto cfg = std::make_shared<const GameConfig>(testing::session_game_config(*f.svc, sid));
  GameRecorder start(gid, cfg, f.svc->session(sid).stage_entered_at_ms);
  events.insert(events.begin(), start.events().front());
  const auto replayed = replay_events(cfg, events);
  const auto hash = f.svc->session_hash(sid);
  f.restart();
  CHECK(f.svc->session_hash(sid) == hash);
  CHECK(replayed.score == events.back().score);
  CHECK(f.svc->session(other).stage == Stage::Done);
}

TEST_CASE("export") {
  Fixture f;
  auto empty = f.svc->export_study();
  CHECK(empty.at("tlx.csv") == "participant_id,group,task,mental,physical,temporal,performance,effort,frustration\n");
  CHECK(empty.at("sessions.csv").find('\n') == empty.at("sessions.csv").size() - 1);
  std::stringstream empty_tlx(empty.at("tlx.csv"));
  CHECK(read_tlx_csv(empty_tlx).empty());

  std::vector<std::string> sids;
  for (int i = 0; i < 20; ++i) {
    const auto p = f.svc->create_participant(GroupPolicy::balanced_random(8));
    sids.push_back(f.svc->create_session(p.id).id);
    testing::drive_to_done(*f.svc, sids.back(), f.clock);
  }
  // an unfinished session stays out of the export
  f.new_session(Group::OwnAnswers);

  const auto bundle = f.svc->export_study();
  CHECK(bundle == f.svc->export_study());
  std::stringstream tlx(bundle.at("tlx.csv"));
  const auto rows = read_tlx_csv(tlx);
  CHECK(rows.size() == 60);
  CHECK(compare_groups(rows).size() == 18);

  std::stringstream sessions(bundle.at("sessions.csv"));
  std::string line;
  std::getline(sessions, line);
  int n = 0;
  while (std::getline(sessions, line)) {
    ++n;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    const auto sid = cols.at(0);
    const auto gid = *f.svc->session(sid).game_id;
    std::stringstream log(bundle.at("games/" + gid + ".jsonl"));
    const auto events = read_jsonl(log);
    const auto cfg = std::make_shared<const GameConfig>(
        json::parse(bundle.at("games/" + gid + ".config.json")).get<GameConfig>());
    const auto replayed = replay_events(cfg, events);
    CHECK(replayed.score == std::stoi(cols.at(4)));
    CHECK(replayed.finished());
  }
  CHECK(n == 20);

  testing::TempDir out;
  f.svc->export_to(out.path);
  CHECK(std::filesystem::exists(out.path / "tlx.csv"));
  CHECK(std::filesystem::exists(out.path / "events" / (sids[0] + ".jsonl")));
}
