#include "sqgame/study.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sqgame/content.hpp"
#include "sqgame/error.hpp"
#include "sqgame/rng.hpp"

namespace sqgame {

using nlohmann::json;

namespace {

constexpr std::array<Stage, 10> kStageOrder{Stage::Setup,        Stage::Memorize,   Stage::Tlx1, Stage::Distraction1,
                                            Stage::Play,         Stage::Tlx2,       Stage::Distraction2,
                                            Stage::RecallTest,   Stage::Tlx3,       Stage::Done};

Stage next_stage(Stage s) {
  auto it = std::find(kStageOrder.begin(), kStageOrder.end(), s);
  if (it == kStageOrder.end() || std::next(it) == kStageOrder.end()) {
    throw Error(ErrorCode::WrongStage, "the session is already done");
  }
  return *std::next(it);
}

std::string numbered(char prefix, std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%04llu", prefix, static_cast<unsigned long long>(n));
  return buf;
}

std::uint64_t number_of(const std::string& id) {
  try {
    return id.size() > 1 ? std::stoull(id.substr(1)) : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

json tlx_to_json(const TlxResponse& r) {
  json j = json::object();
  for (auto d : kTlxDimensions) j[std::string(to_string(d))] = r.get(d);
  return j;
}

TlxResponse tlx_from_json(const json& j) {
  return {j.at("mental").get<double>(),      j.at("physical").get<double>(), j.at("temporal").get<double>(),
          j.at("performance").get<double>(), j.at("effort").get<double>(),   j.at("frustration").get<double>()};
}

json question_set_to_json(const QuestionSet& set) {
  json arr = json::array();
  for (const auto& e : set.entries) arr.push_back({{"question_id", e.question_id}, {"answer", e.answer}});
  return arr;
}

QuestionSet question_set_from_json(const json& j) {
  QuestionSet set;
  for (const auto& e : j) set.entries.push_back({e.at("question_id").get<std::string>(), e.at("answer").get<std::string>()});
  return set;
}

void require_stage(const StudySession& s, Stage expected) {
  if (s.stage != expected) {
    throw Error(ErrorCode::WrongStage, "session is in stage " + std::string(to_string(s.stage)) + ", not " +
                                           std::string(to_string(expected)));
  }
}

}  // namespace

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Setup: return "setup";
    case Stage::Memorize: return "memorize";
    case Stage::Tlx1: return "tlx1";
    case Stage::Distraction1: return "distraction1";
    case Stage::Play: return "play";
    case Stage::Tlx2: return "tlx2";
    case Stage::Distraction2: return "distraction2";
    case Stage::RecallTest: return "recall_test";
    case Stage::Tlx3: return "tlx3";
    case Stage::Done: return "done";
  }
  return "?";
}

Stage parse_stage(std::string_view text) {
  for (auto s : kStageOrder) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::BadRequest, "unknown stage '" + std::string(text) + "'");
}

bool is_tlx_stage(Stage s) noexcept { return s == Stage::Tlx1 || s == Stage::Tlx2 || s == Stage::Tlx3; }

bool is_timed_stage(Stage s) noexcept {
  return s == Stage::Memorize || s == Stage::Distraction1 || s == Stage::Distraction2;
}

Task task_for_tlx(Stage s) {
  switch (s) {
    case Stage::Tlx1: return Task::Memorize;
    case Stage::Tlx2: return Task::Play;
    case Stage::Tlx3: return Task::Remember;
    default: throw Error(ErrorCode::WrongStage, "not a TLX stage");
  }
}

std::vector<DistractionItem> make_distraction_items(const std::string& session_id, Stage stage, int count) {
  Rng rng(fnv1a(session_id + "/" + std::string(to_string(stage))));
  std::vector<DistractionItem> items;
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      const int a = rng.between(2, 12);
      const int b = rng.between(2, 12);
      items.push_back({std::to_string(a * b) + " = " + std::to_string(a) + " \xC3\x97 ?", b});
    } else {
      const int from = rng.between(50, 200);
      const int minus = rng.between(3, 19);
      items.push_back({std::to_string(from) + " \xE2\x88\x92 " + std::to_string(minus) + " = ?", from - minus});
    }
  }
  return items;
}

json profile_to_json(const Profile& p) {
  return json{{"gender", to_string(p.gender)},
              {"full_name", p.full_name},
              {"birthday", format_date(p.birthday)},
              {"mothers_maiden", p.mothers_maiden},
              {"fathers_middle", p.fathers_middle},
              {"best_friend", p.best_friend},
              {"phone", p.phone},
              {"vehicle_registration", p.vehicle_registration},
              {"visa_number", p.visa_number},
              {"high_school_city", p.high_school_city},
              {"high_school_address", p.high_school_address},
              {"college_city", p.college_city},
              {"first_work_city", p.first_work_city},
              {"first_work_address", p.first_work_address},
              {"first_occupation", p.first_occupation},
              {"last_skill", p.last_skill},
              {"main_weakness", p.main_weakness},
              {"favourite_pet", p.favourite_pet},
              {"favourite_food", p.favourite_food},
              {"favourite_hobby", p.favourite_hobby}};
}

json session_to_wire(const StudySession& s) {
  json j{{"id", s.id},
         {"participant_id", s.participant_id},
         {"group", to_string(s.group)},
         {"stage", to_string(s.stage)},
         {"stage_entered_at", s.stage_entered_at_ms}};
  if (s.game_id) j["game_id"] = *s.game_id;
  if (s.chosen_profile) j["chosen_profile"] = *s.chosen_profile;
  j["tlx_stored"] = is_tlx_stage(s.stage) && s.tlx.contains(s.stage);
  j["recall_test_submitted"] = s.recall_answers.has_value();
  return j;
}

// ---------------------------------------------------------------------------

struct StudyService::Slot {
  mutable std::mutex mu;
  StudySession session;
  std::shared_ptr<const GameConfig> game_config;
  std::optional<GameRecorder> game;
  std::vector<json> events;
  std::filesystem::path log_path;
};

StudyService::StudyService(ServiceConfig config)
    : config_(std::move(config)),
      pools_(AttributePools::load(config_.pool_dir)),
      standard_pool_(load_standard_pool(config_.standard_pool_path)) {
  if (!config_.clock) {
    config_.clock = [] {
      return std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::system_clock::now().time_since_epoch())
          .count();
    };
  }
  std::filesystem::create_directories(config_.data_dir / "sessions");
  recover();
}

StudyService::~StudyService() = default;

std::int64_t StudyService::now() const { return config_.clock(); }

std::shared_ptr<StudyService::Slot> StudyService::slot(const std::string& session_id) const {
  std::lock_guard lock(registry_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no session '" + session_id + "'");
  return it->second;
}

std::shared_ptr<StudyService::Slot> StudyService::slot_for_game(const std::string& game_id) const {
  return slot(session_of_game(game_id));
}

std::string StudyService::session_of_game(const std::string& game_id) const {
  std::lock_guard lock(registry_mutex_);
  auto it = game_to_session_.find(game_id);
  if (it == game_to_session_.end()) throw Error(ErrorCode::NotFound, "no game '" + game_id + "'");
  return it->second;
}

void StudyService::persist_participant(const Participant& p) {
  std::ofstream out(config_.data_dir / "participants.jsonl", std::ios::app);
  out << json{{"id", p.id}, {"group", to_string(p.group)}, {"created_at", p.created_at_ms}}.dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::MalformedData, "cannot write participant log");
}

void StudyService::append(Slot& s, json event, bool persist) {
  event["session_id"] = s.session.id;
  event["seq"] = s.session.next_seq;
  if (!event.contains("timestamp")) event["timestamp"] = now();
  if (event.at("type") != "game") apply_event(s, event);
  ++s.session.next_seq;
  if (persist) {
    std::ofstream out(s.log_path, std::ios::app);
    out << event.dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::MalformedData, "cannot write session log");
  }
  s.events.push_back(std::move(event));
}

void StudyService::apply_event(Slot& s, const json& e) {
  StudySession& ss = s.session;
  const std::string type = e.at("type").get<std::string>();
  const std::int64_t ts = e.at("timestamp").get<std::int64_t>();
  if (type == "session_created") {
    ss.participant_id = e.at("participant_id").get<std::string>();
    ss.group = parse_group(e.at("group").get<std::string>());
    ss.stage = Stage::Setup;
    ss.stage_entered_at_ms = ts;
  } else if (type == "setup") {
    ss.question_set = question_set_from_json(e.at("question_set"));
    if (e.contains("chosen_profile")) ss.chosen_profile = e.at("chosen_profile").get<int>();
  } else if (type == "stage") {
    const Stage from = parse_stage(e.at("from").get<std::string>());
    const Stage to = parse_stage(e.at("to").get<std::string>());
    if (from != ss.stage || to != next_stage(from)) {
      throw Error(ErrorCode::MalformedData, "out-of-order stage transition in log of " + ss.id);
    }
    ss.stage_elapsed_ms[from] = ts - ss.stage_entered_at_ms;
    ss.stage = to;
    ss.stage_entered_at_ms = ts;
    if (e.contains("game_id")) {
      ss.game_id = e.at("game_id").get<std::string>();
      s.game_config = std::make_shared<const GameConfig>(e.at("config").get<GameConfig>());
      s.game.emplace(*ss.game_id, s.game_config, ts);
    }
  } else if (type == "tlx") {
    ss.tlx[parse_stage(e.at("stage").get<std::string>())] = tlx_from_json(e.at("values"));
  } else if (type == "recall_test") {
    ss.recall_answers = e.at("answers").get<std::vector<std::string>>();
    ss.memorability = e.at("memorability").get<double>();
  } else if (type == "game") {
    if (!s.game) throw Error(ErrorCode::MalformedData, "game event before the game started");
    const GameEvent recorded = e.at("event").get<GameEvent>();
    const Transition t = s.game->apply(command_of(recorded), recorded.timestamp_ms);
    if (!(s.game->events().back() == recorded)) {
      throw Error(ErrorCode::MalformedData, "game replay diverges at seq " + std::to_string(recorded.seq));
    }
  } else if (type == "distraction") {
    // informational only
  } else {
    throw Error(ErrorCode::MalformedData, "unknown session event '" + type + "'");
  }
}

void StudyService::recover() {
  const auto participants_path = config_.data_dir / "participants.jsonl";
  if (std::ifstream in{participants_path}) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      Participant p{j.at("id").get<std::string>(), parse_group(j.at("group").get<std::string>()),
                    j.at("created_at").get<std::int64_t>()};
      participant_counter_ = std::max(participant_counter_, number_of(p.id));
      participants_[p.id] = p;
    }
  }
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(config_.data_dir / "sessions")) {
    if (entry.path().extension() == ".jsonl") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    auto s = std::make_shared<Slot>();
    s->session.id = path.stem().string();
    s->log_path = path;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json e = json::parse(line);
      if (e.at("seq").get<std::uint64_t>() != s->session.next_seq) {
        throw Error(ErrorCode::MalformedData, "gap in session log " + path.string());
      }
      if (e.at("type") == "game") apply_event(*s, e);
      append(*s, std::move(e), false);
    }
    session_counter_ = std::max(session_counter_, number_of(s->session.id));
    if (s->session.game_id) game_to_session_[*s->session.game_id] = s->session.id;
    sessions_[s->session.id] = s;
  }
}

Participant StudyService::create_participant(const GroupPolicy& policy) {
  std::lock_guard lock(registry_mutex_);
  Group group;
  if (policy.explicit_group) {
    group = *policy.explicit_group;
  } else {
    std::size_t own = 0;
    std::size_t profile = 0;
    for (const auto& [id, p] : participants_) (p.group == Group::OwnAnswers ? own : profile)++;
    if (own != profile) {
      group = own < profile ? Group::OwnAnswers : Group::SystemProfile;
    } else {
      Rng rng(policy.seed ^ fnv1a(std::to_string(participants_.size())));
      group = rng.below(2) == 0 ? Group::OwnAnswers : Group::SystemProfile;
    }
  }
  Participant p{numbered('p', ++participant_counter_), group, now()};
  persist_participant(p);
  participants_[p.id] = p;
  return p;
}

std::vector<Participant> StudyService::participants() const {
  std::lock_guard lock(registry_mutex_);
  std::vector<Participant> out;
  for (const auto& [id, p] : participants_) out.push_back(p);
  return out;
}

StudySession StudyService::create_session(const std::string& participant_id) {
  std::unique_lock lock(registry_mutex_);
  auto it = participants_.find(participant_id);
  if (it == participants_.end()) throw Error(ErrorCode::NotFound, "no participant '" + participant_id + "'");
  auto s = std::make_shared<Slot>();
  s->session.id = numbered('s', ++session_counter_);
  s->log_path = config_.data_dir / "sessions" / (s->session.id + ".jsonl");
  sessions_[s->session.id] = s;
  const Group group = it->second.group;
  std::lock_guard slot_lock(s->mu);
  lock.unlock();
  append(*s, {{"type", "session_created"}, {"participant_id", participant_id}, {"group", to_string(group)}}, true);
  return s->session;
}

StudySession StudyService::session(const std::string& session_id) const {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  return s->session;
}

std::array<Profile, 2> StudyService::profiles_for(const StudySession& s) const {
  return sqgame::offered_profiles(pools_, config_.seed ^ fnv1a("profiles/" + s.id));
}

std::array<Profile, 2> StudyService::offered_profiles(const std::string& session_id) const {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  if (s->session.group != Group::SystemProfile) throw Error(ErrorCode::WrongGroup, "session uses own answers");
  require_stage(s->session, Stage::Setup);
  return profiles_for(s->session);
}

StudySession StudyService::setup_own_answers(const std::string& session_id,
                                             const std::vector<std::pair<std::string, std::string>>& choices) {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  if (s->session.group != Group::OwnAnswers) throw Error(ErrorCode::WrongGroup, "session uses a system profile");
  require_stage(s->session, Stage::Setup);
  const QuestionSet set = select_question_set(load_catalog(), choices);
  append(*s, {{"type", "setup"}, {"question_set", question_set_to_json(set)}}, true);
  append(*s, {{"type", "stage"}, {"from", "setup"}, {"to", "memorize"}}, true);
  return s->session;
}

StudySession StudyService::setup_from_profile(const std::string& session_id, int profile_choice,
                                              const std::vector<std::string>& question_ids) {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  if (s->session.group != Group::SystemProfile) throw Error(ErrorCode::WrongGroup, "session uses own answers");
  require_stage(s->session, Stage::Setup);
  if (profile_choice < 0 || profile_choice > 1) throw Error(ErrorCode::OutOfRange, "profile choice must be 0 or 1");
  const Profile profile = profiles_for(s->session)[static_cast<std::size_t>(profile_choice)];
  std::vector<std::pair<std::string, std::string>> choices;
  for (const auto& id : question_ids) {
    find_question(load_catalog(), id);
    choices.emplace_back(id, derive_answer(profile, id));
  }
  const QuestionSet set = select_question_set(load_catalog(), choices);
  append(*s, {{"type", "setup"}, {"question_set", question_set_to_json(set)}, {"chosen_profile", profile_choice}},
         true);
  append(*s, {{"type", "stage"}, {"from", "setup"}, {"to", "memorize"}}, true);
  return s->session;
}

StudySession StudyService::advance_stage(const std::string& session_id) {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  const StudySession& ss = s->session;
  switch (ss.stage) {
    case Stage::Setup: throw Error(ErrorCode::StageIncomplete, "choose questions and answers first");
    case Stage::Done: throw Error(ErrorCode::WrongStage, "the session is already done");
    case Stage::Play:
      if (!s->game || !s->game->state().finished()) throw Error(ErrorCode::StageIncomplete, "the game is not finished");
      break;
    case Stage::RecallTest:
      if (!ss.recall_answers) throw Error(ErrorCode::StageIncomplete, "the recall test was not submitted");
      break;
    default:
      if (is_tlx_stage(ss.stage) && !ss.tlx.contains(ss.stage)) {
        throw Error(ErrorCode::StageIncomplete, "submit the workload questionnaire first");
      }
      if (is_timed_stage(ss.stage) && !config_.test_mode &&
          now() - ss.stage_entered_at_ms < config_.stage_budget.count()) {
        throw Error(ErrorCode::TimerNotElapsed, "the stage timer has not elapsed");
      }
      break;
  }
  const Stage to = next_stage(ss.stage);
  json event{{"type", "stage"}, {"from", to_string(ss.stage)}, {"to", to_string(to)}};
  std::string game_id;
  if (to == Stage::Play) {
    game_id = numbered('g', number_of(ss.id));
    const GameConfig config =
        make_game_config(standard_pool_, *ss.question_set, config_.seed ^ fnv1a("game/" + ss.id));
    event["game_id"] = game_id;
    event["config"] = config;
  }
  append(*s, std::move(event), true);
  if (!game_id.empty()) {
    std::lock_guard reg(registry_mutex_);
    game_to_session_[game_id] = ss.id;
  }
  return s->session;
}

json StudyService::memorize_sheet(const std::string& session_id) const {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  require_stage(s->session, Stage::Memorize);
  json entries = json::array();
  for (const auto& e : s->session.question_set->entries) {
    entries.push_back({{"question_id", e.question_id},
                       {"prompt", find_question(load_catalog(), e.question_id).prompt},
                       {"answer", e.answer}});
  }
  json sheet{{"entries", entries}};
  if (s->session.chosen_profile) {
    sheet["profile"] = profile_to_json(profiles_for(s->session)[static_cast<std::size_t>(*s->session.chosen_profile)]);
  }
  return sheet;
}

std::vector<DistractionItem> StudyService::distraction_items(const std::string& session_id, int count) const {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  const Stage stage = s->session.stage;
  if (stage != Stage::Distraction1 && stage != Stage::Distraction2) {
    throw Error(ErrorCode::WrongStage, "no distraction task in stage " + std::string(to_string(stage)));
  }
  if (count < 1 || count > 1000) throw Error(ErrorCode::OutOfRange, "count must be in 1..1000");
  return make_distraction_items(session_id, stage, count);
}

int StudyService::submit_distraction(const std::string& session_id, const std::vector<int>& answers) {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  const Stage stage = s->session.stage;
  if (stage != Stage::Distraction1 && stage != Stage::Distraction2) {
    throw Error(ErrorCode::WrongStage, "no distraction task in stage " + std::string(to_string(stage)));
  }
  if (answers.size() > 1000) throw Error(ErrorCode::OutOfRange, "too many answers");
  const auto items = make_distraction_items(session_id, stage, static_cast<int>(answers.size()));
  int correct = 0;
  for (std::size_t i = 0; i < answers.size(); ++i) correct += answers[i] == items[i].answer ? 1 : 0;
  append(*s,
         {{"type", "distraction"}, {"stage", to_string(stage)}, {"correct", correct}, {"total", answers.size()}},
         true);
  return correct;
}

StudySession StudyService::record_tlx(const std::string& session_id, std::optional<Stage> stage,
                                      const TlxResponse& response) {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  const Stage target = stage.value_or(s->session.stage);
  if (!is_tlx_stage(target)) throw Error(ErrorCode::WrongStage, "not a workload questionnaire stage");
  if (s->session.tlx.contains(target)) throw Error(ErrorCode::DuplicateSubmission, "questionnaire already stored");
  require_stage(s->session, target);
  validate_tlx(response);
  append(*s, {{"type", "tlx"}, {"stage", to_string(target)}, {"values", tlx_to_json(response)}}, true);
  return s->session;
}

double StudyService::submit_recall_test(const std::string& session_id, const std::vector<std::string>& answers) {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  require_stage(s->session, Stage::RecallTest);
  if (s->session.recall_answers) throw Error(ErrorCode::DuplicateSubmission, "recall test already submitted");
  const double score = memorability_score(answers, *s->session.question_set);
  append(*s, {{"type", "recall_test"}, {"answers", answers}, {"memorability", score}}, true);
  return score;
}

GameCommandResult StudyService::game_command(const std::string& game_id, const Command& command) {
  auto s = slot_for_game(game_id);
  std::lock_guard lock(s->mu);
  require_stage(s->session, Stage::Play);
  const std::int64_t ts = now();
  const Transition t = s->game->apply(command, ts);
  append(*s, {{"type", "game"}, {"timestamp", ts}, {"event", s->game->events().back()}}, true);
  GameCommandResult r;
  r.outcome = t.outcome;
  r.score = t.state.score;
  r.finished = t.state.finished();
  if (!r.finished) r.view = view_challenge(t.state);
  return r;
}

ChallengeView StudyService::game_view(const std::string& game_id) const {
  auto s = slot_for_game(game_id);
  std::lock_guard lock(s->mu);
  require_stage(s->session, Stage::Play);
  return view_challenge(s->game->state());
}

ExportBundle StudyService::export_study() const {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::lock_guard lock(registry_mutex_);
    for (const auto& [id, s] : sessions_) slots.push_back(s);
  }
  std::ostringstream tlx_out;
  std::ostringstream sessions_out;
  sessions_out << "session_id,participant_id,group,memorability,final_score,solved_standard,solved_recognition,"
                  "solved_recall,hints_used,game_duration_s\n";
  std::vector<TlxRow> tlx_rows;
  ExportBundle bundle;
  for (const auto& s : slots) {
    std::lock_guard lock(s->mu);
    const StudySession& ss = s->session;
    if (ss.stage != Stage::Done) continue;
    for (auto stage : {Stage::Tlx1, Stage::Tlx2, Stage::Tlx3}) {
      tlx_rows.push_back({ss.participant_id, ss.group, task_for_tlx(stage), ss.tlx.at(stage)});
    }
    const auto& events = s->game->events();
    const SessionMetrics m = session_metrics(events);
    sessions_out << ss.id << ',' << ss.participant_id << ',' << to_string(ss.group) << ',' << *ss.memorability << ','
                 << m.final_score << ',' << m.solved_standard << ',' << m.solved_recognition << ',' << m.solved_recall
                 << ',' << m.hints_used << ',' << m.duration_seconds << '\n';
    std::ostringstream game_log;
    write_jsonl(game_log, events);
    bundle["games/" + *ss.game_id + ".jsonl"] = game_log.str();
    bundle["games/" + *ss.game_id + ".config.json"] = json(*s->game_config).dump(2) + "\n";
    std::ostringstream session_log;
    for (const auto& e : s->events) session_log << e.dump() << '\n';
    bundle["events/" + ss.id + ".jsonl"] = session_log.str();
  }
  write_tlx_csv(tlx_out, tlx_rows);
  bundle["tlx.csv"] = tlx_out.str();
  bundle["sessions.csv"] = sessions_out.str();
  return bundle;
}

void StudyService::export_to(const std::filesystem::path& dir) const {
  for (const auto& [name, content] : export_study()) {
    const auto path = dir / name;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::MalformedData, "cannot write " + path.string());
  }
}

std::uint64_t StudyService::session_hash(const std::string& session_id) const {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  const StudySession& ss = s->session;
  json j = session_to_wire(ss);
  if (ss.question_set) j["question_set"] = question_set_to_json(*ss.question_set);
  json tlx = json::object();
  for (const auto& [stage, r] : ss.tlx) tlx[std::string(to_string(stage))] = tlx_to_json(r);
  j["tlx"] = tlx;
  json elapsed = json::object();
  for (const auto& [stage, ms] : ss.stage_elapsed_ms) elapsed[std::string(to_string(stage))] = ms;
  j["elapsed"] = elapsed;
  if (ss.recall_answers) j["recall_answers"] = *ss.recall_answers;
  if (ss.memorability) j["memorability"] = *ss.memorability;
  j["next_seq"] = ss.next_seq;
  if (s->game) {
    j["game_state"] = state_hash(s->game->state());
    j["game_events"] = s->game->events().size();
  }
  return fnv1a(j.dump());
}

std::vector<json> StudyService::session_events(const std::string& session_id) const {
  auto s = slot(session_id);
  std::lock_guard lock(s->mu);
  return s->events;
}

}  // namespace sqgame
