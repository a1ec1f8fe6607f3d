#include "sqgame/http_api.hpp"

#include "httplib.h"
#include "json.hpp"

namespace sqgame {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::UnknownQuestion:
      return 404;
    case ErrorCode::WrongGroup:
    case ErrorCode::WrongStage:
    case ErrorCode::StageIncomplete:
    case ErrorCode::TimerNotElapsed:
    case ErrorCode::DuplicateSubmission:
    case ErrorCode::GameFinished:
    case ErrorCode::WrongChallengeKind:
    case ErrorCode::InsufficientPoints:
    case ErrorCode::HintUnavailableForRecognition:
    case ErrorCode::NoFillersLeft:
    case ErrorCode::ThresholdNotReached:
      return 409;
    default:
      return 400;
  }
}

namespace {

using Handler = std::function<json(const httplib::Request&)>;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Wraps a handler so every failure becomes {"error", "message"}.
httplib::Server::Handler wrap(Handler h, int ok_status = 200) {
  return [h = std::move(h), ok_status](const httplib::Request& req, httplib::Response& res) {
    try {
      send_json(res, ok_status, h(req));
    } catch (const Error& e) {
      send_json(res, http_status(e.code()), {{"error", to_string(e.code())}, {"message", e.what()}});
    } catch (const json::exception& e) {
      send_json(res, 400, {{"error", "BadRequest"}, {"message", e.what()}});
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", "Internal"}, {"message", e.what()}});
    }
  };
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
  return j;
}

json participant_json(const Participant& p) {
  return {{"id", p.id}, {"group", to_string(p.group)}, {"created_at", p.created_at_ms}};
}

json command_result(const GameCommandResult& r) {
  json j{{"outcome", r.outcome}, {"score", r.score}, {"finished", r.finished}};
  if (r.view) j["view"] = *r.view;
  return j;
}

}  // namespace

struct ApiServer::Impl {
  StudyService& service;
  httplib::Server server;

  explicit Impl(StudyService& s) : service(s) { routes(); }

  void routes() {
    auto& svc = service;
    auto& srv = server;

    srv.Get("/catalog", wrap([](const httplib::Request&) {
      json arr = json::array();
      for (const auto& q : load_catalog()) {
        arr.push_back({{"id", q.id},
                       {"category", to_string(q.category)},
                       {"answer_class", to_string(q.answer_class)},
                       {"prompt", q.prompt}});
      }
      return json{{"questions", arr}};
    }));

    srv.Post("/participants", wrap([&svc](const httplib::Request& req) {
      const json b = body_of(req);
      GroupPolicy policy = GroupPolicy::balanced_random(b.value("seed", svc.config().seed));
      if (b.contains("group")) policy = GroupPolicy::fixed(parse_group(b.at("group").get<std::string>()));
      return participant_json(svc.create_participant(policy));
    }, 201));

    srv.Get("/participants", wrap([&svc](const httplib::Request&) {
      json arr = json::array();
      for (const auto& p : svc.participants()) arr.push_back(participant_json(p));
      return json{{"participants", arr}};
    }));

    srv.Post("/sessions", wrap([&svc](const httplib::Request& req) {
      return session_to_wire(svc.create_session(body_of(req).at("participant_id").get<std::string>()));
    }, 201));

    srv.Get("/sessions/:id/stage", wrap([&svc](const httplib::Request& req) {
      return session_to_wire(svc.session(req.path_params.at("id")));
    }));

    srv.Get("/sessions/:id/profiles", wrap([&svc](const httplib::Request& req) {
      const auto profiles = svc.offered_profiles(req.path_params.at("id"));
      return json{{"profiles", {profile_to_json(profiles[0]), profile_to_json(profiles[1])}}};
    }));

    srv.Post("/sessions/:id/setup/own", wrap([&svc](const httplib::Request& req) {
      const json b = body_of(req);
      std::vector<std::pair<std::string, std::string>> choices;
      for (const auto& c : b.at("choices")) {
        choices.emplace_back(c.at("question_id").get<std::string>(), c.at("answer").get<std::string>());
      }
      return session_to_wire(svc.setup_own_answers(req.path_params.at("id"), choices));
    }));

    srv.Post("/sessions/:id/setup/profile", wrap([&svc](const httplib::Request& req) {
      const json b = body_of(req);
      return session_to_wire(svc.setup_from_profile(req.path_params.at("id"), b.at("profile").get<int>(),
                                                    b.at("question_ids").get<std::vector<std::string>>()));
    }));

    srv.Post("/sessions/:id/advance", wrap([&svc](const httplib::Request& req) {
      return session_to_wire(svc.advance_stage(req.path_params.at("id")));
    }));

    srv.Get("/sessions/:id/memorize-sheet", wrap([&svc](const httplib::Request& req) {
      return svc.memorize_sheet(req.path_params.at("id"));
    }));

    srv.Get("/sessions/:id/distraction", wrap([&svc](const httplib::Request& req) {
      int count = 10;
      if (req.has_param("count")) {
        try {
          count = std::stoi(req.get_param_value("count"));
        } catch (const std::exception&) {
          throw Error(ErrorCode::BadRequest, "count must be an integer");
        }
      }
      json items = json::array();
      int i = 0;
      for (const auto& item : svc.distraction_items(req.path_params.at("id"), count)) {
        items.push_back({{"index", i++}, {"prompt", item.prompt}});
      }
      return json{{"items", items}};
    }));

    srv.Post("/sessions/:id/distraction", wrap([&svc](const httplib::Request& req) {
      const auto answers = body_of(req).at("answers").get<std::vector<int>>();
      const int correct = svc.submit_distraction(req.path_params.at("id"), answers);
      return json{{"correct", correct}, {"total", answers.size()}};
    }));

    srv.Post("/sessions/:id/tlx", wrap([&svc](const httplib::Request& req) {
      const json b = body_of(req);
      std::optional<Stage> stage;
      if (b.contains("stage")) stage = parse_stage(b.at("stage").get<std::string>());
      const TlxResponse r{b.at("mental").get<double>(),      b.at("physical").get<double>(),
                          b.at("temporal").get<double>(),    b.at("performance").get<double>(),
                          b.at("effort").get<double>(),      b.at("frustration").get<double>()};
      return session_to_wire(svc.record_tlx(req.path_params.at("id"), stage, r));
    }));

    srv.Post("/sessions/:id/recall-test", wrap([&svc](const httplib::Request& req) {
      const auto answers = body_of(req).at("answers").get<std::vector<std::string>>();
      return json{{"memorability", svc.submit_recall_test(req.path_params.at("id"), answers)}};
    }));

    srv.Get("/games/:id/view", wrap([&svc](const httplib::Request& req) {
      return json(svc.game_view(req.path_params.at("id")));
    }));

    auto game_route = [&svc, &srv](const std::string& verb, std::function<Command(const json&)> make) {
      srv.Post("/games/:id/" + verb, wrap([&svc, make](const httplib::Request& req) {
        return command_result(svc.game_command(req.path_params.at("id"), make(body_of(req))));
      }));
    };
    game_route("answer", [](const json& b) { return Command::answer(b.at("text").get<std::string>()); });
    game_route("choice", [](const json& b) { return Command::choice(b.at("index").get<int>()); });
    game_route("hint", [](const json&) { return Command::hint(); });
    game_route("cues", [](const json&) { return Command::cues(); });
    game_route("skip", [](const json&) { return Command::skip(); });

    srv.Get("/export", wrap([&svc](const httplib::Request&) {
      json files = json::object();
      for (const auto& [name, content] : svc.export_study()) files[name] = content;
      return json{{"files", files}};
    }));
  }
};

ApiServer::ApiServer(StudyService& service) : impl_(std::make_unique<Impl>(service)) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ApiServer::run() { return impl_->server.listen_after_bind(); }

void ApiServer::stop() { impl_->server.stop(); }

void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace sqgame
