#include "ctm/game_service.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <random>

#include <httplib.h>

#include "ctm/error.hpp"
#include "ctm/session.hpp"
#include "ctm/simulate.hpp"

namespace ctm {

struct GameService::Session {
  std::mutex mutex;
  std::string model_key;  // preset name or "inline:<name>"
  std::shared_ptr<const ContextTreeModel> model;
  std::unique_ptr<KickerStream> kicker;
  SessionRecord record;
  bool pending_break = false;
  std::unique_ptr<SessionLog> log;
};

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kSessionFinished:
    case ErrorCode::kBreakPending:
    case ErrorCode::kNotEnoughTrials: return 409;
    case ErrorCode::kIo:
    case ErrorCode::kNotConverged: return 500;
    default: return 400;
  }
}

ServiceResponse error_response(const Error& e) {
  nlohmann::json j{{"error", error_name(e.code())}, {"message", e.what()}};
  return {status_for(e.code()), j.dump()};
}

ServiceResponse json_response(int status, const nlohmann::json& j) { return {status, j.dump()}; }

template <typename F>
ServiceResponse guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return error_response(e);
  } catch (const nlohmann::json::exception& e) {
    return error_response(Error(ErrorCode::kParseError, e.what()));
  } catch (const std::exception& e) {
    return {500, nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump()};
  }
}

nlohmann::json parse_body(const std::string& body) {
  if (body.empty()) return nlohmann::json::object();
  auto j = nlohmann::json::parse(body);
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "request body must be a JSON object");
  return j;
}

bool plain_name(const std::string& s) {
  return !s.empty() && s.size() <= 64 &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

nlohmann::json state_json(const std::string& id, const SessionRecord& rec, bool pending_break) {
  return {{"session_id", id},
          {"model", rec.meta().model},
          {"trial", rec.size()},
          {"score", rec.score()},
          {"status", rec.status() == SessionStatus::kFinished ? "finished" : pending_break ? "break" : "active"},
          {"break", pending_break},
          {"finished", rec.status() == SessionStatus::kFinished}};
}

}  // namespace

GameService::GameService(ServiceConfig config) : config_(std::move(config)) {
  if (!config_.session_dir.empty()) std::filesystem::create_directories(config_.session_dir);
}

GameService::~GameService() = default;

std::shared_ptr<GameService::Session> GameService::find(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "no session " + id);
  return it->second;
}

ServiceResponse GameService::create_session(const std::string& body) {
  return guarded([&] {
    const auto req = parse_body(body);
    auto session = std::make_shared<Session>();
    std::string name;
    if (req.contains("config")) {
      auto tmpl = parse_model_config(req.at("config").get<std::string>(), "custom");
      session->model = std::make_shared<const ContextTreeModel>(tmpl.build());
      name = tmpl.name;
      session->model_key = "inline:" + format_model_config(*session->model);
    } else {
      name = req.at("model").get<std::string>();
      if (!plain_name(name)) throw Error(ErrorCode::kUnknownPreset, "bad model name '" + name + "'");
      session->model = std::make_shared<const ContextTreeModel>(load_model(name, config_.model_dir));
      session->model_key = name;
    }
    std::uint64_t seed = 0;
    if (req.contains("seed") && !req.at("seed").is_null()) {
      seed = req.at("seed").get<std::uint64_t>();
    } else {
      seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    }

    std::string id;
    {
      std::lock_guard lock(sessions_mutex_);
      char buf[32];
      std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(next_id_++));
      id = buf;
    }
    session->kicker = std::make_unique<KickerStream>(*session->model, seed, 0);
    session->record = SessionRecord(SessionMeta{id, name, seed, now_ms()});
    if (!config_.session_dir.empty()) {
      session->log = std::make_unique<SessionLog>(config_.session_dir / (id + ".jsonl"), session->record);
    }
    {
      std::lock_guard lock(sessions_mutex_);
      sessions_.emplace(id, session);
    }
    return json_response(201, {{"session_id", id}, {"model", name}, {"trials", kSessionTrials}});
  });
}

ServiceResponse GameService::guess(const std::string& id, const std::string& body) {
  return guarded([&] {
    auto session = find(id);
    const auto req = parse_body(body);
    const auto& dir = req.at("direction");
    if (!dir.is_number_integer() || dir.get<long>() < 0 || dir.get<long>() >= kGoalkeeperAlphabet) {
      throw Error(ErrorCode::kBadSymbol, "direction must be 0, 1 or 2");
    }
    const auto y = static_cast<Symbol>(dir.get<long>());

    std::lock_guard lock(session->mutex);
    auto& rec = session->record;
    if (rec.status() == SessionStatus::kFinished) throw Error(ErrorCode::kSessionFinished, "session " + id);
    if (session->pending_break) throw Error(ErrorCode::kBreakPending, "call /resume first");
    const Symbol x = session->kicker->next();
    const auto& trial = rec.append_trial(x, y, now_ms());
    if (session->log) session->log->append(trial);
    const bool finished = rec.status() == SessionStatus::kFinished;
    const bool brk = !finished && std::find(config_.breaks.begin(), config_.breaks.end(), trial.t) != config_.breaks.end();
    session->pending_break = brk;
    rec.set_break(brk);
    return json_response(200, {{"kick", x},
                               {"correct", trial.ok},
                               {"trial", trial.t},
                               {"score", rec.score()},
                               {"break", brk},
                               {"finished", finished}});
  });
}

ServiceResponse GameService::resume(const std::string& id) {
  return guarded([&] {
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    session->pending_break = false;
    session->record.set_break(false);
    return json_response(200, state_json(id, session->record, false));
  });
}

ServiceResponse GameService::state(const std::string& id) {
  return guarded([&] {
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    return json_response(200, state_json(id, session->record, session->pending_break));
  });
}

std::shared_ptr<const StrategyDensities> GameService::densities_for(const std::string& model_key,
                                                                    const ContextTreeModel& model) {
  std::lock_guard lock(densities_mutex_);
  auto it = densities_.find(model_key);
  if (it != densities_.end()) return it->second;
  auto d = std::make_shared<const StrategyDensities>(build_strategy_densities(
      model, config_.analysis.window_length, config_.density_replicates, config_.density_seed, 0));
  densities_.emplace(model_key, d);
  return d;
}

ServiceResponse GameService::analysis(const std::string& id) {
  return guarded([&] {
    auto session = find(id);
    SessionRecord snapshot;
    {
      std::lock_guard lock(session->mutex);
      snapshot = session->record;
    }
    if (snapshot.size() < config_.analysis.window_length) {
      throw Error(ErrorCode::kNotEnoughTrials, std::to_string(snapshot.size()) + " trials recorded, need " +
                                                   std::to_string(config_.analysis.window_length));
    }
    const auto densities = densities_for(session->model_key, *session->model);
    auto result = analyze_session(snapshot.sample(), *session->model, densities.get(), config_.analysis, id);
    result.model = snapshot.meta().model;
    auto j = to_json(result);
    j["session_id"] = id;
    return json_response(200, j);
  });
}

ServiceResponse GameService::export_jsonl(const std::string& id) {
  return guarded([&] {
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    return ServiceResponse{200, session->record.to_jsonl(), "application/x-ndjson"};
  });
}

ServiceResponse GameService::models() const {
  return guarded([&] {
    std::vector<std::string> names = preset_names();
    std::error_code ec;
    if (std::filesystem::is_directory(config_.model_dir, ec)) {
      for (const auto& entry : std::filesystem::directory_iterator(config_.model_dir, ec)) {
        if (entry.path().extension() != ".ctm") continue;
        const auto stem = entry.path().stem().string();
        if (plain_name(stem) && std::find(names.begin(), names.end(), stem) == names.end()) names.push_back(stem);
      }
    }
    auto list = nlohmann::json::array();
    for (const auto& name : names) {
      bool complete = true;
      try {
        (void)load_model(name, config_.model_dir);
      } catch (const Error&) {
        complete = false;
      }
      list.push_back({{"name", name}, {"complete", complete}});
    }
    return json_response(200, {{"models", list}});
  });
}

void GameService::mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type.c_str());
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Get("/models", [this, send](const httplib::Request&, httplib::Response& res) { send(res, models()); });
  server.Post("/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, create_session(req.body));
  });
  server.Get(R"(/sessions/([A-Za-z0-9_-]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, state(req.matches[1]));
  });
  server.Post(R"(/sessions/([A-Za-z0-9_-]+)/guess)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, guess(req.matches[1], req.body));
  });
  server.Post(R"(/sessions/([A-Za-z0-9_-]+)/resume)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, resume(req.matches[1]));
  });
  server.Get(R"(/sessions/([A-Za-z0-9_-]+)/analysis)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, analysis(req.matches[1]));
  });
  server.Get(R"(/sessions/([A-Za-z0-9_-]+)/export)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, export_jsonl(req.matches[1]));
  });
}

int default_port() {
  if (const char* p = std::getenv("CTM_PORT")) {
    try {
      const int port = std::stoi(p);
      if (port > 0 && port < 65536) return port;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::kInvalidArgument, std::string("bad CTM_PORT '") + p + "'");
  }
  return 8080;
}

void serve(GameService& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  if (!server.listen(host, port)) throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace ctm
