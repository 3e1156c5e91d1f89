#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ctm/analysis.hpp"
#include "ctm/model_io.hpp"
#include "ctm/strategy.hpp"

namespace httplib {
class Server;
}

namespace ctm {

struct ServiceConfig {
  std::filesystem::path model_dir = default_model_dir();
  std::filesystem::path session_dir;  // empty: sessions live in memory only
  std::vector<std::size_t> breaks{334, 667};
  std::size_t density_replicates = 10000;
  std::uint64_t density_seed = 1;
  AnalysisOptions analysis;
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Live goalkeeper sessions. Handlers are plain functions of the request body
// so they can be driven without a socket; mount() binds them to HTTP routes.
//
// Payloads carry the model name only, never its transition table.
class GameService {
 public:
  explicit GameService(ServiceConfig config = {});
  ~GameService();

  ServiceResponse create_session(const std::string& body);
  ServiceResponse guess(const std::string& id, const std::string& body);
  ServiceResponse resume(const std::string& id);
  ServiceResponse state(const std::string& id);
  ServiceResponse analysis(const std::string& id);
  ServiceResponse export_jsonl(const std::string& id);
  ServiceResponse models() const;

  void mount(httplib::Server& server);

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  std::shared_ptr<const StrategyDensities> densities_for(const std::string& model_key,
                                                         const ContextTreeModel& model);

  ServiceConfig config_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
  std::mutex densities_mutex_;
  std::map<std::string, std::shared_ptr<const StrategyDensities>> densities_;
};

// Port from $CTM_PORT, else 8080.
int default_port();

// Blocks serving `service` until the process ends.
void serve(GameService& service, const std::string& host, int port);

}  // namespace ctm
