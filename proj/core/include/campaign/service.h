// Copyright 2026 The Campaign MPE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CAMPAIGN_SERVICE_H_
#define CAMPAIGN_SERVICE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "campaign/scenario_io.h"
#include "campaign/solver.h"
#include "campaign/state_space.h"

namespace campaign {

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

class Session;

// Request handling for the play/query API, independent of the transport.
// Bodies are JSON; every response carries the scenario digest.
//
//   GET  /state                  scenario summary
//   GET  /value/{state}          value and both equilibrium strategies
//   POST /session                {scenario?, human_player, state?, seed?}
//   GET  /session/{id}           session view with history
//   POST /session/{id}/action    {orders: [[commander, kind, target], ...]}
//   POST /session/{id}/hint      equilibrium strategy for the human's side
class CampaignService {
 public:
  CampaignService(Scenario scenario, Solution solution);
  ~CampaignService();

  HttpResponse handle(const std::string& method, const std::string& path,
                      const std::string& body);

  const std::string& digest() const { return digest_; }
  const Scenario& scenario() const { return scenario_; }
  const Solution& solution() const { return solution_; }

 private:
  HttpResponse get_state() const;
  HttpResponse get_value(const std::string& state) const;
  HttpResponse create_session(const std::string& body);
  HttpResponse get_session(const std::string& id);
  HttpResponse post_action(const std::string& id, const std::string& body);
  HttpResponse post_hint(const std::string& id);
  std::shared_ptr<Session> find(const std::string& id);

  Scenario scenario_;
  Solution solution_;
  StateSpace space_;
  std::string digest_;

  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 0;
};

// HTTP/1.1 binding of CampaignService.
class HttpServer {
 public:
  explicit HttpServer(CampaignService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds to `port` (0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  // Serves until stop(); blocks.
  void listen();
  // Serves on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace campaign

#endif  // CAMPAIGN_SERVICE_H_
