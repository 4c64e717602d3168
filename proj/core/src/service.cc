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

#include "campaign/service.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "campaign/random.h"
#include "campaign/transitions.h"
#include "httplib.h"
#include "json.hpp"

namespace campaign {

using nlohmann::json;

namespace {

struct BattleResult {
  ObjectiveId objective;
  Player attacker;
  bool reinforced;
  double success;
  bool flipped;
};

struct HistoryEntry {
  std::size_t stage;
  CampaignState state;
  ActionProfile human;
  ActionProfile opponent;
  std::vector<BattleResult> battles;
  CampaignState next;
  double stage_loss;
};

// Error body: {code, message, constraint}.
struct ApiError {
  int status;
  std::string code;
  std::string message;
  std::string constraint;
};

json orders_json(const ActionProfile& action) {
  json out = json::array();
  for (std::size_t c = 0; c < action.orders.size(); ++c) {
    const Order& o = action.orders[c];
    out.push_back(json::array(
        {c, to_string(o.kind), o.kind == OrderKind::kNone ? json(nullptr) : json(o.target)}));
  }
  return out;
}

json battle_json(const BattleResult& b) {
  return {{"objective", b.objective},
          {"attacker", to_int(b.attacker)},
          {"reinforced", b.reinforced},
          {"success_probability", b.success},
          {"flipped", b.flipped}};
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    json doc = json::parse(body);
    if (!doc.is_object()) throw ApiError{400, "bad_request", "body must be a JSON object", ""};
    return doc;
  } catch (const json::parse_error& e) {
    throw ApiError{400, "bad_request", std::string("malformed JSON: ") + e.what(), ""};
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string clean = path.substr(0, path.find('?'));
  std::stringstream ss(clean);
  std::string part;
  while (std::getline(ss, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::string session_token(std::uint64_t counter) {
  std::uint64_t x = counter + 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  x ^= x >> 31;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace

class Session {
 public:
  Session(std::string id, Player human, CampaignState state, std::uint64_t seed)
      : id(std::move(id)), human(human), state(std::move(state)), seed(seed), rng(seed) {}

  std::mutex mutex;
  std::string id;
  Player human;
  CampaignState state;
  std::uint64_t seed;
  Rng rng;
  std::size_t stage = 0;
  double accumulated = 0.0;
  double discount_factor = 1.0;  // γ^stage
  std::vector<HistoryEntry> history;
};

CampaignService::CampaignService(Scenario scenario, Solution solution)
    : scenario_(std::move(scenario)),
      solution_(std::move(solution)),
      space_(scenario_.campaign),
      digest_(scenario_digest(scenario_)) {
  if (solution_.values.size() != space_.size() || solution_.policy.num_states() != space_.size()) {
    throw std::invalid_argument("solution does not match the scenario's state space");
  }
}

CampaignService::~CampaignService() = default;

HttpResponse CampaignService::handle(const std::string& method, const std::string& path,
                                     const std::string& body) {
  try {
    const auto parts = split_path(path);
    if (method == "GET" && parts.size() == 1 && parts[0] == "state") return get_state();
    if (method == "GET" && parts.size() == 2 && parts[0] == "value") return get_value(parts[1]);
    if (parts.size() >= 1 && parts[0] == "session") {
      if (method == "POST" && parts.size() == 1) return create_session(body);
      if (method == "GET" && parts.size() == 2) return get_session(parts[1]);
      if (method == "POST" && parts.size() == 3 && parts[2] == "action") {
        return post_action(parts[1], body);
      }
      if (method == "POST" && parts.size() == 3 && parts[2] == "hint") return post_hint(parts[1]);
    }
    throw ApiError{404, "not_found", "no route for " + method + " " + path, ""};
  } catch (const ApiError& e) {
    json out = {{"code", e.code},
                {"message", e.message},
                {"constraint", e.constraint.empty() ? json(nullptr) : json(e.constraint)},
                {"digest", digest_}};
    return {e.status, out.dump()};
  } catch (const std::exception& e) {
    json out = {{"code", "internal_error"},
                {"message", e.what()},
                {"constraint", nullptr},
                {"digest", digest_}};
    return {500, out.dump()};
  }
}

HttpResponse CampaignService::get_state() const {
  const Campaign& c = scenario_.campaign;
  json objectives = json::array();
  for (const Objective& o : c.objectives()) {
    objectives.push_back({{"id", o.id}, {"label", o.label}, {"loss", o.loss}});
  }
  json axes = json::array();
  for (const Axis& a : c.axes()) axes.push_back({{"id", a.id}, {"objectives", a.objectives}});
  json commanders = json::array();
  for (const Commander& k : c.commanders()) commanders.push_back({{"id", k.id}, {"axes", k.axes}});
  json out = {{"digest", digest_},
              {"schema_version", std::string(kSchemaVersion)},
              {"name", scenario_.name},
              {"discount", c.discount()},
              {"objectives", objectives},
              {"axes", axes},
              {"commanders", commanders},
              {"initial_state", scenario_.initial_state.to_string()},
              {"num_states", space_.size()},
              {"epsilon", solution_.report.epsilon}};
  return {200, out.dump()};
}

namespace {

json strategy_view(const Campaign& campaign, const CampaignState& state, Player p,
                   const std::vector<double>& probs) {
  const auto actions = reduced_actions(campaign, state, p);
  json list = json::array();
  for (std::size_t a = 0; a < actions.size(); ++a) {
    list.push_back({{"orders", orders_json(actions[a])}, {"probability", probs[a]}});
  }
  return list;
}

}  // namespace

HttpResponse CampaignService::get_value(const std::string& text) const {
  const Campaign& c = scenario_.campaign;
  CampaignState state;
  try {
    state = CampaignState::from_string(text);
  } catch (const std::exception& e) {
    throw ApiError{400, "bad_state", e.what(), ""};
  }
  const std::int64_t idx = space_.try_encode(state);
  if (idx < 0) {
    throw ApiError{404, "unachievable_state",
                   "state " + text + " is not achievable in this campaign", ""};
  }
  const auto s = static_cast<std::size_t>(idx);
  json axis_types = json::array();
  for (const Axis& a : c.axes()) axis_types.push_back(to_string(classify_axis(a, state)));
  json out = {{"digest", digest_},
              {"state", state.to_string()},
              {"index", s},
              {"value", solution_.values[s]},
              {"stage_loss", stage_loss(c, state)},
              {"axis_types", axis_types},
              {"player1", strategy_view(c, state, Player::kOne, solution_.policy.player1[s])},
              {"player2", strategy_view(c, state, Player::kTwo, solution_.policy.player2[s])}};
  return {200, out.dump()};
}

namespace {

json session_json(const Session& s, const std::string& digest, const Solution& solution,
                  const StateSpace& space, bool with_history) {
  json out = {{"digest", digest},
              {"id", s.id},
              {"human_player", to_int(s.human)},
              {"state", s.state.to_string()},
              {"stage", s.stage},
              {"accumulated_discounted_loss", s.accumulated},
              {"value", solution.values[space.encode(s.state)]},
              {"seed", s.seed},
              {"rng_draws", s.rng.draws()}};
  if (with_history) {
    json hist = json::array();
    for (const HistoryEntry& h : s.history) {
      json battles = json::array();
      for (const auto& b : h.battles) battles.push_back(battle_json(b));
      hist.push_back({{"stage", h.stage},
                      {"state", h.state.to_string()},
                      {"human_action", orders_json(h.human)},
                      {"opponent_action", orders_json(h.opponent)},
                      {"battles", battles},
                      {"next_state", h.next.to_string()},
                      {"stage_loss", h.stage_loss}});
    }
    out["history"] = std::move(hist);
  }
  return out;
}

}  // namespace

HttpResponse CampaignService::create_session(const std::string& body) {
  const json req = parse_body(body);
  if (auto it = req.find("scenario"); it != req.end() && !it->is_null()) {
    if (!it->is_string() || (it->get<std::string>() != digest_ &&
                             it->get<std::string>() != scenario_.name)) {
      throw ApiError{409, "scenario_mismatch", "this server serves scenario " + digest_, ""};
    }
  }
  Player human = Player::kOne;
  if (auto it = req.find("human_player"); it != req.end()) {
    if (!it->is_number_integer() || (it->get<int>() != 1 && it->get<int>() != 2)) {
      throw ApiError{400, "bad_request", "human_player must be 1 or 2", ""};
    }
    human = player_from_int(it->get<int>());
  }
  CampaignState state = scenario_.initial_state;
  if (auto it = req.find("state"); it != req.end() && !it->is_null()) {
    try {
      state = CampaignState::from_string(it->get<std::string>());
    } catch (const std::exception& e) {
      throw ApiError{400, "bad_state", e.what(), ""};
    }
    if (space_.try_encode(state) < 0) {
      throw ApiError{404, "unachievable_state",
                     "state " + state.to_string() + " is not achievable in this campaign", ""};
    }
  }
  std::lock_guard<std::mutex> lock(sessions_mutex_);
  const std::uint64_t counter = next_session_++;
  std::uint64_t seed = counter;
  if (auto it = req.find("seed"); it != req.end() && !it->is_null()) {
    if (!it->is_number_unsigned() && !it->is_number_integer()) {
      throw ApiError{400, "bad_request", "seed must be a non-negative integer", ""};
    }
    seed = it->get<std::uint64_t>();
  }
  auto session = std::make_shared<Session>(session_token(counter), human, state, seed);
  sessions_[session->id] = session;
  return {201, session_json(*session, digest_, solution_, space_, true).dump()};
}

std::shared_ptr<Session> CampaignService::find(const std::string& id) {
  std::lock_guard<std::mutex> lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ApiError{404, "unknown_session", "no session " + id, ""};
  return it->second;
}

HttpResponse CampaignService::get_session(const std::string& id) {
  auto s = find(id);
  std::lock_guard<std::mutex> lock(s->mutex);
  return {200, session_json(*s, digest_, solution_, space_, true).dump()};
}

HttpResponse CampaignService::post_hint(const std::string& id) {
  auto s = find(id);
  std::lock_guard<std::mutex> lock(s->mutex);
  const Campaign& c = scenario_.campaign;
  const std::size_t idx = space_.encode(s->state);
  const auto actions = reduced_actions(c, s->state, s->human);
  const auto& probs = solution_.policy.strategy(s->human, idx);
  json rows = json::array();
  for (std::size_t a = 0; a < actions.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    json described = json::array();
    for (std::size_t k = 0; k < actions[a].orders.size(); ++k) {
      described.push_back(describe_order(c, static_cast<CommanderId>(k), actions[a].orders[k]));
    }
    rows.push_back({{"orders", orders_json(actions[a])},
                    {"description", described},
                    {"probability", probs[a]}});
  }
  json out = {{"digest", digest_},
              {"id", s->id},
              {"state", s->state.to_string()},
              {"player", to_int(s->human)},
              {"value", solution_.values[idx]},
              {"strategy", rows}};
  return {200, out.dump()};
}

HttpResponse CampaignService::post_action(const std::string& id, const std::string& body) {
  auto s = find(id);
  const json req = parse_body(body);
  const Campaign& c = scenario_.campaign;
  std::lock_guard<std::mutex> lock(s->mutex);

  // Orders: commanders without an entry stay idle.
  auto it = req.find("orders");
  if (it == req.end() || !it->is_array()) {
    throw ApiError{400, "bad_request", "body needs an \"orders\" array", ""};
  }
  ActionProfile human;
  human.orders.assign(c.num_commanders(), Order::none());
  std::vector<bool> seen(c.num_commanders(), false);
  for (const json& triple : *it) {
    if (!triple.is_array() || triple.size() != 3 || !triple[0].is_number_integer() ||
        !triple[1].is_string() || !(triple[2].is_null() || triple[2].is_number_integer())) {
      throw ApiError{400, "bad_request", "each order must be [commander, kind, target]", ""};
    }
    const long long cmd = triple[0].get<long long>();
    if (cmd < 0 || cmd >= static_cast<long long>(c.num_commanders())) {
      throw ApiError{422, "infeasible_action", "unknown commander " + std::to_string(cmd),
                     "unknown_commander"};
    }
    if (seen[cmd]) {
      throw ApiError{422, "infeasible_action",
                     "commander " + std::to_string(cmd) + " received more than one order",
                     "multiple_orders_for_commander"};
    }
    seen[cmd] = true;
    Order ord;
    try {
      ord.kind = order_kind_from_string(triple[1].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ApiError{400, "bad_request", e.what(), ""};
    }
    if (ord.kind != OrderKind::kNone) {
      if (triple[2].is_null()) throw ApiError{400, "bad_request", "order needs a target", ""};
      ord.target = static_cast<ObjectiveId>(triple[2].get<long long>());
    }
    human.orders[cmd] = ord;
  }
  const FeasibilityViolation v = check_feasible(c, s->state, s->human, human);
  if (!v.ok()) throw ApiError{422, "infeasible_action", v.message, v.constraint};

  const std::size_t idx = space_.encode(s->state);
  const Player opp = opponent(s->human);
  const auto opp_actions = reduced_actions(c, s->state, opp);
  const std::size_t pick = s->rng.pick(solution_.policy.strategy(opp, idx));
  const ActionProfile& theirs = opp_actions[pick];
  const ActionProfile& a1 = s->human == Player::kOne ? human : theirs;
  const ActionProfile& a2 = s->human == Player::kOne ? theirs : human;

  HistoryEntry entry;
  entry.stage = s->stage;
  entry.state = s->state;
  entry.human = human;
  entry.opponent = theirs;
  entry.stage_loss = stage_loss(c, s->state);
  CampaignState next = s->state;
  for (const Battle& b : battles(c, s->state, a1, a2)) {
    const bool flipped = b.success >= 1.0 || (b.success > 0.0 && s->rng.uniform() < b.success);
    if (flipped) next.flip(b.objective);
    entry.battles.push_back({b.objective, b.attacker, b.reinforced, b.success, flipped});
  }
  entry.next = next;

  const double value_before = solution_.values[idx];
  s->accumulated += s->discount_factor * entry.stage_loss;
  s->discount_factor *= c.discount();
  ++s->stage;
  s->state = next;
  const double value_after = solution_.values[space_.encode(next)];

  json battles_out = json::array();
  for (const auto& b : entry.battles) battles_out.push_back(battle_json(b));
  json out = {{"digest", digest_},
              {"id", s->id},
              {"stage", s->stage},
              {"previous_state", entry.state.to_string()},
              {"human_action", orders_json(human)},
              {"opponent_action", orders_json(theirs)},
              {"battle_results", battles_out},
              {"next_state", next.to_string()},
              {"stage_loss", entry.stage_loss},
              {"accumulated_discounted_loss", s->accumulated},
              {"value_before", value_before},
              {"value_after", value_after}};
  s->history.push_back(std::move(entry));
  return {200, out.dump()};
}

struct HttpServer::Impl {
  explicit Impl(CampaignService& s) : service(s) {}

  CampaignService& service;
  httplib::Server server;
  std::thread thread;
  bool bound = false;
};

HttpServer::HttpServer(CampaignService& service) : impl_(std::make_unique<Impl>(service)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse r = impl_->service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  impl_->server.Get(R"(/.*)", forward);
  impl_->server.Post(R"(/.*)", forward);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound_port = port;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound_port = -1;
  }
  if (bound_port < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound_port;
}

void HttpServer::listen() {
  if (!impl_->bound) throw std::logic_error("HttpServer::listen before bind");
  impl_->server.listen_after_bind();
}

void HttpServer::start() {
  if (!impl_->bound) throw std::logic_error("HttpServer::start before bind");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace campaign
