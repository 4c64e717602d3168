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

#include "campaign/scenario_io.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "campaign/state_space.h"
#include "json.hpp"

namespace campaign {

using nlohmann::json;

ScenarioError::ScenarioError(std::string source, std::size_t line, std::string pointer,
                             std::string message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         (pointer.empty() ? std::string() : pointer + ": ") + message),
      source_(std::move(source)),
      line_(line),
      pointer_(std::move(pointer)),
      detail_(std::move(message)) {}

namespace {

// Maps JSON pointers of a syntactically valid document to the line on which
// each value starts.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) {
    try {
      value("");
    } catch (const std::out_of_range&) {
      // Truncated input: keep what was indexed.
    }
  }

  // Line of `pointer`, or of its nearest indexed ancestor.
  std::size_t line(std::string pointer) const {
    while (true) {
      auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      if (pointer.empty()) return 0;
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  char peek() const { return text_.at(pos_); }

  void ws() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
      } else if (c != ' ' && c != '\t' && c != '\r') {
        return;
      }
      ++pos_;
    }
  }

  std::string string() {
    std::string out;
    ++pos_;  // opening quote
    while (peek() != '"') {
      if (peek() == '\\') {
        out += text_.at(++pos_);
      } else {
        out += peek();
      }
      ++pos_;
    }
    ++pos_;
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }

  void value(const std::string& ptr) {
    ws();
    lines_.emplace(ptr, line_);
    const char c = peek();
    if (c == '{') {
      ++pos_;
      ws();
      if (peek() == '}') {
        ++pos_;
        return;
      }
      while (true) {
        ws();
        const std::string key = string();
        ws();
        ++pos_;  // ':'
        value(ptr + "/" + escape(key));
        ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        ++pos_;  // '}'
        return;
      }
    }
    if (c == '[') {
      ++pos_;
      ws();
      if (peek() == ']') {
        ++pos_;
        return;
      }
      for (std::size_t i = 0;; ++i) {
        value(ptr + "/" + std::to_string(i));
        ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        ++pos_;  // ']'
        return;
      }
    }
    if (c == '"') {
      string();
      return;
    }
    while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(text_[pos_]) ==
                                      std::string_view::npos) {
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Recover the line from the byte offset.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line =
        1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    std::string msg = e.what();
    const auto cut = msg.find("syntax error");
    throw ScenarioError(source, line, "",
                        cut == std::string::npos ? msg : msg.substr(cut));
  }
}

// Typed access with located errors.
class Reader {
 public:
  Reader(std::string_view text, std::string source) : index_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    throw ScenarioError(source_, index_.line(ptr), ptr, msg);
  }

  const json& field(const json& obj, const std::string& ptr, const char* key) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(ptr, std::string("missing field \"") + key + "\"");
    return *it;
  }

  const json* optional_field(const json& obj, const char* key) const {
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
  }

  const json& array(const json& v, const std::string& ptr) const {
    if (!v.is_array()) fail(ptr, "expected an array");
    return v;
  }

  std::string str(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  long long integer(const json& v, const std::string& ptr) const {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 1e15) return static_cast<long long>(d);
    }
    fail(ptr, "expected an integer");
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ptr, "expected a finite number");
    return d;
  }

  double probability(const json& v, const std::string& ptr) const {
    const double d = number(v, ptr);
    if (d < 0.0 || d > 1.0) fail(ptr, "probability " + json(d).dump() + " outside [0, 1]");
    return d;
  }

  Player player(const json& v, const std::string& ptr) const {
    const long long p = integer(v, ptr);
    if (p != 1 && p != 2) fail(ptr, "player must be 1 or 2");
    return p == 1 ? Player::kOne : Player::kTwo;
  }

  const std::string& source() const { return source_; }

 private:
  LineIndex index_;
  std::string source_;
};

std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }
std::string at(const std::string& ptr, const char* key) { return ptr + "/" + key; }

json state_json(const CampaignState& s) { return s.to_string(); }

json player_json(Player p) { return to_int(p); }

json scenario_json(const Scenario& sc) {
  const Campaign& c = sc.campaign;
  const ProbabilityModel& m = c.probabilities();
  json doc = json::object();
  doc["schema_version"] = std::string(kSchemaVersion);
  if (!sc.name.empty()) doc["name"] = sc.name;
  doc["discount"] = c.discount();
  json objectives = json::array();
  for (const Objective& o : c.objectives()) {
    objectives.push_back({{"id", o.id}, {"label", o.label}, {"loss", o.loss}});
  }
  doc["objectives"] = std::move(objectives);
  json axes = json::array();
  for (const Axis& a : c.axes()) axes.push_back({{"id", a.id}, {"objectives", a.objectives}});
  doc["axes"] = std::move(axes);
  json commanders = json::array();
  for (const Commander& k : c.commanders()) {
    commanders.push_back({{"id", k.id}, {"axes", k.axes}});
  }
  doc["commanders"] = std::move(commanders);

  auto per_player = [&](bool attack) {
    json out = json::object();
    for (Player p : {Player::kOne, Player::kTwo}) {
      json arr = json::array();
      for (ObjectiveId o = 0; o < static_cast<ObjectiveId>(c.num_objectives()); ++o) {
        arr.push_back(attack ? m.initial_attack(p, o) : m.initial_reinforce(p, o));
      }
      out[p == Player::kOne ? "player1" : "player2"] = std::move(arr);
    }
    return out;
  };
  json model = json::object();
  model["initial_attack"] = per_player(true);
  model["initial_reinforce"] = per_player(false);
  json improvements = json::array();
  for (const ImprovementEntry& e : m.improvements()) {
    improvements.push_back({{"player", player_json(e.player)},
                            {"target", e.target},
                            {"kind", e.kind == BattleKind::kAttack ? "attack" : "reinforce"},
                            {"condition", e.condition},
                            {"boost", e.boost}});
  }
  model["improvements"] = std::move(improvements);
  json overrides = json::array();
  for (const ProbabilityOverride& e : m.overrides()) {
    json entry = {{"state", state_json(e.state)},
                  {"player", player_json(e.player)},
                  {"objective", e.objective}};
    if (e.alpha) entry["alpha"] = *e.alpha;
    if (e.rho) entry["rho"] = *e.rho;
    overrides.push_back(std::move(entry));
  }
  model["overrides"] = std::move(overrides);
  doc["probability_model"] = std::move(model);
  doc["initial_state"] = state_json(sc.initial_state);
  return doc;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

CampaignState parse_state(const Reader& r, const json& v, const std::string& ptr, std::size_t n) {
  const std::string text = r.str(v, ptr);
  if (text.size() != n) {
    r.fail(ptr, "state \"" + text + "\" has " + std::to_string(text.size()) +
                    " entries, expected " + std::to_string(n));
  }
  try {
    return CampaignState::from_string(text);
  } catch (const std::exception& e) {
    r.fail(ptr, e.what());
  }
}

// Ids must equal their position so that ids double as dense indices.
void check_ids(const Reader& r, const json& arr, const std::string& ptr, const char* what) {
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const long long id = r.integer(r.field(arr[i], at(ptr, i), "id"), at(at(ptr, i), "id"));
    if (id != static_cast<long long>(i)) {
      r.fail(at(at(ptr, i), "id"), std::string(what) + " ids must run 0, 1, 2, ... in order; found " +
                                       std::to_string(id) + " at position " + std::to_string(i));
    }
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& source) {
  const json doc = parse_json(text, source);
  const Reader r(text, source);
  if (!doc.is_object()) r.fail("", "scenario must be a JSON object");
  const std::string version = r.str(r.field(doc, "", "schema_version"), "/schema_version");
  if (version != kSchemaVersion) {
    r.fail("/schema_version", "unsupported schema_version \"" + version + "\", expected \"" +
                                  std::string(kSchemaVersion) + "\"");
  }
  std::string name;
  if (const json* v = r.optional_field(doc, "name")) name = r.str(*v, "/name");

  // Objectives.
  const json& jobj = r.array(r.field(doc, "", "objectives"), "/objectives");
  if (jobj.empty()) r.fail("/objectives", "at least one objective is required");
  if (jobj.size() > CampaignState::kMaxObjectives) {
    r.fail("/objectives", "at most " + std::to_string(CampaignState::kMaxObjectives) +
                              " objectives are supported");
  }
  check_ids(r, jobj, "/objectives", "objective");
  const std::size_t n = jobj.size();
  std::vector<Objective> objectives;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string p = at("/objectives", i);
    Objective o;
    o.id = static_cast<ObjectiveId>(i);
    o.loss = r.number(r.field(jobj[i], p, "loss"), at(p, "loss"));
    if (o.loss < 0.0) r.fail(at(p, "loss"), "loss must be non-negative");
    if (const json* v = r.optional_field(jobj[i], "label")) {
      o.label = r.str(*v, at(p, "label"));
    } else {
      o.label = "o" + std::to_string(i + 1);
    }
    objectives.push_back(std::move(o));
  }

  // Axes: a partition of the objectives.
  const json& jaxes = r.array(r.field(doc, "", "axes"), "/axes");
  if (jaxes.empty()) r.fail("/axes", "at least one axis is required");
  check_ids(r, jaxes, "/axes", "axis");
  std::vector<Axis> axes;
  std::vector<int> owner_axis(n, -1);
  for (std::size_t x = 0; x < jaxes.size(); ++x) {
    const std::string p = at("/axes", x);
    const std::string po = at(p, "objectives");
    const json& list = r.array(r.field(jaxes[x], p, "objectives"), po);
    if (list.empty()) r.fail(po, "axis " + std::to_string(x) + " has no objectives");
    Axis axis;
    axis.id = static_cast<AxisId>(x);
    for (std::size_t j = 0; j < list.size(); ++j) {
      const long long o = r.integer(list[j], at(po, j));
      if (o < 0 || o >= static_cast<long long>(n)) {
        r.fail(at(po, j), "unknown objective " + std::to_string(o));
      }
      if (owner_axis[o] >= 0) {
        r.fail(at(po, j), "objective " + std::to_string(o) + " appears in axis " +
                              std::to_string(owner_axis[o]) + " and axis " + std::to_string(x));
      }
      owner_axis[o] = static_cast<int>(x);
      axis.objectives.push_back(static_cast<ObjectiveId>(o));
    }
    axes.push_back(std::move(axis));
  }
  for (std::size_t o = 0; o < n; ++o) {
    if (owner_axis[o] < 0) {
      r.fail(at("/objectives", o), "objective " + std::to_string(o) + " belongs to no axis");
    }
  }

  // Commanders: each axis under exactly one.
  const json& jcmd = r.array(r.field(doc, "", "commanders"), "/commanders");
  if (jcmd.empty()) r.fail("/commanders", "at least one commander is required");
  check_ids(r, jcmd, "/commanders", "commander");
  std::vector<Commander> commanders;
  std::vector<int> owner_cmd(axes.size(), -1);
  for (std::size_t c = 0; c < jcmd.size(); ++c) {
    const std::string p = at("/commanders", c);
    const std::string pa = at(p, "axes");
    const json& list = r.array(r.field(jcmd[c], p, "axes"), pa);
    if (list.empty()) r.fail(pa, "commander " + std::to_string(c) + " is responsible for no axis");
    Commander cmd;
    cmd.id = static_cast<CommanderId>(c);
    for (std::size_t j = 0; j < list.size(); ++j) {
      const long long x = r.integer(list[j], at(pa, j));
      if (x < 0 || x >= static_cast<long long>(axes.size())) {
        r.fail(at(pa, j), "unknown axis " + std::to_string(x));
      }
      if (owner_cmd[x] >= 0) {
        r.fail(at(pa, j), "axis " + std::to_string(x) + " is assigned to commander " +
                              std::to_string(owner_cmd[x]) + " and commander " +
                              std::to_string(c));
      }
      owner_cmd[x] = static_cast<int>(c);
      cmd.axes.push_back(static_cast<AxisId>(x));
    }
    commanders.push_back(std::move(cmd));
  }
  for (std::size_t x = 0; x < axes.size(); ++x) {
    if (owner_cmd[x] < 0) r.fail(at("/axes", x), "axis " + std::to_string(x) + " has no commander");
  }

  const double discount = r.number(r.field(doc, "", "discount"), "/discount");
  if (!(discount > 0.0 && discount < 1.0)) {
    r.fail("/discount", "discount must lie strictly between 0 and 1");
  }

  // Probability model.
  const std::string pm = "/probability_model";
  const json& jm = r.field(doc, "", "probability_model");
  ProbabilityModel model(n, 0.0, 0.0);
  for (bool attack : {true, false}) {
    const char* key = attack ? "initial_attack" : "initial_reinforce";
    const std::string pk = at(pm, key);
    const json& block = r.field(jm, pm, key);
    for (Player pl : {Player::kOne, Player::kTwo}) {
      const char* pkey = pl == Player::kOne ? "player1" : "player2";
      const std::string pp = at(pk, pkey);
      const json& arr = r.array(r.field(block, pk, pkey), pp);
      if (arr.size() != n) {
        r.fail(pp, "expected " + std::to_string(n) + " probabilities, found " +
                       std::to_string(arr.size()));
      }
      for (std::size_t o = 0; o < n; ++o) {
        const double q = r.probability(arr[o], at(pp, o));
        if (attack) {
          model.set_initial_attack(pl, static_cast<ObjectiveId>(o), q);
        } else {
          model.set_initial_reinforce(pl, static_cast<ObjectiveId>(o), q);
        }
      }
    }
  }
  if (const json* imp = r.optional_field(jm, "improvements")) {
    const std::string pi = at(pm, "improvements");
    r.array(*imp, pi);
    for (std::size_t i = 0; i < imp->size(); ++i) {
      const std::string p = at(pi, i);
      const json& e = (*imp)[i];
      ImprovementEntry entry;
      entry.player = r.player(r.field(e, p, "player"), at(p, "player"));
      const long long target = r.integer(r.field(e, p, "target"), at(p, "target"));
      if (target < 0 || target >= static_cast<long long>(n)) {
        r.fail(at(p, "target"), "unknown objective " + std::to_string(target));
      }
      entry.target = static_cast<ObjectiveId>(target);
      const std::string kind = r.str(r.field(e, p, "kind"), at(p, "kind"));
      if (kind == "attack") {
        entry.kind = BattleKind::kAttack;
      } else if (kind == "reinforce") {
        entry.kind = BattleKind::kReinforce;
      } else {
        r.fail(at(p, "kind"), "kind must be \"attack\" or \"reinforce\"");
      }
      const std::string pc = at(p, "condition");
      const json& cond = r.array(r.field(e, p, "condition"), pc);
      for (std::size_t j = 0; j < cond.size(); ++j) {
        const long long o = r.integer(cond[j], at(pc, j));
        if (o < 0 || o >= static_cast<long long>(n)) {
          r.fail(at(pc, j), "unknown objective " + std::to_string(o));
        }
        entry.condition.push_back(static_cast<ObjectiveId>(o));
      }
      entry.boost = r.probability(r.field(e, p, "boost"), at(p, "boost"));
      try {
        model.add_improvement(std::move(entry));
      } catch (const std::exception& ex) {
        r.fail(p, ex.what());
      }
    }
  }
  if (const json* ovr = r.optional_field(jm, "overrides")) {
    const std::string po = at(pm, "overrides");
    r.array(*ovr, po);
    for (std::size_t i = 0; i < ovr->size(); ++i) {
      const std::string p = at(po, i);
      const json& e = (*ovr)[i];
      ProbabilityOverride entry;
      entry.state = parse_state(r, r.field(e, p, "state"), at(p, "state"), n);
      entry.player = r.player(r.field(e, p, "player"), at(p, "player"));
      const long long o = r.integer(r.field(e, p, "objective"), at(p, "objective"));
      if (o < 0 || o >= static_cast<long long>(n)) {
        r.fail(at(p, "objective"), "unknown objective " + std::to_string(o));
      }
      entry.objective = static_cast<ObjectiveId>(o);
      if (const json* a = r.optional_field(e, "alpha")) entry.alpha = r.probability(*a, at(p, "alpha"));
      if (const json* v = r.optional_field(e, "rho")) entry.rho = r.probability(*v, at(p, "rho"));
      if (!entry.alpha && !entry.rho) r.fail(p, "override sets neither alpha nor rho");
      try {
        model.add_override(std::move(entry));
      } catch (const std::exception& ex) {
        r.fail(p, ex.what());
      }
    }
  }

  std::optional<Campaign> campaign;
  try {
    campaign.emplace(std::move(objectives), std::move(axes), std::move(commanders), discount,
                     std::move(model));
  } catch (const CampaignError& e) {
    r.fail("", e.what());
  }

  const CampaignState initial =
      parse_state(r, r.field(doc, "", "initial_state"), "/initial_state", n);
  const InitialStateReport init = validate_initial_state(*campaign, initial);
  if (!init.ok()) r.fail("/initial_state", "initial state " + initial.to_string() + ": " + init.message());

  return Scenario{std::move(*campaign), initial, std::move(name)};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text_file(path), path.string());
}

std::string scenario_to_json(const Scenario& scenario) {
  return scenario_json(scenario).dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_text_file(path, scenario_to_json(scenario));
}

std::string scenario_digest(const Scenario& scenario) {
  return "sha256:" + sha256_hex(scenario_json(scenario).dump());
}

std::vector<std::vector<std::string>> axis_code_table(const Campaign& campaign) {
  std::vector<std::vector<std::string>> table;
  for (const Axis& axis : campaign.axes()) {
    const std::size_t len = axis.objectives.size();
    std::vector<std::string> codes;
    for (int code = 0; code < static_cast<int>(2 * len); ++code) {
      codes.push_back(to_string(StateSpace::axis_type_from_code(code, len)));
    }
    table.push_back(std::move(codes));
  }
  return table;
}

namespace {

json orders_json(const ActionProfile& action) {
  json out = json::array();
  for (std::size_t c = 0; c < action.orders.size(); ++c) {
    const Order& o = action.orders[c];
    json target = o.kind == OrderKind::kNone ? json(nullptr) : json(o.target);
    out.push_back(json::array({c, to_string(o.kind), target}));
  }
  return out;
}

json strategy_json(const std::vector<ActionProfile>& actions, const std::vector<double>& probs) {
  json out = json::array();
  for (std::size_t a = 0; a < actions.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    out.push_back({{"orders", orders_json(actions[a])}, {"probability", probs[a]}});
  }
  return out;
}

}  // namespace

std::string solution_to_json(const Scenario& scenario, const Solution& solution) {
  const Campaign& c = scenario.campaign;
  const StateSpace space(c);
  if (solution.values.size() != space.size() || solution.policy.num_states() != space.size()) {
    throw std::invalid_argument("solution does not match the scenario's state space");
  }
  json doc = json::object();
  doc["schema_version"] = std::string(kSchemaVersion);
  doc["kind"] = "solution";
  doc["scenario_digest"] = scenario_digest(scenario);
  doc["axis_codes"] = axis_code_table(c);
  doc["epsilon"] = solution.report.epsilon;
  doc["gamma"] = c.discount();
  doc["algorithm"] = to_string(solution.report.algorithm);
  doc["iterations"] = solution.report.iterations;
  doc["final_sup_delta"] = solution.report.final_sup_delta;
  doc["values"] = solution.values.values;
  json strategies = json::array();
  for (std::size_t s = 0; s < space.size(); ++s) {
    const CampaignState state = space.decode(s);
    strategies.push_back(
        {{"state", state.to_string()},
         {"player1", strategy_json(reduced_actions(c, state, Player::kOne),
                                   solution.policy.player1[s])},
         {"player2", strategy_json(reduced_actions(c, state, Player::kTwo),
                                   solution.policy.player2[s])}});
  }
  doc["strategies"] = std::move(strategies);
  return doc.dump(1) + "\n";
}

void save_solution(const Scenario& scenario, const Solution& solution,
                   const std::filesystem::path& path) {
  write_text_file(path, solution_to_json(scenario, solution));
}

SolutionFile parse_solution(std::string_view text, const Scenario& scenario,
                            const std::string& source) {
  const json doc = parse_json(text, source);
  const Reader r(text, source);
  const Campaign& c = scenario.campaign;
  if (!doc.is_object()) r.fail("", "solution must be a JSON object");
  if (r.str(r.field(doc, "", "schema_version"), "/schema_version") != kSchemaVersion) {
    r.fail("/schema_version", "unsupported schema_version");
  }
  SolutionFile out;
  out.digest = r.str(r.field(doc, "", "scenario_digest"), "/scenario_digest");
  const std::string expected = scenario_digest(scenario);
  if (out.digest != expected) {
    r.fail("/scenario_digest", "digest " + out.digest + " does not match scenario digest " +
                                   expected);
  }
  const json& codes = r.field(doc, "", "axis_codes");
  if (codes != json(axis_code_table(c))) {
    r.fail("/axis_codes", "axis-code table does not match the scenario's axes");
  }
  const double gamma = r.number(r.field(doc, "", "gamma"), "/gamma");
  if (gamma != c.discount()) r.fail("/gamma", "gamma differs from the scenario discount");

  Solution& sol = out.solution;
  sol.report.epsilon = r.number(r.field(doc, "", "epsilon"), "/epsilon");
  try {
    sol.report.algorithm = algorithm_from_string(r.str(r.field(doc, "", "algorithm"), "/algorithm"));
  } catch (const std::invalid_argument& e) {
    r.fail("/algorithm", e.what());
  }
  sol.report.iterations =
      static_cast<std::size_t>(r.integer(r.field(doc, "", "iterations"), "/iterations"));
  if (const json* d = r.optional_field(doc, "final_sup_delta")) {
    sol.report.final_sup_delta = r.number(*d, "/final_sup_delta");
  }

  const StateSpace space(c);
  const std::size_t n = space.size();
  sol.report.num_states = n;
  const json& values = r.array(r.field(doc, "", "values"), "/values");
  if (values.size() != n) {
    r.fail("/values", "expected " + std::to_string(n) + " values, found " +
                          std::to_string(values.size()));
  }
  sol.values.values.resize(n);
  for (std::size_t s = 0; s < n; ++s) sol.values[s] = r.number(values[s], at("/values", s));

  const json& strategies = r.array(r.field(doc, "", "strategies"), "/strategies");
  if (strategies.size() != n) {
    r.fail("/strategies", "expected " + std::to_string(n) + " entries, found " +
                              std::to_string(strategies.size()));
  }
  sol.policy.player1.resize(n);
  sol.policy.player2.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::string p = at("/strategies", s);
    const CampaignState state = space.decode(s);
    const CampaignState listed = parse_state(r, r.field(strategies[s], p, "state"), at(p, "state"),
                                             c.num_objectives());
    if (!(listed == state)) {
      r.fail(at(p, "state"), "expected state " + state.to_string() + " at index " +
                                 std::to_string(s));
    }
    for (Player pl : {Player::kOne, Player::kTwo}) {
      const char* key = pl == Player::kOne ? "player1" : "player2";
      const std::string pp = at(p, key);
      const auto actions = reduced_actions(c, state, pl);
      std::vector<double>& probs = sol.policy.strategy(pl, s);
      probs.assign(actions.size(), 0.0);
      const json& rows = r.array(r.field(strategies[s], p, key), pp);
      double total = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string pr = at(pp, i);
        const json& jorders = r.array(r.field(rows[i], pr, "orders"), at(pr, "orders"));
        ActionProfile action;
        action.orders.resize(c.num_commanders());
        if (jorders.size() != c.num_commanders()) {
          r.fail(at(pr, "orders"), "expected one order per commander");
        }
        for (std::size_t k = 0; k < jorders.size(); ++k) {
          const std::string pk = at(at(pr, "orders"), k);
          const json& triple = r.array(jorders[k], pk);
          if (triple.size() != 3) r.fail(pk, "order must be [commander, kind, target]");
          const long long cmd = r.integer(triple[0], at(pk, std::size_t{0}));
          if (cmd != static_cast<long long>(k)) r.fail(at(pk, std::size_t{0}), "orders must be listed by commander");
          Order ord;
          try {
            ord.kind = order_kind_from_string(r.str(triple[1], at(pk, std::size_t{1})));
          } catch (const std::invalid_argument& e) {
            r.fail(at(pk, std::size_t{1}), e.what());
          }
          ord.target = triple[2].is_null() ? -1
                                           : static_cast<ObjectiveId>(r.integer(triple[2], at(pk, std::size_t{2})));
          action.orders[k] = ord;
        }
        const auto it = std::find(actions.begin(), actions.end(), action);
        if (it == actions.end()) {
          r.fail(pr, "action " + to_string(action) + " is not a reduced action at state " +
                         state.to_string());
        }
        const double prob = r.probability(r.field(rows[i], pr, "probability"), at(pr, "probability"));
        probs[static_cast<std::size_t>(it - actions.begin())] += prob;
        total += prob;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        r.fail(pp, "strategy probabilities sum to " + json(total).dump());
      }
    }
  }
  return out;
}

SolutionFile load_solution(const std::filesystem::path& path, const Scenario& scenario) {
  return parse_solution(read_text_file(path), scenario, path.string());
}

std::string describe_order(const Campaign& campaign, CommanderId commander, const Order& order) {
  std::string out = "C" + std::to_string(commander) + ": " + to_string(order.kind);
  if (order.kind != OrderKind::kNone) {
    out += " o" + std::to_string(order.target);
    const std::string& label = campaign.objectives()[order.target].label;
    if (!label.empty()) out += " (" + label + ")";
  }
  return out;
}

std::string report(const Scenario& scenario, const Solution& solution,
                   const std::vector<CampaignState>& states) {
  const Campaign& c = scenario.campaign;
  const StateSpace space(c);
  std::ostringstream os;
  char buf[64];

  os << "Values\n";
  os << "  " << std::left << std::setw(static_cast<int>(std::max<std::size_t>(5, c.num_objectives())))
     << "state" << "  value\n";
  for (const CampaignState& s : states) {
    std::snprintf(buf, sizeof buf, "%.6f", solution.values[space.encode(s)]);
    os << "  " << std::setw(static_cast<int>(std::max<std::size_t>(5, c.num_objectives())))
       << s.to_string() << "  " << buf << "\n";
  }

  for (const CampaignState& s : states) {
    const std::size_t idx = space.encode(s);
    for (Player p : {Player::kOne, Player::kTwo}) {
      os << "\nStrategy of player " << to_int(p) << " at " << s.to_string() << "\n";
      const auto actions = reduced_actions(c, s, p);
      const auto& probs = solution.policy.strategy(p, idx);
      for (std::size_t a = 0; a < actions.size(); ++a) {
        if (probs[a] <= 0.0) continue;
        std::snprintf(buf, sizeof buf, "%.4f", probs[a]);
        os << "  " << buf << "  ";
        for (std::size_t k = 0; k < actions[a].orders.size(); ++k) {
          if (k > 0) os << "; ";
          os << describe_order(c, static_cast<CommanderId>(k), actions[a].orders[k]);
        }
        os << "\n";
      }
    }
  }

  std::size_t max1 = 0;
  std::size_t max2 = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const CampaignState s = space.decode(i);
    max1 = std::max(max1, reduced_action_count(c, s, Player::kOne));
    max2 = std::max(max2, reduced_action_count(c, s, Player::kTwo));
  }
  const SolveReport& rep = solution.report;
  os << "\nStatistics\n";
  os << "  objectives         " << c.num_objectives() << "\n";
  os << "  achievable states  " << space.size() << "\n";
  os << "  max actions (P1)   " << max1 << "\n";
  os << "  max actions (P2)   " << max2 << "\n";
  os << "  algorithm          " << to_string(rep.algorithm) << "\n";
  os << "  epsilon            " << rep.epsilon << "\n";
  os << "  iterations         " << rep.iterations << "\n";
  if (rep.wallclock_seconds > 0.0) {
    std::snprintf(buf, sizeof buf, "%.3f", rep.wallclock_seconds);
    os << "  runtime [s]        " << buf << "\n";
  } else {
    os << "  runtime [s]        n/a\n";
  }
  if (rep.lp_solves + rep.pure_saddle_hits > 0) {
    os << "  pure saddles       " << rep.pure_saddle_hits << "\n";
    os << "  LP solves          " << rep.lp_solves << "\n";
  }
  return os.str();
}

}  // namespace campaign
