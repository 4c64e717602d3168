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

#ifndef CAMPAIGN_BENCH_UTIL_H_
#define CAMPAIGN_BENCH_UTIL_H_

#include <map>
#include <string>

#include "campaign/scenario_io.h"

namespace campaign::bench {

inline const Scenario& bundled(const std::string& name) {
  static std::map<std::string, Scenario> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    it = cache.emplace(name, load_scenario(std::string(CAMPAIGN_SCENARIO_DIR) + "/" + name + ".json"))
             .first;
  }
  return it->second;
}

}  // namespace campaign::bench

#endif  // CAMPAIGN_BENCH_UTIL_H_
