// SPDX-License-Identifier: Apache-2.0
//
// mmnoma: hybrid-precoding mmWave MIMO-NOMA link simulator with SWIPT
// Copyright (C) 2026 The mmnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mmnoma/clustering.hpp"

namespace mmnoma {

int GroupingPlan::n_users() const {
  int total = 0;
  for (const auto& beam : beams) total += static_cast<int>(beam.size());
  return total;
}

std::vector<int> GroupingPlan::beam_of() const {
  std::vector<int> out(n_users(), -1);
  for (int g = 0; g < n_beams(); ++g) {
    for (int k : beams[g]) out.at(k) = g;
  }
  return out;
}

GroupingPlan single_user_beams(int n_users) {
  GroupingPlan plan;
  plan.beams.resize(n_users);
  for (int k = 0; k < n_users; ++k) {
    plan.cluster_heads.push_back(k);
    plan.beams[k] = {k};
  }
  return plan;
}

nlohmann::json to_json(const GroupingPlan& plan) {
  return {{"heads", plan.cluster_heads},
          {"beams", plan.beams},
          {"delta_final", plan.final_threshold},
          {"sic_order_applied", plan.sic_order_applied}};
}

}  // namespace mmnoma
