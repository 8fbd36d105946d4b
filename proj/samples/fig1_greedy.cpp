// Copyright 2026 The dsfkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scores nine objects by sqrt-concave shape counts and picks three with
// greedy maximization.

#include <cstdio>

#include "dsfkit/optimize.hpp"
#include "dsfkit/zoo.hpp"

int main() {
  using namespace dsfkit;
  const DsfModel g = presets::shape_features();
  const auto& v = g.ground();
  const char* shapes[] = {"square", "triangle", "circle"};
  for (std::size_t e = 0; e < v.size(); ++e) {
    const auto& c = presets::shape_counts()[e];
    std::printf("%s: %d %s, %d %s, %d %s -> g = %.6f\n", v.label(e).c_str(),
                c[0], shapes[0], c[1], shapes[1], c[2], shapes[2],
                evaluate(g, Subset(v, {e})));
  }
  const auto r = greedy_max(g, Constraint::cardinality(3));
  std::printf("greedy picks:");
  for (std::size_t i = 0; i < r.trace.picks.size(); ++i) {
    std::printf(" %s (+%.6f)", v.label(r.trace.picks[i]).c_str(),
                r.trace.gains[i]);
  }
  std::printf("\nsummary %s, value %.6f\n", r.set.to_string().c_str(), r.value);
  return 0;
}
