// Copyright 2026 The qdsim Authors
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

#include "qdsim/best_gate.hpp"

#include <algorithm>

namespace qdsim::rl {

bool BestGateTracker::consider(const PulseSchedule& schedule, double fidelity,
                               double duration_ns) {
  max_fidelity_ = std::max(max_fidelity_, fidelity);
  const bool success = fidelity > success_fidelity_;
  if (success) shortest_success_ns_ = std::min(shortest_success_ns_, duration_ns);

  bool better = !has_gate_;
  if (has_gate_) {
    const bool best_success = best_fidelity_ > success_fidelity_;
    if (success != best_success) {
      better = success;
    } else if (success) {
      better = duration_ns < best_duration_ns_ ||
               (duration_ns == best_duration_ns_ && fidelity > best_fidelity_);
    } else {
      better = fidelity > best_fidelity_;
    }
  }
  if (better) {
    has_gate_ = true;
    best_fidelity_ = fidelity;
    best_duration_ns_ = duration_ns;
    best_schedule_ = schedule;
  }
  return better;
}

}  // namespace qdsim::rl
