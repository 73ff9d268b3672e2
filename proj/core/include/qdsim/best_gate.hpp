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

#pragma once

#include <limits>

#include "qdsim/schedule.hpp"

namespace qdsim::rl {

// Keeps the best gate seen across episodes. A gate above `success_fidelity`
// beats any gate below it; among successes the shorter one wins, otherwise
// the higher fidelity wins.
class BestGateTracker {
 public:
  explicit BestGateTracker(double success_fidelity) : success_fidelity_(success_fidelity) {}

  // Returns true if this episode became the new best.
  bool consider(const PulseSchedule& schedule, double fidelity, double duration_ns);

  bool has_gate() const { return has_gate_; }
  double best_fidelity() const { return best_fidelity_; }
  double best_duration_ns() const { return best_duration_ns_; }
  const PulseSchedule& best_schedule() const { return best_schedule_; }
  // Highest final fidelity of any episode, independent of the ranking above.
  double max_fidelity() const { return max_fidelity_; }
  // Shortest episode that finished above success_fidelity; +inf if none.
  double shortest_success_ns() const { return shortest_success_ns_; }
  double success_fidelity() const { return success_fidelity_; }

 private:
  double success_fidelity_;
  bool has_gate_ = false;
  double best_fidelity_ = 0.0;
  double best_duration_ns_ = 0.0;
  double max_fidelity_ = 0.0;
  double shortest_success_ns_ = std::numeric_limits<double>::infinity();
  PulseSchedule best_schedule_;
};

}  // namespace qdsim::rl
