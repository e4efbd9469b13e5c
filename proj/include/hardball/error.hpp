// Copyright 2026 The hardball Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardball {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HARDBALL_ERROR(Name)          \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

HARDBALL_ERROR(InvalidInput);
HARDBALL_ERROR(InvalidState);
HARDBALL_ERROR(ZeroEnergy);
HARDBALL_ERROR(NotInContact);
HARDBALL_ERROR(NotApproaching);
HARDBALL_ERROR(ZeroVector);
HARDBALL_ERROR(OutOfSpan);
HARDBALL_ERROR(NotBracketed);
HARDBALL_ERROR(NoGap);
HARDBALL_ERROR(NoCollisions);
HARDBALL_ERROR(SamplingExhausted);
HARDBALL_ERROR(DriftExceeded);

#undef HARDBALL_ERROR

/// Two or more contacts chained through shared balls at (numerically) the
/// same instant. The outgoing velocities are not determined by the
/// conservation laws there, so the engine refuses to continue.
class SimultaneousCollision : public Error {
 public:
  SimultaneousCollision(double time, std::vector<std::pair<int, int>> pairs)
      : Error(describe(time, pairs)), time_(time), pairs_(std::move(pairs)) {}

  double time() const noexcept { return time_; }
  const std::vector<std::pair<int, int>>& pairs() const noexcept { return pairs_; }

 private:
  static std::string describe(double time, const std::vector<std::pair<int, int>>& pairs) {
    std::string msg = "simultaneous collision at t=" + std::to_string(time) + " involving pairs";
    for (auto [j, k] : pairs) msg += " (" + std::to_string(j) + "," + std::to_string(k) + ")";
    return msg;
  }

  double time_;
  std::vector<std::pair<int, int>> pairs_;
};

}  // namespace hardball
