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

namespace hardball {

/// Numerical thresholds shared by every module. All values are in the
/// natural units of the normalized problem (unit radii, unit kinetic energy).
struct Tolerances {
  double contact = 1e-9;       // |x^j - x^k| = 2 within this
  double overlap = 1e-9;       // allowed penetration of a valid state
  double conserve = 1e-9;      // momentum / energy / center of mass
  double zero = 1e-12;         // "nonzero" vectors and normal speeds
  double simultaneous = 1e-9;  // chained contacts closer than this in time
  double mono = 1e-8;          // slack for sampled monotonicity claims
  double t0 = 1e-9;            // time-origin location
  double drift = 1e-6;         // contact distance drift that aborts a run
};

inline constexpr Tolerances default_tolerances{};

}  // namespace hardball
