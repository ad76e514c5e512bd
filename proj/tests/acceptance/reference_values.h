// Copyright 2026 The driftood Authors.
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

#ifndef DRIFTOOD_TESTS_ACCEPTANCE_REFERENCE_VALUES_H_
#define DRIFTOOD_TESTS_ACCEPTANCE_REFERENCE_VALUES_H_

#include <array>

namespace driftood::acceptance {

// Mean AUROC per timestep over 3 trials of the default synthetic benchmark
// (seed 1556), frozen from the first reference run. Tolerance +-0.005.
inline constexpr double kReferenceTolerance = 0.005;

inline constexpr std::array<double, 10> kReferenceTqpmAuroc = {
    0.815748, 0.831419, 0.815280, 0.811212, 0.806234,
    0.803860, 0.805523, 0.809549, 0.816023, 0.800530,
};

inline constexpr std::array<double, 10> kReferenceDpmAuroc = {
    0.793773, 0.810518, 0.794582, 0.790690, 0.782974,
    0.782135, 0.784091, 0.788303, 0.794084, 0.777713,
};

}  // namespace driftood::acceptance

#endif  // DRIFTOOD_TESTS_ACCEPTANCE_REFERENCE_VALUES_H_
