// Copyright 2026 The fedotlab Authors.
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

#ifndef FEDOTLAB_EXP_GRADCHECK_SUITE_H_
#define FEDOTLAB_EXP_GRADCHECK_SUITE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fedotlab::exp {

inline constexpr double kGradcheckTolerance = 1e-5;

struct GradcheckBlock {
  std::string name;
  double max_rel_err = 0.0;
  std::size_t points = 0;
  std::size_t resampled = 0;  // draws rejected for sitting near a ReLU kink
};

struct GradcheckReport {
  std::vector<GradcheckBlock> blocks;
  bool ok() const;
};

// Block names in report order.
const std::vector<std::string>& GradcheckBlockNames();

// Central differences against every analytic gradient block at `points`
// random points each. `fault_block` (when nonempty) adds 1e-3 to the first
// analytic coordinate of that block; unknown names throw ArgumentError.
GradcheckReport RunGradcheckSuite(std::uint64_t seed = 0, const std::string& fault_block = "",
                                  std::size_t points = 10);

}  // namespace fedotlab::exp

#endif  // FEDOTLAB_EXP_GRADCHECK_SUITE_H_
