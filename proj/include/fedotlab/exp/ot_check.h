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

#ifndef FEDOTLAB_EXP_OT_CHECK_H_
#define FEDOTLAB_EXP_OT_CHECK_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "fedotlab/numkit/rng.h"
#include "fedotlab/ot/discrete_dist.h"
#include "fedotlab/ot/ot_core.h"

namespace fedotlab::exp {

inline constexpr double kOtValueTolerance = 1e-6;  // |primal - barycenter|, duality gap
inline constexpr double kPushforwardTolerance = 1e-2;

struct OtCheckReport {
  std::size_t n = 0;
  ot::CostKind cost = ot::CostKind::kW2;
  double primal = 0.0;
  double barycenter = 0.0;
  double best_dual = 0.0;
  double gap = 0.0;           // primal - best_dual
  double dual_violation = 0.0;
  // W1 distance between the two barycentric pushforwards; n = 2, 1-D, W2 only.
  std::optional<double> pushforward;
  // The monotone coupling splits no atom (equal cumulative-weight breakpoints),
  // so it is a transport map and the pushforwards must agree. Only then does
  // the pushforward distance count toward ok().
  bool pushforward_is_map = false;

  double primal_barycenter_diff() const;
  bool ok() const;
};

// Throws ResourceError past the joint-size cap.
OtCheckReport RunOtCheck(const std::vector<ot::DiscreteDist>& dists, ot::CostKind cost,
                         const ot::NaryOptions& options = {});

// n distributions with k atoms in d dimensions: coordinates Unif[-1, 1],
// weights Unif(0.1, 1] normalized.
// True when the sorted cumulative weights of two 1-D distributions have the
// same breakpoints within 1e-12.
bool MonotoneCouplingIsMap(const ot::DiscreteDist& a, const ot::DiscreteDist& b);

std::vector<ot::DiscreteDist> RandomInstance(std::size_t n, std::size_t k, std::size_t d,
                                             numkit::RngStream& rng);

}  // namespace fedotlab::exp

#endif  // FEDOTLAB_EXP_OT_CHECK_H_
