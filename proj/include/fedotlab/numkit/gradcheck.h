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

#ifndef FEDOTLAB_NUMKIT_GRADCHECK_H_
#define FEDOTLAB_NUMKIT_GRADCHECK_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fedotlab::numkit {

using ScalarFn = std::function<double(std::span<const double>)>;

inline constexpr double kDefaultFdStep = 1e-5;

// Central differences [f(p + h e_k) - f(p - h e_k)] / 2h for every k.
// Throws NumericalError naming the coordinate if f is not finite there.
std::vector<double> FiniteDiffGrad(const ScalarFn& f, std::span<const double> point,
                                   double step = kDefaultFdStep);

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::size_t worst_coordinate = 0;
  double fd_step = kDefaultFdStep;
};

// Normwise relative error max_k |a_k - n_k| / max(|a|_inf, |n|_inf, floor).
// The floor keeps an all-zero gradient pair from dividing by zero.
GradCheckReport CompareGradients(std::span<const double> analytic,
                                 std::span<const double> numeric, double fd_step,
                                 double floor = 1e-12);

}  // namespace fedotlab::numkit

#endif  // FEDOTLAB_NUMKIT_GRADCHECK_H_
