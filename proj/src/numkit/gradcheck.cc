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

#include "fedotlab/numkit/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedotlab/errors.h"

namespace fedotlab::numkit {

std::vector<double> FiniteDiffGrad(const ScalarFn& f, std::span<const double> point,
                                   double step) {
  if (!(step > 0.0)) throw ArgumentError("FiniteDiffGrad: step must be positive");
  std::vector<double> p(point.begin(), point.end());
  std::vector<double> grad(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double orig = p[k];
    p[k] = orig + step;
    const double fp = f(p);
    p[k] = orig - step;
    const double fm = f(p);
    p[k] = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NumericalError("FiniteDiffGrad: non-finite function value at coordinate " +
                           std::to_string(k));
    }
    grad[k] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

GradCheckReport CompareGradients(std::span<const double> analytic,
                                 std::span<const double> numeric, double fd_step,
                                 double floor) {
  if (analytic.size() != numeric.size()) {
    throw ArgumentError("CompareGradients: length mismatch");
  }
  GradCheckReport report;
  report.fd_step = fd_step;
  double scale = floor;
  double worst = 0.0;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    scale = std::max({scale, std::abs(analytic[k]), std::abs(numeric[k])});
    const double diff = std::abs(analytic[k] - numeric[k]);
    if (diff > worst) {
      worst = diff;
      report.worst_coordinate = k;
    }
  }
  report.max_rel_err = worst / scale;
  return report;
}

}  // namespace fedotlab::numkit
