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

#ifndef FEDOTLAB_OT_DISCRETE_DIST_H_
#define FEDOTLAB_OT_DISCRETE_DIST_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fedotlab/numkit/matrix.h"

namespace fedotlab::ot {

using numkit::Matrix;

// Binary ground cost c~. W1: |x - x'|_2. W2: 1/2 |x - x'|_2^2.
// The n-ary cost is always the infimal convolution min_x' sum_i c~(x', x_i).
enum class CostKind { kW1, kW2 };

double GroundCost(CostKind kind, std::span<const double> a, std::span<const double> b);
const char* CostKindName(CostKind kind);
CostKind ParseCostKind(const std::string& name);

// Finite-support probability distribution. Points are the rows of a k x d
// matrix. Weights are nonnegative and sum to 1 within 1e-12.
class DiscreteDist {
 public:
  DiscreteDist(Matrix points, std::vector<double> weights);

  // Divides raw nonnegative weights by their sum before validating.
  static DiscreteDist Normalized(Matrix points, std::vector<double> raw_weights);
  static DiscreteDist Uniform(Matrix points);
  static DiscreteDist Dirac(std::span<const double> point);
  // 1-D convenience constructor.
  static DiscreteDist OnLine(std::span<const double> xs, std::span<const double> weights);

  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return points_.cols(); }
  std::span<const double> point(std::size_t k) const { return points_.row(k); }
  double weight(std::size_t k) const { return weights_[k]; }
  const Matrix& points() const { return points_; }
  std::span<const double> weights() const { return weights_; }

 private:
  Matrix points_;
  std::vector<double> weights_;
};

// Text format: header "d k", then k lines of d coordinates followed by the weight.
DiscreteDist ReadDiscreteDist(std::istream& in);
void WriteDiscreteDist(std::ostream& out, const DiscreteDist& dist);
DiscreteDist LoadDiscreteDist(const std::string& path);

// Joint probability tensor over the product of the marginals' supports,
// stored flat in row-major (last marginal fastest) order.
struct Coupling {
  std::vector<DiscreteDist> marginals;
  std::vector<double> joint_weights;

  std::vector<std::size_t> Shape() const;
  std::size_t FlatIndex(std::span<const std::size_t> index) const;
  // Largest per-atom deviation between an axis sum and its marginal weight.
  double MaxMarginalError() const;
};

struct GaussianSpec {
  std::vector<double> mean;
  Matrix covariance;

  // Throws ValidationError unless the covariance is symmetric (1e-12) and
  // positive definite.
  void Validate() const;
};

}  // namespace fedotlab::ot

#endif  // FEDOTLAB_OT_DISCRETE_DIST_H_
