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

#include "fedotlab/ot/discrete_dist.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include <Eigen/Dense>

#include "fedotlab/errors.h"

namespace fedotlab::ot {

double GroundCost(CostKind kind, std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("GroundCost: dimension mismatch");
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sq += diff * diff;
  }
  return kind == CostKind::kW1 ? std::sqrt(sq) : 0.5 * sq;
}

const char* CostKindName(CostKind kind) { return kind == CostKind::kW1 ? "W1" : "W2"; }

CostKind ParseCostKind(const std::string& name) {
  if (name == "W1" || name == "w1") return CostKind::kW1;
  if (name == "W2" || name == "w2") return CostKind::kW2;
  throw ArgumentError("unknown cost kind '" + name + "' (expected W1 or W2)");
}

DiscreteDist::DiscreteDist(Matrix points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("DiscreteDist: empty support");
  if (points_.rows() != weights_.size()) {
    throw ValidationError("DiscreteDist: point count does not match weight count");
  }
  if (points_.cols() == 0) throw ValidationError("DiscreteDist: zero-dimensional points");
  if (!points_.AllFinite()) throw ValidationError("DiscreteDist: non-finite point");
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError("DiscreteDist: weights must be finite and nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("DiscreteDist: weights sum to " + std::to_string(total) +
                          ", expected 1");
  }
}

DiscreteDist DiscreteDist::Normalized(Matrix points, std::vector<double> raw_weights) {
  const double total = std::accumulate(raw_weights.begin(), raw_weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ValidationError("DiscreteDist: weights must have a positive finite sum");
  }
  for (double& w : raw_weights) w /= total;
  return DiscreteDist(std::move(points), std::move(raw_weights));
}

DiscreteDist DiscreteDist::Uniform(Matrix points) {
  const std::size_t k = points.rows();
  return Normalized(std::move(points), std::vector<double>(k, 1.0));
}

DiscreteDist DiscreteDist::Dirac(std::span<const double> point) {
  return DiscreteDist(Matrix(1, point.size(), std::vector<double>(point.begin(), point.end())),
                      {1.0});
}

DiscreteDist DiscreteDist::OnLine(std::span<const double> xs, std::span<const double> weights) {
  return Normalized(Matrix(xs.size(), 1, std::vector<double>(xs.begin(), xs.end())),
                    std::vector<double>(weights.begin(), weights.end()));
}

DiscreteDist ReadDiscreteDist(std::istream& in) {
  std::size_t d = 0;
  std::size_t k = 0;
  if (!(in >> d >> k) || d == 0 || k == 0) {
    throw ValidationError("distribution file: expected header 'd k' with positive values");
  }
  Matrix points(k, d);
  std::vector<double> weights(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (!(in >> points(i, j))) {
        throw ValidationError("distribution file: bad coordinate on atom " + std::to_string(i));
      }
    }
    if (!(in >> weights[i])) {
      throw ValidationError("distribution file: bad weight on atom " + std::to_string(i));
    }
  }
  return DiscreteDist::Normalized(std::move(points), std::move(weights));
}

void WriteDiscreteDist(std::ostream& out, const DiscreteDist& dist) {
  out << dist.dim() << ' ' << dist.size() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (double x : dist.point(i)) out << x << ' ';
    out << dist.weight(i) << '\n';
  }
}

DiscreteDist LoadDiscreteDist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open distribution file '" + path + "'");
  return ReadDiscreteDist(in);
}

std::vector<std::size_t> Coupling::Shape() const {
  std::vector<std::size_t> shape;
  shape.reserve(marginals.size());
  for (const auto& m : marginals) shape.push_back(m.size());
  return shape;
}

std::size_t Coupling::FlatIndex(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < marginals.size(); ++i) flat = flat * marginals[i].size() + index[i];
  return flat;
}

double Coupling::MaxMarginalError() const {
  const auto shape = Shape();
  std::vector<std::vector<double>> sums(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) sums[i].assign(shape[i], 0.0);
  std::vector<std::size_t> idx(shape.size(), 0);
  for (double w : joint_weights) {
    for (std::size_t i = 0; i < shape.size(); ++i) sums[i][idx[i]] += w;
    for (std::size_t i = shape.size(); i-- > 0;) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < shape.size(); ++i)
    for (std::size_t a = 0; a < shape[i]; ++a)
      worst = std::max(worst, std::abs(sums[i][a] - marginals[i].weight(a)));
  return worst;
}

void GaussianSpec::Validate() const {
  const std::size_t d = mean.size();
  if (d == 0 || covariance.rows() != d || covariance.cols() != d) {
    throw ValidationError("GaussianSpec: covariance shape does not match mean");
  }
  Eigen::MatrixXd cov(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (std::abs(covariance(i, j) - covariance(j, i)) > 1e-12) {
        throw ValidationError("GaussianSpec: covariance not symmetric");
      }
      cov(i, j) = covariance(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw ValidationError("GaussianSpec: covariance not positive definite");
  }
}

}  // namespace fedotlab::ot
