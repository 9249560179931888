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

#ifndef FEDOTLAB_SHIFT_SHIFT_GEN_H_
#define FEDOTLAB_SHIFT_SHIFT_GEN_H_

// Per-client distribution shifts over a shared synthetic base task.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "fedotlab/numkit/matrix.h"
#include "fedotlab/numkit/rng.h"

namespace fedotlab::shift {

using numkit::Matrix;

// x' = diag(s) x + z
struct AffineShift {
  std::vector<double> s;
  std::vector<double> z;
};

// Intensity x maps to a if x <= zeta, else to x * b.
struct ColorShift {
  std::array<double, 3> a{};
  std::array<double, 3> b{};
  double zeta = 1e-4;
};

using ShiftSpec = std::variant<AffineShift, ColorShift>;

enum class ShiftKind { kAffine, kColor };

void ValidateShift(const ShiftSpec& spec);

std::vector<double> ApplyAffine(std::span<const double> x, const AffineShift& spec);
std::vector<double> InvertAffine(std::span<const double> x, const AffineShift& spec);
std::array<double, 3> ApplyColor(double intensity, const ColorShift& spec);

// Affine: s ~ Unif[0.5, 1.5]^dim, z ~ N(0, sigma^2 I). Color: a, b ~ Unif[0,1]^3
// (dim and sigma unused). Client i draws from rng.Split("shift", i).
std::vector<ShiftSpec> GenClientShifts(std::size_t n, ShiftKind kind, std::size_t dim, double sigma,
                                       const numkit::RngStream& rng);

struct ClientDataset {
  Matrix features;  // m x d
  std::vector<int> labels;
  std::size_t client_id = 0;
  std::size_t num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
  void Validate() const;
};

// Gaussian class-conditional mixture: y ~ Unif{0..K-1}, x = mean_y +
// class_cov_scale * N(0, I). For color tasks the draw is clamped to [0, 1]
// and read as d intensities, giving 3d shifted features.
struct BaseTaskSpec {
  std::size_t d = 10;
  std::size_t num_classes = 3;
  Matrix class_means;  // K x d
  double class_cov_scale = 1.0;
  std::size_t n_train_per_client = 100;
  std::size_t n_test_per_client = 500;

  void Validate() const;
};

// K means with pairwise distance `separation`: (separation / sqrt 2) e_k.
// Requires K <= d.
Matrix SimplexMeans(std::size_t num_classes, std::size_t d, double separation);

struct FederatedTask {
  std::vector<ShiftSpec> shifts;
  std::vector<ClientDataset> train;
  std::vector<ClientDataset> test;
  // The same draws before the client shift is applied.
  std::vector<ClientDataset> train_base;
  std::vector<ClientDataset> test_base;

  std::size_t num_clients() const { return train.size(); }
};

// Client i samples from rng.Split("client", i); test draws follow train draws.
FederatedTask MakeFederatedTask(const BaseTaskSpec& base, std::vector<ShiftSpec> shifts,
                                const numkit::RngStream& rng);

ClientDataset ApplyShift(const ClientDataset& base, const ShiftSpec& spec);

// CSV: "d,K,m,client_id" header, one row of those values, then m rows of d
// features followed by the label.
void WriteClientCsv(std::ostream& out, const ClientDataset& data);
ClientDataset ReadClientCsv(std::istream& in);

}  // namespace fedotlab::shift

#endif  // FEDOTLAB_SHIFT_SHIFT_GEN_H_
