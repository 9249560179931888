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

#include "fedotlab/shift/shift_gen.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fedotlab/errors.h"

namespace fedotlab::shift {
namespace {

bool InUnit(double v) { return v >= 0.0 && v <= 1.0; }

std::vector<double> SplitCsv(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ValidationError("malformed CSV cell '" + cell + "'");
    }
  }
  return out;
}

}  // namespace

void ValidateShift(const ShiftSpec& spec) {
  if (const auto* affine = std::get_if<AffineShift>(&spec)) {
    if (affine->s.size() != affine->z.size()) throw ValidationError("affine shift: |s| != |z|");
    for (double s : affine->s) {
      if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("affine shift: scales must be > 0");
    }
    return;
  }
  const auto& color = std::get<ColorShift>(spec);
  for (int c = 0; c < 3; ++c) {
    if (!InUnit(color.a[c]) || !InUnit(color.b[c])) {
      throw ValidationError("color shift: a and b must lie in [0,1]^3");
    }
  }
  if (!(color.zeta > 0.0)) throw ValidationError("color shift: zeta must be > 0");
}

std::vector<double> ApplyAffine(std::span<const double> x, const AffineShift& spec) {
  if (x.size() != spec.s.size()) throw ArgumentError("ApplyAffine: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = spec.s[j] * x[j] + spec.z[j];
  return out;
}

std::vector<double> InvertAffine(std::span<const double> x, const AffineShift& spec) {
  if (x.size() != spec.s.size()) throw ArgumentError("InvertAffine: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - spec.z[j]) / spec.s[j];
  return out;
}

std::array<double, 3> ApplyColor(double intensity, const ColorShift& spec) {
  if (!InUnit(intensity)) throw ValidationError("ApplyColor: intensity outside [0,1]");
  if (intensity <= spec.zeta) return spec.a;
  return {intensity * spec.b[0], intensity * spec.b[1], intensity * spec.b[2]};
}

std::vector<ShiftSpec> GenClientShifts(std::size_t n, ShiftKind kind, std::size_t dim, double sigma,
                                       const numkit::RngStream& rng) {
  std::vector<ShiftSpec> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    numkit::RngStream r = rng.Split("shift", i);
    if (kind == ShiftKind::kAffine) {
      AffineShift a{std::vector<double>(dim), std::vector<double>(dim)};
      for (auto& s : a.s) s = r.Uniform(0.5, 1.5);
      for (auto& z : a.z) z = sigma * r.Normal();
      out.emplace_back(std::move(a));
    } else {
      ColorShift c;
      for (auto& v : c.a) v = r.Uniform01();
      for (auto& v : c.b) v = r.Uniform01();
      out.emplace_back(c);
    }
  }
  return out;
}

void ClientDataset::Validate() const {
  if (labels.empty()) throw ValidationError("client dataset is empty");
  if (features.rows() != labels.size()) throw ValidationError("features/labels row mismatch");
  if (!features.AllFinite()) throw ValidationError("client dataset has non-finite features");
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw ValidationError("label out of range");
    }
  }
}

void BaseTaskSpec::Validate() const {
  if (num_classes < 2) throw ValidationError("base task needs K >= 2");
  if (class_means.rows() != num_classes || class_means.cols() != d) {
    throw ValidationError("class_means must be K x d");
  }
  if (!(class_cov_scale > 0.0)) throw ValidationError("class_cov_scale must be > 0");
  for (std::size_t a = 0; a < num_classes; ++a) {
    for (std::size_t b = a + 1; b < num_classes; ++b) {
      const auto ra = class_means.row(a);
      if (std::equal(ra.begin(), ra.end(), class_means.row(b).begin())) {
        throw ValidationError("class means must be pairwise distinct");
      }
    }
  }
  if (n_train_per_client == 0 || n_test_per_client == 0) {
    throw ValidationError("per-client sample counts must be positive");
  }
}

Matrix SimplexMeans(std::size_t num_classes, std::size_t d, double separation) {
  if (num_classes > d) throw ArgumentError("SimplexMeans needs K <= d");
  Matrix means(num_classes, d);
  for (std::size_t k = 0; k < num_classes; ++k) means(k, k) = separation / std::sqrt(2.0);
  return means;
}

ClientDataset ApplyShift(const ClientDataset& base, const ShiftSpec& spec) {
  ClientDataset out;
  out.labels = base.labels;
  out.client_id = base.client_id;
  out.num_classes = base.num_classes;
  if (const auto* affine = std::get_if<AffineShift>(&spec)) {
    out.features = Matrix(base.size(), base.dim());
    for (std::size_t r = 0; r < base.size(); ++r) {
      const auto y = ApplyAffine(base.features.row(r), *affine);
      std::copy(y.begin(), y.end(), out.features.row(r).begin());
    }
    return out;
  }
  const auto& color = std::get<ColorShift>(spec);
  out.features = Matrix(base.size(), 3 * base.dim());
  for (std::size_t r = 0; r < base.size(); ++r) {
    for (std::size_t j = 0; j < base.dim(); ++j) {
      const auto rgb = ApplyColor(base.features(r, j), color);
      for (int c = 0; c < 3; ++c) out.features(r, 3 * j + c) = rgb[c];
    }
  }
  return out;
}

FederatedTask MakeFederatedTask(const BaseTaskSpec& base, std::vector<ShiftSpec> shifts,
                                const numkit::RngStream& rng) {
  base.Validate();
  FederatedTask task;
  for (const auto& s : shifts) ValidateShift(s);
  const bool color = !shifts.empty() && std::holds_alternative<ColorShift>(shifts.front());
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (const auto* a = std::get_if<AffineShift>(&shifts[i]); a && a->s.size() != base.d) {
      throw ValidationError("affine shift dimension differs from the base task");
    }
    if (std::holds_alternative<ColorShift>(shifts[i]) != color) {
      throw ValidationError("clients must share one shift family");
    }
    numkit::RngStream r = rng.Split("client", i);
    auto draw = [&](std::size_t m) {
      ClientDataset ds{Matrix(m, base.d), std::vector<int>(m), i, base.num_classes};
      for (std::size_t j = 0; j < m; ++j) {
        const int y = static_cast<int>(r.Below(base.num_classes));
        ds.labels[j] = y;
        for (std::size_t c = 0; c < base.d; ++c) {
          double v = base.class_means(y, c) + base.class_cov_scale * r.Normal();
          if (color) v = std::clamp(v, 0.0, 1.0);
          ds.features(j, c) = v;
        }
      }
      return ds;
    };
    task.train_base.push_back(draw(base.n_train_per_client));
    task.test_base.push_back(draw(base.n_test_per_client));
    task.train.push_back(ApplyShift(task.train_base.back(), shifts[i]));
    task.test.push_back(ApplyShift(task.test_base.back(), shifts[i]));
  }
  task.shifts = std::move(shifts);
  return task;
}

void WriteClientCsv(std::ostream& out, const ClientDataset& data) {
  out << "d,K,m,client_id\n"
      << data.dim() << ',' << data.num_classes << ',' << data.size() << ',' << data.client_id
      << '\n';
  const auto old = out.precision(17);
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (double v : data.features.row(r)) out << v << ',';
    out << data.labels[r] << '\n';
  }
  out.precision(old);
}

ClientDataset ReadClientCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "d,K,m,client_id") {
    throw ValidationError("dataset CSV: missing 'd,K,m,client_id' header");
  }
  if (!std::getline(in, line)) throw ValidationError("dataset CSV: missing size row");
  const auto head = SplitCsv(line);
  if (head.size() != 4) throw ValidationError("dataset CSV: size row needs 4 fields");
  const auto d = static_cast<std::size_t>(head[0]);
  ClientDataset ds{Matrix(static_cast<std::size_t>(head[2]), d),
                   std::vector<int>(static_cast<std::size_t>(head[2])),
                   static_cast<std::size_t>(head[3]), static_cast<std::size_t>(head[1])};
  for (std::size_t r = 0; r < ds.labels.size(); ++r) {
    if (!std::getline(in, line)) throw ValidationError("dataset CSV: truncated at row " + std::to_string(r));
    const auto row = SplitCsv(line);
    if (row.size() != d + 1) throw ValidationError("dataset CSV: wrong width at row " + std::to_string(r));
    std::copy_n(row.begin(), d, ds.features.row(r).begin());
    ds.labels[r] = static_cast<int>(row[d]);
  }
  ds.Validate();
  return ds;
}

}  // namespace fedotlab::shift
