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

#ifndef FEDOTLAB_EXP_CHECKPOINT_H_
#define FEDOTLAB_EXP_CHECKPOINT_H_

// Parameter snapshots. Layout:
//
//   FEDOTCKPT 1
//   <count>
//   <name> <rows> <cols> <offset>     (count lines, offset in doubles)
//   END
//   <payload: little-endian float64, row-major, tensors back to back>
//
// Tensor names: "w.<t>", "theta.<i>.<t>", "potential.shared.<t>",
// "potential.head.<i>.<t>".

#include <iosfwd>
#include <string>
#include <vector>

#include "fedotlab/model/model_zoo.h"

namespace fedotlab::exp {

struct NamedTensor {
  std::string name;
  numkit::Matrix value;
};

std::vector<NamedTensor> FlattenBundle(const model::ParamBundle& bundle);

void WriteCheckpoint(std::ostream& out, const std::vector<NamedTensor>& tensors);
// Throws ValidationError on a bad magic line, truncated payload or
// inconsistent offsets.
std::vector<NamedTensor> ReadCheckpoint(std::istream& in);

void SaveCheckpoint(const std::string& path, const model::ParamBundle& bundle);
std::vector<NamedTensor> LoadCheckpoint(const std::string& path);

// Rebuilds a bundle of the given families from a checkpoint. Throws
// ValidationError when a tensor is missing or has the wrong shape.
model::ParamBundle RestoreBundle(const std::vector<NamedTensor>& tensors,
                                 const model::ParamBundle& like);

}  // namespace fedotlab::exp

#endif  // FEDOTLAB_EXP_CHECKPOINT_H_
