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

#ifndef FEDOTLAB_NUMKIT_RNG_H_
#define FEDOTLAB_NUMKIT_RNG_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "fedotlab/numkit/matrix.h"

namespace fedotlab::numkit {

// Counter-based splittable stream. Draw k of stream (seed, stream_id) is
// Mix64(key + (k + 1) * golden) with key derived from both ids, so any draw
// is a pure function of (seed, stream_id, k) and streams never share state.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  // Stream id for a named purpose, e.g. Named(seed, "train", client).
  static RngStream Named(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

  // Child stream; independent of the parent and of other tags.
  RngStream Split(std::uint64_t tag) const;
  RngStream Split(std::string_view tag, std::uint64_t index = 0) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();
  double Uniform(double lo, double hi);
  // Standard normal via Box-Muller; consumes two draws.
  double Normal();
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t Mix64(std::uint64_t x);

// Matrix of i.i.d. Unif[lo, hi) entries drawn from `stream`.
Matrix DrawUniform(RngStream& stream, double lo, double hi, std::size_t rows, std::size_t cols);

}  // namespace fedotlab::numkit

#endif  // FEDOTLAB_NUMKIT_RNG_H_
