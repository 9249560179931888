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

#include "fedotlab/numkit/rng.h"

#include <cmath>
#include <numbers>

#include "fedotlab/errors.h"

namespace fedotlab::numkit {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t HashTag(std::string_view tag) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t Mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(Mix64(seed + kGolden) ^ Mix64(~stream_id)) {}

RngStream RngStream::Named(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  return RngStream(seed, Mix64(HashTag(tag) + kGolden * (index + 1)));
}

RngStream RngStream::Split(std::uint64_t tag) const {
  return RngStream(seed_, Mix64(stream_id_ ^ Mix64(tag + kGolden)));
}

RngStream RngStream::Split(std::string_view tag, std::uint64_t index) const {
  return Split(Mix64(HashTag(tag) + kGolden * (index + 1)));
}

std::uint64_t RngStream::NextU64() {
  ++counter_;
  return Mix64(key_ + kGolden * counter_);
}

double RngStream::Uniform01() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RngStream::Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

double RngStream::Normal() {
  const double u1 = 1.0 - Uniform01();  // (0, 1]
  const double u2 = Uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::Below(std::uint64_t n) {
  if (n == 0) throw ArgumentError("RngStream::Below: n must be positive");
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % n;
}

Matrix DrawUniform(RngStream& stream, double lo, double hi, std::size_t rows, std::size_t cols) {
  if (!(lo < hi)) throw ArgumentError("DrawUniform: require lo < hi");
  Matrix out(rows, cols);
  for (double& v : out.values()) v = stream.Uniform(lo, hi);
  return out;
}

}  // namespace fedotlab::numkit
