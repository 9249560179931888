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

#include "fedotlab/exp/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "fedotlab/errors.h"

namespace fedotlab::exp {
namespace {

constexpr const char* kMagic = "FEDOTCKPT 1";

void AppendSet(const std::string& prefix, const model::ParamSet& set,
               std::vector<NamedTensor>* out) {
  for (std::size_t t = 0; t < set.names.size(); ++t) {
    out->push_back({prefix + set.names[t], set.tensors[t]});
  }
}

void PutDouble(std::ostream& out, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  out.write(bytes, 8);
}

bool GetDouble(std::istream& in, double* x) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) return false;
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  std::memcpy(x, &bits, sizeof bits);
  return true;
}

void FillSet(const std::map<std::string, const numkit::Matrix*>& index, const std::string& prefix,
             model::ParamSet& set) {
  for (std::size_t t = 0; t < set.names.size(); ++t) {
    const std::string name = prefix + set.names[t];
    const auto it = index.find(name);
    if (it == index.end()) throw ValidationError("checkpoint: missing tensor '" + name + "'");
    const numkit::Matrix& v = *it->second;
    if (v.rows() != set.tensors[t].rows() || v.cols() != set.tensors[t].cols()) {
      throw ValidationError("checkpoint: tensor '" + name + "' has the wrong shape");
    }
    set.tensors[t] = v;
  }
}

}  // namespace

std::vector<NamedTensor> FlattenBundle(const model::ParamBundle& bundle) {
  std::vector<NamedTensor> out;
  AppendSet("w.", bundle.w.params, &out);
  for (std::size_t i = 0; i < bundle.theta.size(); ++i) {
    AppendSet("theta." + std::to_string(i) + ".", bundle.theta[i].params, &out);
  }
  AppendSet("potential.shared.", bundle.potential.shared, &out);
  for (std::size_t i = 0; i < bundle.potential.heads.size(); ++i) {
    AppendSet("potential.head." + std::to_string(i) + ".", bundle.potential.heads[i], &out);
  }
  return out;
}

void WriteCheckpoint(std::ostream& out, const std::vector<NamedTensor>& tensors) {
  out << kMagic << '\n' << tensors.size() << '\n';
  std::size_t offset = 0;
  for (const auto& t : tensors) {
    if (t.name.empty() || t.name.find_first_of(" \t\n") != std::string::npos) {
      throw ArgumentError("checkpoint: tensor names must be nonempty without whitespace");
    }
    out << t.name << ' ' << t.value.rows() << ' ' << t.value.cols() << ' ' << offset << '\n';
    offset += t.value.rows() * t.value.cols();
  }
  out << "END\n";
  for (const auto& t : tensors) {
    for (std::size_t r = 0; r < t.value.rows(); ++r) {
      for (std::size_t c = 0; c < t.value.cols(); ++c) PutDouble(out, t.value(r, c));
    }
  }
}

std::vector<NamedTensor> ReadCheckpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw ValidationError("checkpoint: missing 'FEDOTCKPT 1' header");
  }
  std::size_t count = 0;
  if (!std::getline(in, line) || !(std::istringstream(line) >> count)) {
    throw ValidationError("checkpoint: bad tensor count");
  }
  std::vector<NamedTensor> out;
  std::size_t expected_offset = 0;
  for (std::size_t k = 0; k < count; ++k) {
    std::string name;
    std::size_t rows = 0, cols = 0, offset = 0;
    if (!std::getline(in, line) || !(std::istringstream(line) >> name >> rows >> cols >> offset)) {
      throw ValidationError("checkpoint: bad index line " + std::to_string(k + 3));
    }
    if (offset != expected_offset) {
      throw ValidationError("checkpoint: tensor '" + name + "' has an inconsistent offset");
    }
    expected_offset += rows * cols;
    out.push_back({name, numkit::Matrix(rows, cols)});
  }
  if (!std::getline(in, line) || line != "END") {
    throw ValidationError("checkpoint: missing END line");
  }
  for (auto& t : out) {
    for (std::size_t r = 0; r < t.value.rows(); ++r) {
      for (std::size_t c = 0; c < t.value.cols(); ++c) {
        if (!GetDouble(in, &t.value(r, c))) {
          throw ValidationError("checkpoint: payload truncated in '" + t.name + "'");
        }
      }
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ValidationError("checkpoint: trailing bytes after payload");
  }
  return out;
}

void SaveCheckpoint(const std::string& path, const model::ParamBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write checkpoint '" + path + "'");
  WriteCheckpoint(out, FlattenBundle(bundle));
  if (!out) throw ValidationError("write failed for checkpoint '" + path + "'");
}

std::vector<NamedTensor> LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint '" + path + "'");
  return ReadCheckpoint(in);
}

model::ParamBundle RestoreBundle(const std::vector<NamedTensor>& tensors,
                                 const model::ParamBundle& like) {
  std::map<std::string, const numkit::Matrix*> index;
  for (const auto& t : tensors) {
    if (!index.emplace(t.name, &t.value).second) {
      throw ValidationError("checkpoint: duplicate tensor '" + t.name + "'");
    }
  }
  model::ParamBundle b = like;
  FillSet(index, "w.", b.w.params);
  for (std::size_t i = 0; i < b.theta.size(); ++i) {
    FillSet(index, "theta." + std::to_string(i) + ".", b.theta[i].params);
  }
  FillSet(index, "potential.shared.", b.potential.shared);
  for (std::size_t i = 0; i < b.potential.heads.size(); ++i) {
    FillSet(index, "potential.head." + std::to_string(i) + ".", b.potential.heads[i]);
  }
  if (index.size() != FlattenBundle(b).size()) {
    throw ValidationError("checkpoint: unexpected extra tensors");
  }
  return b;
}

}  // namespace fedotlab::exp
