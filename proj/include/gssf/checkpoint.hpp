// Copyright 2026 The GSSF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Binary model checkpoints.
//
// Layout, all integers and floats little-endian:
//   "GSSF"                          magic
//   u32 version                     currently 1
//   u32 n, n x (u32 len, bytes)     vocabulary tokens, UTF-8
//   u32 n, n x (name, f64)          architecture config entries
//   u32 n, n x tensor               named tensors:
//       name, u32 rank, rank x u64 dims, prod(dims) x f64 row-major
// where every name is (u32 len, bytes).

#ifndef GSSF_CHECKPOINT_HPP_
#define GSSF_CHECKPOINT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "gssf/seq2seq.hpp"

namespace gssf {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Vocabulary vocab;
  ModelParams params;
};

void save_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);

// Throws ValidationError on a bad magic, unknown version, truncated data or
// tensors that do not match the stored architecture.
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace gssf

#endif  // GSSF_CHECKPOINT_HPP_
