// Copyright 2026 The causalemo Authors.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "causalemo/encoder.hpp"

namespace causalemo {

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  std::uint64_t vocab_checksum = 0;
};

/// Layout: magic "CEK1", u32 little-endian header length, a JSON header
/// (config, tensor manifest with names and shapes, vocab checksum), then
/// every tensor as little-endian float32 in manifest order, row-major.
void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace causalemo
