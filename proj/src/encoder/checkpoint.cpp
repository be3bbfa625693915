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

#include "causalemo/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "causalemo/errors.hpp"

namespace causalemo {
namespace {

constexpr std::array<char, 4> kMagic = {'C', 'E', 'K', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                     static_cast<char>((v >> 16) & 0xFF),
                                     static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes.data(), bytes.size());
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw ParseError("checkpoint truncated", static_cast<std::size_t>(in.gcount()));
  }
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

nlohmann::json config_to_json(const ModelConfig& c) {
  return {{"d_model", c.d_model},       {"n_heads", c.n_heads},
          {"n_layers", c.n_layers},     {"d_ff", c.d_ff},
          {"max_len", c.max_len},       {"vocab_size", c.vocab_size},
          {"n_labels", c.n_labels},     {"dropout_head", c.dropout_head},
          {"init_std", c.init_std},     {"layer_norm_eps", c.layer_norm_eps}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.d_model = j.at("d_model").get<std::size_t>();
  c.n_heads = j.at("n_heads").get<std::size_t>();
  c.n_layers = j.at("n_layers").get<std::size_t>();
  c.d_ff = j.at("d_ff").get<std::size_t>();
  c.max_len = j.at("max_len").get<std::size_t>();
  c.vocab_size = j.at("vocab_size").get<std::size_t>();
  c.n_labels = j.at("n_labels").get<std::size_t>();
  c.dropout_head = j.at("dropout_head").get<double>();
  c.init_std = j.at("init_std").get<double>();
  c.layer_norm_eps = j.at("layer_norm_eps").get<double>();
  return c;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint) {
  nlohmann::json manifest = nlohmann::json::array();
  checkpoint.params.for_each([&](const std::string& name, const Matrix& tensor) {
    manifest.push_back({{"name", name}, {"shape", {tensor.rows(), tensor.cols()}}});
  });
  const nlohmann::json header = {
      {"format", "CEK1"},
      {"dtype", "float32"},
      {"byte_order", "little"},
      {"layout", "row-major"},
      {"config", config_to_json(checkpoint.config)},
      {"vocab_checksum", hex64(checkpoint.vocab_checksum)},
      {"tensors", std::move(manifest)},
  };
  const std::string text = header.dump();

  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  checkpoint.params.for_each([&](const std::string&, const Matrix& tensor) {
    for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
      for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(tensor(r, c))));
      }
    }
  });
  if (!out) throw Error("failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ParseError("not a CEK1 checkpoint", 0);
  }
  const std::uint32_t header_len = get_u32(in);
  std::string text(header_len, '\0');
  if (!in.read(text.data(), header_len)) throw ParseError("checkpoint header truncated", 8);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what(), 8 + e.byte);
  }

  Checkpoint checkpoint;
  try {
    checkpoint.config = config_from_json(header.at("config"));
    checkpoint.vocab_checksum =
        std::stoull(header.at("vocab_checksum").get<std::string>(), nullptr, 16);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("checkpoint header: ") + e.what());
  }
  checkpoint.config.validate();
  checkpoint.params = ModelParams::zeros(checkpoint.config);

  const auto& manifest = header.at("tensors");
  std::size_t index = 0;
  checkpoint.params.for_each([&](const std::string& name, Matrix& tensor) {
    if (index >= manifest.size()) throw ValidationError("checkpoint manifest is missing " + name);
    const auto& entry = manifest[index++];
    if (entry.at("name").get<std::string>() != name ||
        entry.at("shape")[0].get<Eigen::Index>() != tensor.rows() ||
        entry.at("shape")[1].get<Eigen::Index>() != tensor.cols()) {
      throw ValidationError("checkpoint manifest entry " + std::to_string(index - 1) +
                            " does not match expected tensor " + name);
    }
    for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
      for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
        tensor(r, c) = std::bit_cast<float>(get_u32(in));
      }
    }
  });
  if (index != manifest.size()) throw ValidationError("checkpoint has unexpected extra tensors");
  return checkpoint;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace causalemo
