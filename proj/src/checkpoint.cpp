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

#include "gssf/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "gssf/error.hpp"

namespace gssf {
namespace {

constexpr char kMagic[4] = {'G', 'S', 'S', 'F'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u32(std::uint32_t v) { little_endian(v, 4); }
  void u64(std::uint64_t v) { little_endian(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void raw(const char* data, std::size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }

 private:
  void little_endian(std::uint64_t v, int bytes) {
    char buf[8];
    for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(buf, bytes);
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(little_endian(4)); }
  std::uint64_t u64() { return little_endian(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    if (n > (1u << 20)) throw ValidationError("checkpoint string too long");
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
  }
  void read(char* data, std::size_t n) {
    in_.read(data, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw ValidationError("checkpoint is truncated");
  }

 private:
  std::uint64_t little_endian(int bytes) {
    unsigned char buf[8];
    read(reinterpret_cast<char*>(buf), static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
  }
  std::istream& in_;
};

std::vector<std::pair<std::string, double>> config_entries(const ArchConfig& c) {
  auto d = [](Index v) { return static_cast<double>(v); };
  return {{"vocab_size", d(c.vocab_size)},
          {"embed_dim", d(c.embed_dim)},
          {"enc_hidden", d(c.enc_hidden)},
          {"enc_layers", d(c.enc_layers)},
          {"pool_layers", d(c.pool_layers)},
          {"dec_hidden", d(c.dec_hidden)},
          {"attn_dim", d(c.attn_dim)},
          {"coverage_channels", d(c.coverage_channels)},
          {"coverage_kernel", d(c.coverage_kernel)},
          {"spacing", c.spacing}};
}

ArchConfig config_from_entries(const std::map<std::string, double>& entries) {
  auto get = [&](const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) throw ValidationError("checkpoint config lacks " + key);
    return it->second;
  };
  auto geti = [&](const std::string& key) {
    const double v = get(key);
    if (v != static_cast<double>(static_cast<Index>(v))) throw ValidationError("checkpoint config " + key);
    return static_cast<Index>(v);
  };
  ArchConfig c;
  c.vocab_size = geti("vocab_size");
  c.embed_dim = geti("embed_dim");
  c.enc_hidden = geti("enc_hidden");
  c.enc_layers = geti("enc_layers");
  c.pool_layers = geti("pool_layers");
  c.dec_hidden = geti("dec_hidden");
  c.attn_dim = geti("attn_dim");
  c.coverage_channels = geti("coverage_channels");
  c.coverage_kernel = geti("coverage_kernel");
  c.spacing = get("spacing");
  c.validate();
  return c;
}

}  // namespace

void save_checkpoint(std::ostream& out, const Checkpoint& checkpoint) {
  validate(checkpoint.params);
  if (checkpoint.vocab.size() != checkpoint.params.config.vocab_size) {
    throw ValidationError("vocabulary size does not match the model");
  }
  Writer w(out);
  w.raw(kMagic, 4);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(checkpoint.vocab.size()));
  for (const auto& t : checkpoint.vocab.tokens()) w.str(t);
  const auto entries = config_entries(checkpoint.params.config);
  w.u32(static_cast<std::uint32_t>(entries.size()));
  for (const auto& [name, value] : entries) {
    w.str(name);
    w.f64(value);
  }
  std::uint32_t count = 0;
  checkpoint.params.for_each_tensor([&](const std::string&, const auto&) { ++count; });
  w.u32(count);
  checkpoint.params.for_each_tensor([&](const std::string& name, const auto& t) {
    using T = std::decay_t<decltype(t)>;
    w.str(name);
    const bool vector = T::ColsAtCompileTime == 1;
    w.u32(vector ? 1 : 2);
    w.u64(static_cast<std::uint64_t>(t.rows()));
    if (!vector) w.u64(static_cast<std::uint64_t>(t.cols()));
    for (Index r = 0; r < t.rows(); ++r) {
      for (Index c = 0; c < t.cols(); ++c) w.f64(t(r, c));
    }
  });
  if (!out) throw RuntimeFailure("failed writing checkpoint");
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write checkpoint: " + path);
  save_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(std::istream& in) {
  Reader r(in);
  char magic[4];
  r.read(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) throw ValidationError("not a GSSF checkpoint");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  }
  std::vector<std::string> tokens(r.u32());
  for (auto& t : tokens) t = r.str();
  Checkpoint cp;
  cp.vocab = Vocabulary(std::move(tokens));

  std::map<std::string, double> entries;
  const std::uint32_t n_entries = r.u32();
  for (std::uint32_t i = 0; i < n_entries; ++i) {
    std::string name = r.str();
    entries[name] = r.f64();
  }
  cp.params = zero_params(config_from_entries(entries));
  if (cp.params.config.vocab_size != cp.vocab.size()) {
    throw ValidationError("vocabulary size does not match the model");
  }

  std::uint32_t expected = 0;
  cp.params.for_each_tensor([&](const std::string&, const auto&) { ++expected; });
  if (r.u32() != expected) throw ValidationError("unexpected tensor count");
  cp.params.for_each_tensor([&](const std::string& name, auto& t) {
    using T = std::decay_t<decltype(t)>;
    if (r.str() != name) throw ValidationError("unexpected tensor, wanted " + name);
    const bool vector = T::ColsAtCompileTime == 1;
    const std::uint32_t rank = r.u32();
    if (rank != (vector ? 1u : 2u)) throw ValidationError("tensor " + name + " has the wrong rank");
    const auto rows = r.u64();
    const auto cols = vector ? 1 : r.u64();
    if (rows != static_cast<std::uint64_t>(t.rows()) || cols != static_cast<std::uint64_t>(t.cols())) {
      throw ValidationError("tensor " + name + " has the wrong shape");
    }
    for (Index i = 0; i < t.rows(); ++i) {
      for (Index j = 0; j < t.cols(); ++j) t(i, j) = r.f64();
    }
  });
  validate(cp.params);
  return cp;
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint: " + path);
  return load_checkpoint(in);
}

}  // namespace gssf
