// Copyright 2026 The qdsim Authors
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

#include "qdsim/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>

#include "qdsim/errors.hpp"

namespace qdsim::nn {
namespace {

void write_values(std::ostream& out, std::span<const double> values) {
  char buf[32];
  std::size_t col = 0;
  for (double v : values) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << (++col % 8 == 0 ? '\n' : ' ');
  }
  if (col % 8 != 0) out << '\n';
}

void read_values(std::istream& in, std::span<double> values, const std::string& name) {
  for (double& v : values) {
    if (!(in >> v)) throw ConfigError("checkpoint: truncated values in section '" + name + "'");
  }
}

}  // namespace

void save_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out << "qdsim-checkpoint " << kCheckpointVersion << '\n';
  for (const auto& [name, net] : ckpt.networks) {
    out << "mlp " << name;
    for (int s : net.sizes()) out << ' ' << s;
    out << '\n';
    write_values(out, net.values());
  }
  for (const auto& [name, vec] : ckpt.vectors) {
    out << "vector " << name << ' ' << vec.size() << '\n';
    write_values(out, vec);
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  save_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "qdsim-checkpoint") {
    throw ConfigError("checkpoint: missing 'qdsim-checkpoint' header");
  }
  if (version != kCheckpointVersion) {
    throw ConfigError("checkpoint: unsupported format version " + std::to_string(version));
  }
  Checkpoint ckpt;
  std::string kind;
  while (in >> kind) {
    std::string name;
    if (kind == "mlp") {
      int in_dim = 0, h1 = 0, h2 = 0, out_dim = 0;
      if (!(in >> name >> in_dim >> h1 >> h2 >> out_dim) || h1 != h2) {
        throw ConfigError("checkpoint: malformed mlp section header");
      }
      MlpParameters p(in_dim, out_dim, h1);
      read_values(in, p.values(), name);
      ckpt.networks.insert_or_assign(name, std::move(p));
    } else if (kind == "vector") {
      std::size_t len = 0;
      if (!(in >> name >> len)) throw ConfigError("checkpoint: malformed vector section header");
      std::vector<double> v(len);
      read_values(in, v, name);
      ckpt.vectors.insert_or_assign(name, std::move(v));
    } else {
      throw ConfigError("checkpoint: unknown section kind '" + kind + "'");
    }
  }
  return ckpt;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  return load_checkpoint(in);
}

}  // namespace qdsim::nn
