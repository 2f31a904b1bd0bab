// Copyright 2026 The AGSENet Authors
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

#include "agsenet/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "agsenet/errors.h"

namespace agsenet {
namespace fs = std::filesystem;
namespace {

constexpr const char* kManifest = "manifest.txt";
constexpr const char* kDtypeTag = "dtype=f32";

void WriteBlob(const fs::path& path, std::span<const float> values) {
  std::vector<char> bytes(values.size() * 4);
  for (size_t i = 0; i < values.size(); ++i) {
    uint32_t bits = std::bit_cast<uint32_t>(values[i]);
    for (int b = 0; b < 4; ++b) bytes[i * 4 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

void ReadBlob(const fs::path& path, std::span<float> values) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing tensor blob " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() != values.size() * 4) {
    throw IoError(path.string() + " holds " + std::to_string(bytes.size()) +
                  " bytes, expected " + std::to_string(values.size() * 4));
  }
  for (size_t i = 0; i < values.size(); ++i) {
    uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[i * 4 + b])) << (8 * b);
    }
    values[i] = std::bit_cast<float>(bits);
  }
}

}  // namespace

std::string SanitizeTensorName(const std::string& name) {
  std::string out = name;
  for (char& ch : out) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '.' || ch == '-';
    if (!ok) ch = '_';
  }
  if (out.empty() || out[0] == '.') out.insert(out.begin(), '_');
  return out;
}

void SaveCheckpoint(const ParamStore& store, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream manifest;
  std::unordered_set<std::string> files;
  for (const Param& p : store.entries()) {
    if (p.name.find_first_of(" \t\n") != std::string::npos) {
      throw IoError("tensor name '" + p.name + "' contains whitespace");
    }
    const std::string file = SanitizeTensorName(p.name) + ".f32";
    if (!files.insert(file).second) {
      throw IoError("tensor names collide after sanitizing: " + file);
    }
    manifest << p.name;
    for (int64_t d : p.value.shape()) manifest << ' ' << d;
    manifest << ' ' << kDtypeTag << '\n';
    WriteBlob(dir / file, p.value.data());
  }
  std::ofstream out(dir / kManifest, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / kManifest).string());
  out << manifest.str();
}

std::vector<ManifestEntry> ReadCheckpointManifest(const fs::path& dir) {
  std::ifstream in(dir / kManifest);
  if (!in) throw IoError("no checkpoint manifest at " + (dir / kManifest).string());
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    ManifestEntry e;
    fields >> e.name;
    std::string tok;
    bool typed = false;
    while (fields >> tok) {
      if (tok == kDtypeTag) {
        typed = true;
        break;
      }
      try {
        size_t used = 0;
        const long long d = std::stoll(tok, &used);
        if (used != tok.size() || d < 0) throw std::invalid_argument(tok);
        e.shape.push_back(d);
      } catch (const std::exception&) {
        throw IoError("manifest line " + std::to_string(line_no) +
                      ": bad dimension '" + tok + "'");
      }
    }
    if (!typed || (fields >> tok)) {
      throw IoError("manifest line " + std::to_string(line_no) +
                    ": expected '<name> <dims...> dtype=f32'");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void LoadCheckpoint(ParamStore& store, const fs::path& dir) {
  const std::vector<ManifestEntry> entries = ReadCheckpointManifest(dir);
  std::unordered_set<std::string> seen;
  for (const ManifestEntry& e : entries) {
    if (!store.Contains(e.name)) {
      throw IoError("checkpoint tensor '" + e.name + "' is not part of this model");
    }
    Tensor t = store.Value(e.name);
    if (t.shape() != e.shape) {
      throw IoError("checkpoint tensor '" + e.name + "' has shape " +
                    ShapeToString(e.shape) + ", model expects " +
                    ShapeToString(t.shape()));
    }
    ReadBlob(dir / (SanitizeTensorName(e.name) + ".f32"), t.data());
    seen.insert(e.name);
  }
  for (const Param& p : store.entries()) {
    if (seen.count(p.name) == 0) {
      throw IoError("checkpoint at " + dir.string() + " lacks tensor '" + p.name + "'");
    }
  }
}

}  // namespace agsenet
