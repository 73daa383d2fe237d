// Copyright 2026 The szlab Authors. - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "szlab/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace szlab {

namespace fs = std::filesystem;

namespace {

std::string& dir_storage() {
  static std::string dir = [] {
    const char* env = std::getenv("SZLAB_CACHE_DIR");
    return env ? std::string(env) : std::string();
  }();
  return dir;
}

std::string fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string payload_text(const std::vector<double>& data) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < data.size(); ++i) {
    if (i) os << ',';
    os << data[i];
  }
  return os.str();
}

}  // namespace

void set_cache_dir(const std::string& dir) { dir_storage() = dir; }

std::string cache_dir() { return dir_storage(); }

std::string cache_key(const std::string& model_id, int N,
                      const std::string& grid_spec) {
  return model_id + "_N" + std::to_string(N) + "_" + grid_spec;
}

bool cache_load(const std::string& key, std::vector<double>& data) {
  if (dir_storage().empty()) return false;
  const fs::path path = fs::path(dir_storage()) / (key + ".json");
  std::ifstream in(path);
  if (!in) return false;
  nlohmann::json j;
  try {
    in >> j;
  } catch (...) {
    std::cerr << "szlab cache: unparsable entry " << path << ", recomputing\n";
    return false;
  }
  if (!j.contains("schema") || j["schema"] != 1) return false;
  std::vector<double> d = j.value("data", std::vector<double>{});
  if (fnv1a(payload_text(d)) != j.value("checksum", std::string())) {
    std::cerr << "szlab cache: checksum mismatch for " << key
              << ", recomputing\n";
    return false;
  }
  data = std::move(d);
  return true;
}

void cache_store(const std::string& key, const std::vector<double>& data) {
  if (dir_storage().empty()) return;
  fs::create_directories(dir_storage());
  const fs::path path = fs::path(dir_storage()) / (key + ".json");
  const fs::path tmp = fs::path(dir_storage()) / (key + ".json.tmp");
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["key"] = key;
  j["checksum"] = fnv1a(payload_text(data));
  j["data"] = data;
  {
    std::ofstream out(tmp);
    out.precision(17);
    out << j.dump();
  }
  fs::rename(tmp, path);
}

}  // namespace szlab
