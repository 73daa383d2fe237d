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

#include "szlab/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace szlab {

json RunConfig::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  j["model"] = model;
  j["N"] = Ns;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["cache_dir"] = cache_dir_used;
  j["extra"] = extra;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.subcommand = j.value("subcommand", "");
  c.model = j.value("model", "");
  c.Ns = j.value("N", std::vector<int>{});
  c.seed = j.value("seed", uint64_t(1));
  c.out_dir = j.value("out_dir", "out");
  c.cache_dir_used = j.value("cache_dir", "");
  c.extra = j.value("extra", std::map<std::string, std::string>{});
  return c;
}

json check_entry(const std::string& name, double value, double tol, bool pass) {
  json j;
  j["name"] = name;
  j["value"] = value;
  j["tolerance"] = tol;
  j["pass"] = pass;
  return j;
}

json Report::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["config"] = config.to_json();
  j["payload"] = payload;
  j["all_pass"] = all_pass;
  j["timings"] = json{{"wall_seconds", wall_seconds}};
  return j;
}

Report Report::from_json(const json& j) {
  Report r;
  r.schema_version = j.value("schema_version", 1);
  r.config = RunConfig::from_json(j.at("config"));
  r.payload = j.value("payload", json::object());
  r.all_pass = j.value("all_pass", false);
  if (j.contains("timings"))
    r.wall_seconds = j["timings"].value("wall_seconds", 0.0);
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw szlab_error("cannot write " + path);
  out << text;
}

void write_json_file(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << header << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << "\n";
  }
  write_text(path, os.str());
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

std::map<std::string, std::string> read_kv_file(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) throw szlab_error("cannot read config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace szlab
