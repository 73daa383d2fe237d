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

#ifndef SZLAB_REPORT_HPP
#define SZLAB_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "szlab/common.hpp"

namespace szlab {

using json = nlohmann::ordered_json;

// Full invocation provenance, echoed into every report.
struct RunConfig {
  std::string subcommand;
  std::string model;
  std::vector<int> Ns;
  uint64_t seed = 1;
  std::string out_dir = "out";
  std::string cache_dir_used;
  std::map<std::string, std::string> extra;  // flat key=value extras

  json to_json() const;
  static RunConfig from_json(const json& j);
};

// One verdict-carrying numeric field: value, tolerance, pass.
json check_entry(const std::string& name, double value, double tol, bool pass);

struct Report {
  int schema_version = 1;
  RunConfig config;
  json payload;
  bool all_pass = true;
  double wall_seconds = 0.0;  // excluded from determinism comparisons

  json to_json() const;
  static Report from_json(const json& j);
};

void write_text(const std::string& path, const std::string& text);
void write_json_file(const std::string& path, const json& j);
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

// parse "64,128,256"
std::vector<int> parse_int_list(const std::string& s);

// read a plain-text key=value configuration file
std::map<std::string, std::string> read_kv_file(const std::string& path);

}  // namespace szlab

#endif  // SZLAB_REPORT_HPP
