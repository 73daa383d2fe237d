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

#ifndef SZLAB_CACHE_HPP
#define SZLAB_CACHE_HPP

#include <string>
#include <vector>

namespace szlab {

// On-disk cache for basis/Gram tables.  Directory resolution order:
// set_cache_dir() > SZLAB_CACHE_DIR env var > disabled (empty).
// Entries are versioned JSON with float64 payload written as 17-significant
// digit decimals and an FNV-1a checksum; stores are write-temp-then-rename.
void set_cache_dir(const std::string& dir);
std::string cache_dir();

std::string cache_key(const std::string& model_id, int N,
                      const std::string& grid_spec);

// returns false on miss or checksum mismatch (mismatch also warns to stderr)
bool cache_load(const std::string& key, std::vector<double>& data);
void cache_store(const std::string& key, const std::vector<double>& data);

}  // namespace szlab

#endif  // SZLAB_CACHE_HPP
