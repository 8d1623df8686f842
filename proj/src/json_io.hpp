// Copyright 2026 The fpclab Authors
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

// JSON helpers shared by the config and report translation units.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "fpclab/error.hpp"
#include "fpclab/report.hpp"
#include "json.hpp"

namespace fpclab::detail {

void check_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                std::string_view context);
nlohmann::json config_to_json_value(const ExperimentConfig& config);
ExperimentConfig config_from_json_value(const nlohmann::json& j);
PopulationSource population_from_json(const nlohmann::json& j);
nlohmann::json pathway_to_json(const Pathway& pathway);
Pathway pathway_from_json(const nlohmann::json& j);

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace fpclab::detail
