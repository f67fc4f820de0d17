// Copyright 2026 The strongtherm Authors
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

#include <string>
#include <vector>

namespace strongtherm::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header row plus one line per row, 17 significant digits, LF endings.
std::string format_csv(const CsvTable& table);

/// Throws IoError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace strongtherm::cli
