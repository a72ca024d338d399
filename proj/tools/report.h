// Copyright 2026 The offeval Authors.
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

// Report artifacts: SVG line charts of timeline series and the JSON manifest
// that lists every emitted file with its SHA-256.

#ifndef OFFEVAL_TOOLS_REPORT_H_
#define OFFEVAL_TOOLS_REPORT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "offeval/evaluation.h"

namespace offeval::tools {

struct NamedSeries {
  std::string name;
  std::vector<TimelinePoint> points;
};

// Self-contained SVG with one polyline per series and legend entries in
// input order. Throws DataError (naming the series) when a series is empty.
std::string RenderSvg(const std::vector<NamedSeries>& series);

// Reads every timeline CSV, renders, and writes 'out'. Nothing is written
// when any input fails to parse or is empty.
void RenderSeries(const std::vector<std::filesystem::path>& inputs,
                  const std::filesystem::path& out);

std::string Sha256Hex(std::string_view bytes);
std::string Sha256File(const std::filesystem::path& path);

// Writes 'contents' to 'path' (binary, truncating). Throws DataError.
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace offeval::tools

#endif  // OFFEVAL_TOOLS_REPORT_H_
