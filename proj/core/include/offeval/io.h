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

// File formats.
//
//   interaction log  CSV "user_id,item_id,timestamp" or JSONL objects with
//                    the same three fields
//   weights          CSV "item_id,weight", 17 significant digits
//   timeline         CSV "time,score,std_error,pairs"
//   optimizer report JSON
//   scenario         JSON mirroring ScenarioConfig
//
// Readers throw DataError naming the file and the 1-based line.

#ifndef OFFEVAL_IO_H_
#define OFFEVAL_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "offeval/debias.h"
#include "offeval/evaluation.h"
#include "offeval/interactions.h"
#include "offeval/probability.h"
#include "offeval/simworld.h"

namespace offeval {

// 'name' is used in error messages only.
InteractionLog ParseLogCsv(std::istream& in, const std::string& name);
InteractionLog ParseLogJsonl(std::istream& in, const std::string& name);
// Chooses JSONL for a .jsonl/.ndjson extension, CSV otherwise.
InteractionLog ReadLog(const std::filesystem::path& path);
void WriteLogCsv(std::ostream& out, const InteractionLog& log);

WeightVector ParseWeights(std::istream& in, const std::string& name);
WeightVector ReadWeights(const std::filesystem::path& path);
void WriteWeights(std::ostream& out, const WeightVector& weights);

std::vector<TimelinePoint> ParseTimeline(std::istream& in,
                                         const std::string& name);
std::vector<TimelinePoint> ReadTimeline(const std::filesystem::path& path);
void WriteTimeline(std::ostream& out, std::span<const TimelinePoint> points);

// {"iterations", "kl_trace", "final_kl", "converged", "reason", "active"}
std::string OptimizerReportJson(const OptimizerReport& report);

ScenarioConfig ParseScenario(std::istream& in, const std::string& name);
ScenarioConfig ReadScenario(const std::filesystem::path& path);
std::string ScenarioJson(const ScenarioConfig& cfg);

// 17 significant digits; reads back to the same double.
std::string FormatDouble(double value);

}  // namespace offeval

#endif  // OFFEVAL_IO_H_
