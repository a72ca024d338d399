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
#include "offeval/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "offeval/errors.h"

namespace offeval {
namespace {

using nlohmann::json;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Line reader that tracks line numbers and skips blank lines. Strips a UTF-8
// byte order mark from the first line.
class LineReader {
 public:
  LineReader(std::istream& in, std::string name)
      : in_(in), name_(std::move(name)) {}

  bool Next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (number_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (!Trim(line).empty()) return true;
    }
    return false;
  }
  [[noreturn]] void Fail(const std::string& msg) const {
    throw DataError(name_, number_, msg);
  }
  void ExpectHeader(std::string_view header) {
    std::string line;
    if (!Next(line)) throw DataError(name_, 0, "empty file");
    if (Trim(line) != header) {
      Fail("expected header '" + std::string(header) + "'");
    }
  }
  const std::string& name() const { return name_; }

 private:
  std::istream& in_;
  std::string name_;
  std::size_t number_ = 0;
};

template <typename T>
bool ParseNumber(std::string_view text, T& value) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end && !text.empty();
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string(), 0, "cannot open file");
  return in;
}

InteractionEvent MakeEvent(const LineReader& reader, std::string user,
                           std::string item, long long timestamp) {
  if (user.empty() || item.empty()) reader.Fail("empty user_id or item_id");
  if (timestamp < 0) reader.Fail("negative timestamp");
  return {std::move(user), std::move(item), timestamp};
}

template <typename T>
T Field(const json& obj, const char* key, const T& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return it->get<T>();
}

void RejectUnknownKeys(const json& obj,
                       std::initializer_list<std::string_view> known,
                       const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown key '" + key + "' in " + where);
    }
  }
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

InteractionLog ParseLogCsv(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  reader.ExpectHeader("user_id,item_id,timestamp");
  InteractionLog log;
  std::string line;
  while (reader.Next(line)) {
    auto fields = SplitCsv(line);
    if (fields.size() != 3) reader.Fail("expected 3 fields");
    long long timestamp = 0;
    if (!ParseNumber(fields[2], timestamp)) {
      reader.Fail("timestamp '" + std::string(fields[2]) +
                  "' is not an integer");
    }
    log.Append(MakeEvent(reader, std::string(fields[0]), std::string(fields[1]),
                         timestamp));
  }
  return log;
}

InteractionLog ParseLogJsonl(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  InteractionLog log;
  std::string line;
  while (reader.Next(line)) {
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      reader.Fail(std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("user_id") ||
        !obj.contains("item_id") || !obj.contains("timestamp")) {
      reader.Fail("expected an object with user_id, item_id, timestamp");
    }
    auto id = [&](const char* key) -> std::string {
      const json& v = obj[key];
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return v.dump();
      reader.Fail(std::string(key) + " must be a string or integer");
    };
    if (!obj["timestamp"].is_number_integer()) {
      reader.Fail("timestamp must be an integer");
    }
    log.Append(MakeEvent(reader, id("user_id"), id("item_id"),
                         obj["timestamp"].get<long long>()));
  }
  return log;
}

InteractionLog ReadLog(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".ndjson") return ParseLogJsonl(in, path.string());
  return ParseLogCsv(in, path.string());
}

void WriteLogCsv(std::ostream& out, const InteractionLog& log) {
  out << "user_id,item_id,timestamp\n";
  for (const auto& e : log.events()) {
    out << e.user << ',' << e.item << ',' << e.timestamp << '\n';
  }
}

WeightVector ParseWeights(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  reader.ExpectHeader("item_id,weight");
  WeightVector weights;
  std::string line;
  while (reader.Next(line)) {
    auto fields = SplitCsv(line);
    if (fields.size() != 2) reader.Fail("expected 2 fields");
    if (fields[0].empty()) reader.Fail("empty item_id");
    double w = 0.0;
    if (!ParseNumber(fields[1], w)) {
      reader.Fail("weight '" + std::string(fields[1]) + "' is not a number");
    }
    if (!(w > 0.0) || !std::isfinite(w)) reader.Fail("weight must be positive");
    weights.Set(std::string(fields[0]), w);
  }
  return weights;
}

WeightVector ReadWeights(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseWeights(in, path.string());
}

void WriteWeights(std::ostream& out, const WeightVector& weights) {
  out << "item_id,weight\n";
  for (const auto& [item, w] : weights.entries()) {
    out << item << ',' << FormatDouble(w) << '\n';
  }
}

std::vector<TimelinePoint> ParseTimeline(std::istream& in,
                                         const std::string& name) {
  LineReader reader(in, name);
  reader.ExpectHeader("time,score,std_error,pairs");
  std::vector<TimelinePoint> points;
  std::string line;
  while (reader.Next(line)) {
    auto fields = SplitCsv(line);
    if (fields.size() != 4) reader.Fail("expected 4 fields");
    TimelinePoint p{};
    unsigned long long pairs = 0;
    if (!ParseNumber(fields[0], p.time) ||
        !ParseNumber(fields[1], p.result.score) ||
        !ParseNumber(fields[2], p.result.std_error) ||
        !ParseNumber(fields[3], pairs)) {
      reader.Fail("malformed timeline row");
    }
    if (!std::isfinite(p.result.score) || !std::isfinite(p.result.std_error)) {
      reader.Fail("non-finite value");
    }
    p.result.pairs_evaluated = pairs;
    points.push_back(p);
  }
  return points;
}

std::vector<TimelinePoint> ReadTimeline(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseTimeline(in, path.string());
}

void WriteTimeline(std::ostream& out, std::span<const TimelinePoint> points) {
  out << "time,score,std_error,pairs\n";
  for (const auto& p : points) {
    out << p.time << ',' << FormatDouble(p.result.score) << ','
        << FormatDouble(p.result.std_error) << ',' << p.result.pairs_evaluated
        << '\n';
  }
}

std::string OptimizerReportJson(const OptimizerReport& report) {
  json j;
  j["iterations"] = report.iterations;
  j["kl_trace"] = report.kl_trace;
  j["final_kl"] = report.final_kl;
  j["converged"] = report.converged;
  j["reason"] = ToString(report.reason);
  j["active"] = report.active.items;
  return j.dump(2) + "\n";
}

ScenarioConfig ParseScenario(std::istream& in, const std::string& name) {
  ScenarioConfig cfg;
  try {
    const json j = json::parse(in);
    RejectUnknownKeys(j, {"population", "background_rate", "campaigns", "horizon"},
                      "scenario");
    const json pop = j.value("population", json::object());
    RejectUnknownKeys(pop, {"n_users", "n_items", "alpha", "target_mean", "beta",
                            "seed"},
                      "population");
    PopulationConfig& p = cfg.population;
    p.n_users = Field(pop, "n_users", p.n_users);
    p.n_items = Field(pop, "n_items", p.n_items);
    p.alpha = Field(pop, "alpha", p.alpha);
    p.target_mean = Field(pop, "target_mean", p.target_mean);
    p.beta = Field(pop, "beta", p.beta);
    p.seed = Field(pop, "seed", p.seed);
    cfg.background_rate = Field(j, "background_rate", cfg.background_rate);
    cfg.horizon = Field(j, "horizon", cfg.horizon);
    for (const json& c : j.value("campaigns", json::array())) {
      RejectUnknownKeys(c, {"time", "items", "reach", "accept_prob", "seed"},
                        "campaign");
      CampaignConfig campaign;
      campaign.time = Field(c, "time", campaign.time);
      campaign.items = Field(c, "items", campaign.items);
      campaign.reach = Field(c, "reach", campaign.reach);
      campaign.accept_prob = Field(c, "accept_prob", campaign.accept_prob);
      campaign.seed = Field(c, "seed", campaign.seed);
      cfg.campaigns.push_back(std::move(campaign));
    }
  } catch (const json::exception& e) {
    throw DataError(name, 0, e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(name, 0, e.what());
  }
  return cfg;
}

ScenarioConfig ReadScenario(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseScenario(in, path.string());
}

std::string ScenarioJson(const ScenarioConfig& cfg) {
  const PopulationConfig& p = cfg.population;
  json j;
  j["population"] = {{"n_users", p.n_users},     {"n_items", p.n_items},
                     {"alpha", p.alpha},         {"target_mean", p.target_mean},
                     {"beta", p.beta},           {"seed", p.seed}};
  j["background_rate"] = cfg.background_rate;
  j["horizon"] = cfg.horizon;
  j["campaigns"] = json::array();
  for (const auto& c : cfg.campaigns) {
    j["campaigns"].push_back({{"time", c.time},
                              {"items", c.items},
                              {"reach", c.reach},
                              {"accept_prob", c.accept_prob},
                              {"seed", c.seed}});
  }
  return j.dump(2) + "\n";
}

}  // namespace offeval
