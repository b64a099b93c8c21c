// src/cli/report.cc

// Copyright 2026  The dsrt-eval Authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "dsrt/report.h"

#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "dsrt/error.h"

namespace dsrt {

using nlohmann::json;

std::string FormatDouble(double v) { return fmt::format("{}", v); }

std::string CsvField(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> CellKeyColumns(const std::string &condition) {
  if (condition == "accent") return {"accent_a", "accent_b", "word"};
  if (condition == "speaker") return {"speaker_a", "speaker_b", "word", "accent"};
  if (condition == "phone") return {"phone_a", "phone_b", "prev", "next"};
  throw ConfigError("unknown ABX condition '" + condition + "'");
}

json AbxReportToJson(const AbxReport &report, const json &config) {
  json cells = json::array();
  for (const CellResult &c : report.cells)
    cells.push_back({{"key", c.key}, {"triplet_count", c.triplet_count}, {"score", c.score}});
  json dropped = json::array();
  for (const CellKey &k : report.dropped) dropped.push_back(k);
  return {{"schema", kAbxSchema},
          {"config", config},
          {"condition", report.condition},
          {"key_columns", CellKeyColumns(report.condition)},
          {"aggregate", report.aggregate},
          {"cell_count", report.cells.size()},
          {"total_triplets", report.total_triplets},
          {"cells", cells},
          {"dropped", dropped},
          {"warnings", report.warnings}};
}

std::string AbxReportToCsv(const AbxReport &report) {
  std::string out;
  for (const std::string &c : CellKeyColumns(report.condition)) out += c + ",";
  out += "triplet_count,score\n";
  for (const CellResult &c : report.cells) {
    for (const std::string &k : c.key) out += CsvField(k) + ",";
    out += std::to_string(c.triplet_count) + "," + FormatDouble(c.score) + "\n";
  }
  return out;
}

std::string CombinationListToCsv(const CombinationList &list) {
  std::string out = "accent_a,accent_b,word,train_score\n";
  for (const Combination &c : list.entries)
    out += CsvField(c.accent_a) + "," + CsvField(c.accent_b) + "," + CsvField(c.word) + "," +
           FormatDouble(c.train_score) + "\n";
  return out;
}

namespace {

std::vector<std::string> SplitCsvLine(const std::string &line, const std::string &where) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw DataError(where + ": unterminated quote");
  return fields;
}

}  // namespace

CombinationList ReadCombinationCsv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || SplitCsvLine(line, path.string()) !=
                                     std::vector<std::string>{"accent_a", "accent_b", "word",
                                                              "train_score"})
    throw DataError(path.string() + ": expected header accent_a,accent_b,word,train_score");
  CombinationList list;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::string where = path.string() + ":" + std::to_string(line_no);
    std::vector<std::string> f = SplitCsvLine(line, where);
    if (f.size() != 4) throw DataError(where + ": expected 4 fields");
    Combination c{f[0], f[1], f[2], 0.0, 0};
    try {
      size_t used = 0;
      c.train_score = std::stod(f[3], &used);
      if (used != f[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      throw DataError(where + ": bad train_score '" + f[3] + "'");
    }
    list.entries.push_back(std::move(c));
  }
  if (list.entries.empty()) throw DataError(path.string() + ": no combinations");
  return list;
}

namespace {

json OptionalNumber(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json MetricReportToJson(const MetricReport &report, const json &config) {
  json summary = json::object(), counts = json::object();
  for (const std::string &col : MetricSummary::Columns()) {
    auto v = report.summary.values.find(col);
    summary[col] = v == report.summary.values.end() ? json(nullptr) : OptionalNumber(v->second);
    auto n = report.summary.counts.find(col);
    counts[col] = n == report.summary.counts.end() ? 0 : n->second;
  }
  json bounds = json::object();
  for (const auto &[name, b] : report.bounds)
    bounds[name] = {{"lower", OptionalNumber(b.lower)},
                    {"upper", OptionalNumber(b.upper)},
                    {"lower_pairs", b.lower_pairs},
                    {"upper_pairs", b.upper_pairs},
                    {"flags", b.flags}};
  json pairs = json::array();
  for (const PairResult &r : report.pairs) {
    json metrics = json::array();
    for (Metric m : r.pair.metrics) metrics.push_back(MetricName(m));
    json p = {{"generated_utt", r.pair.generated_utt},
              {"reference_utt", r.pair.reference_utt},
              {"direction", DirectionName(r.pair.direction)},
              {"utterance_index", r.pair.utterance_index},
              {"metrics", metrics},
              {"accent_sim", OptionalNumber(r.accent_sim)},
              {"speaker_sim", OptionalNumber(r.speaker_sim)},
              {"ppg", OptionalNumber(r.ppg)}};
    if (r.wer_counts) {
      const EditCounts &c = *r.wer_counts;
      p["wer"] = static_cast<double>(c.Errors()) / static_cast<double>(c.reference_length);
      p["wer_edits"] = {{"substitutions", c.substitutions},
                        {"deletions", c.deletions},
                        {"insertions", c.insertions},
                        {"reference_length", c.reference_length}};
    } else {
      p["wer"] = nullptr;
    }
    pairs.push_back(std::move(p));
  }
  return {{"schema", kMetricsSchema},
          {"config", config},
          {"columns", MetricSummary::Columns()},
          {"summary", summary},
          {"summary_counts", counts},
          {"bounds", bounds},
          {"js_base", report.js_base},
          {"wer_pooling", WerPoolingName(report.wer_pooling)},
          {"metrics_missing", report.metrics_missing},
          {"warnings", report.warnings},
          {"pairs", pairs}};
}

std::string MetricSummaryToCsv(const MetricReport &report) {
  static const std::map<std::string, std::string> kBoundOf = {
      {"A-SIM (src)", "A-SIM"}, {"A-SIM (tgt)", "A-SIM"}, {"S-SIM (src)", "S-SIM"},
      {"S-SIM (tgt)", "S-SIM"}, {"PPG", "PPG"},           {"WER", "WER"}};
  auto cell = [](const std::optional<double> &v) { return v ? FormatDouble(*v) : std::string(); };
  std::string out = "row";
  for (const std::string &col : MetricSummary::Columns()) out += "," + CsvField(col);
  out += "\nvalue";
  for (const std::string &col : MetricSummary::Columns()) {
    auto v = report.summary.values.find(col);
    out += "," + (v == report.summary.values.end() ? std::string() : cell(v->second));
  }
  for (const char *side : {"lower", "upper"}) {
    out += std::string("\n") + side;
    for (const std::string &col : MetricSummary::Columns()) {
      auto b = report.bounds.find(kBoundOf.at(col));
      std::optional<double> v;
      if (b != report.bounds.end()) v = side[0] == 'l' ? b->second.lower : b->second.upper;
      out += "," + cell(v);
    }
  }
  return out + "\n";
}

json TrainLogToJson(const TrainLog &log, const Codebook &codebook, const json &config) {
  json epochs = json::array();
  for (size_t e = 1; e < log.errors.size(); ++e)
    epochs.push_back({{"epoch", e},
                      {"error", log.errors[e]},
                      {"reseeded", e - 1 < log.reseeded.size() ? log.reseeded[e - 1] : 0}});
  return {{"schema", kTrainLogSchema},
          {"config", config},
          {"codebook_size", codebook.Size()},
          {"dim", codebook.Dim()},
          {"frames_used", log.frames_used},
          {"early_stopped", log.early_stopped},
          {"initial_error", log.errors.empty() ? json(nullptr) : json(log.errors.front())},
          {"final_error", log.errors.empty() ? json(nullptr) : json(log.errors.back())},
          {"epochs", epochs}};
}

std::string TokensToJsonLine(const std::string &utt_id, const TokenSequence &tokens) {
  json obj = {{"utt_id", utt_id},
              {"frame_rate_hz", tokens.frame_rate_hz},
              {"codebook_size", tokens.codebook_size},
              {"tokens", tokens.tokens}};
  return obj.dump() + "\n";
}

namespace {

std::string ScalarText(const json &v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return FormatDouble(v.get<double>());
  return v.dump();
}

// (metric, value) series of one report.
std::vector<std::pair<std::string, json>> ReportMetrics(const json &report,
                                                        const std::string &schema) {
  std::vector<std::pair<std::string, json>> out;
  if (schema == kAbxSchema) {
    out.push_back({"abx_error", report.at("aggregate")});
  } else if (schema == kMetricsSchema) {
    for (const std::string &col : MetricSummary::Columns())
      out.push_back({col, report.at("summary").at(col)});
    for (const auto &[name, b] : report.at("bounds").items()) {
      out.push_back({name + " lower", b.at("lower")});
      out.push_back({name + " upper", b.at("upper")});
    }
  } else if (schema == kTrainLogSchema) {
    out.push_back({"quantization_error", report.at("final_error")});
  } else {
    throw ConfigError("reports of schema '" + schema + "' carry no plottable metrics");
  }
  return out;
}

}  // namespace

std::string MakePlotData(const std::vector<json> &reports) {
  if (reports.empty()) throw ConfigError("plotdata needs at least one report");
  std::string schema;
  std::map<std::string, size_t> seen;
  std::set<std::string> keys;
  for (size_t i = 0; i < reports.size(); ++i) {
    const json &r = reports[i];
    if (!r.is_object() || !r.contains("schema") || !r["schema"].is_string() ||
        !r.contains("config") || !r["config"].is_object())
      throw ConfigError("report " + std::to_string(i + 1) + " has no schema/config block");
    std::string s = r["schema"].get<std::string>();
    if (i == 0) schema = s;
    if (s != schema)
      throw ConfigError("incompatible report schemas: " + schema + " and " + s);
    for (const auto &[k, v] : r["config"].items()) {
      if (v.is_object() || v.is_array())
        throw ConfigError("config key '" + k + "' is not a scalar");
      keys.insert(k);
    }
    std::string canon = r["config"].dump();
    auto [it, fresh] = seen.emplace(canon, i);
    if (!fresh)
      throw ConfigError("reports " + std::to_string(it->second + 1) + " and " +
                        std::to_string(i + 1) + " have identical configs " + canon);
  }
  std::vector<std::string> axis;
  for (const std::string &k : keys) {
    bool varies = reports.size() == 1;
    for (const json &r : reports) {
      const json &c = r["config"];
      json v = c.contains(k) ? c[k] : json(nullptr);
      json v0 = reports[0]["config"].contains(k) ? reports[0]["config"][k] : json(nullptr);
      if (v != v0) varies = true;
    }
    if (varies) axis.push_back(k);
  }
  std::string out;
  for (const std::string &k : axis) out += CsvField(k) + ",";
  out += "metric,value\n";
  for (const json &r : reports) {
    std::string prefix;
    for (const std::string &k : axis)
      prefix += CsvField(r["config"].contains(k) ? ScalarText(r["config"][k]) : "") + ",";
    for (const auto &[metric, value] : ReportMetrics(r, schema))
      out += prefix + CsvField(metric) + "," + CsvField(ScalarText(value)) + "\n";
  }
  return out;
}

}  // namespace dsrt
