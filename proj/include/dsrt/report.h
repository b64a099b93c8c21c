// include/dsrt/report.h

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

#ifndef DSRT_REPORT_H_
#define DSRT_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsrt/abx.h"
#include "dsrt/quantizer.h"
#include "dsrt/recoverability.h"

namespace dsrt {

inline constexpr const char *kAbxSchema = "dsrt.abx/1";
inline constexpr const char *kMetricsSchema = "dsrt.metrics/1";
inline constexpr const char *kTrainLogSchema = "dsrt.train-log/1";
inline constexpr const char *kManifestCheckSchema = "dsrt.manifest-check/1";

// Shortest decimal that reads back to the same double.
std::string FormatDouble(double v);
// Quotes a CSV field when it holds a comma, quote or newline.
std::string CsvField(const std::string &s);

// Column names of a cell key, e.g. accent_a, accent_b, word.
std::vector<std::string> CellKeyColumns(const std::string &condition);

// `config` identifies the run (label, representation, ...) and is what
// MakePlotData uses as the series axis.
nlohmann::json AbxReportToJson(const AbxReport &report, const nlohmann::json &config);
std::string AbxReportToCsv(const AbxReport &report);

// Header accent_a,accent_b,word,train_score.
std::string CombinationListToCsv(const CombinationList &list);
CombinationList ReadCombinationCsv(const std::filesystem::path &path);

nlohmann::json MetricReportToJson(const MetricReport &report, const nlohmann::json &config);
// Rows value/lower/upper under the six summary columns.
std::string MetricSummaryToCsv(const MetricReport &report);

nlohmann::json TrainLogToJson(const TrainLog &log, const Codebook &codebook,
                              const nlohmann::json &config);

// {"utt_id", "frame_rate_hz", "codebook_size", "tokens"} per line.
std::string TokensToJsonLine(const std::string &utt_id, const TokenSequence &tokens);

// Long-format CSV with one column per config key that varies across the
// reports (all config keys for a single report), then metric,value.
// Reports must share one schema and have pairwise different configs;
// ConfigError otherwise.
std::string MakePlotData(const std::vector<nlohmann::json> &reports);

}  // namespace dsrt

#endif  // DSRT_REPORT_H_
