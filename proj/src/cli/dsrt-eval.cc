// src/cli/dsrt-eval.cc

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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dsrt/abx.h"
#include "dsrt/cli.h"
#include "dsrt/config.h"
#include "dsrt/corpus.h"
#include "dsrt/error.h"
#include "dsrt/io-util.h"
#include "dsrt/parallel.h"
#include "dsrt/quantizer.h"
#include "dsrt/recoverability.h"
#include "dsrt/report.h"

namespace dsrt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Flags that override config-file fields when given.
class Overrides {
 public:
  template <typename Get>
  void Add(CLI::App *app, const std::string &flag, Get get, const std::string &help) {
    using T = std::remove_reference_t<decltype(get(std::declval<RunConfig &>()))>;
    auto value = std::make_shared<T>();
    CLI::Option *opt = app->add_option(flag, *value, help);
    apply_.push_back([opt, value, get](RunConfig &c) {
      if (opt->count()) get(c) = *value;
    });
  }
  void Apply(RunConfig *c) const {
    for (const auto &f : apply_) f(*c);
  }

 private:
  std::vector<std::function<void(RunConfig &)>> apply_;
};

fs::path OutputDir(const RunConfig &c) { return c.paths.output_dir; }

void WriteJson(const fs::path &path, const json &j) { WriteTextFile(path, j.dump(2) + "\n"); }

Manifest RequireManifest(const RunConfig &c) {
  if (c.paths.manifest.empty()) throw ConfigError("no manifest given (--manifest or paths.manifest)");
  Manifest m = LoadManifest(c.paths.manifest, c.paths.feature_root);
  for (const std::string &w : m.Warnings()) Warn(w);
  return m;
}

fs::path CodebookPath(const RunConfig &c) {
  return c.paths.codebook.empty() ? OutputDir(c) / "codebook.vqcb" : fs::path(c.paths.codebook);
}

json ReportConfig(const RunConfig &c) {
  bool tokens = c.abx.representation == "tokens";
  return {{"label", c.label},
          {"condition", c.abx.condition},
          {"representation", c.abx.representation},
          {"token_embedding", tokens ? json(c.abx.token_embedding) : json(nullptr)},
          {"codebook_size", tokens ? json(c.quantizer.codebook_size) : json(nullptr)},
          {"seed", c.seed}};
}

// ---- validate-manifest ----------------------------------------------------

int CmdValidateManifest(const RunConfig &c, bool check_files, bool vctk) {
  Manifest m = RequireManifest(c);
  std::vector<std::string> problems;
  size_t segments = 0;
  if (check_files) {
    std::vector<std::vector<std::string>> found(m.Size());
    std::vector<size_t> seg_counts(m.Size(), 0);
    ParallelFor(m.Size(), c.workers, [&](size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i) {
        const UtteranceRecord &rec = m.Records()[i];
        try {
          FeatureSequence seq = ReadFeatureFile(m.ResolvePath(rec.feature_path));
          for (auto [tier, path] : {std::pair{Tier::kWord, rec.word_alignment_path},
                                    std::pair{Tier::kPhone, rec.phone_alignment_path}}) {
            if (!path) continue;
            for (const Segment &s : ReadAlignmentFile(m.ResolvePath(*path), rec.utt_id, tier)) {
              SegmentFrameRange(seq, s);
              ++seg_counts[i];
            }
          }
        } catch (const DataError &e) {
          found[i].push_back(rec.utt_id + ": " + e.what());
        }
      }
    });
    for (size_t i = 0; i < m.Size(); ++i) {
      problems.insert(problems.end(), found[i].begin(), found[i].end());
      segments += seg_counts[i];
    }
  }
  std::vector<std::string> warnings = m.Warnings();
  if (vctk)
    for (const std::string &w : CheckAgainstVctkPartition(m)) {
      Warn(w);
      warnings.push_back(w);
    }
  size_t train = 0;
  for (const UtteranceRecord &r : m.Records()) train += r.split == Split::kTrain;
  json out = {{"schema", kManifestCheckSchema},
              {"manifest", c.paths.manifest},
              {"utterances", m.Size()},
              {"train_utterances", train},
              {"test_utterances", m.Size() - train},
              {"speakers", m.Speakers().size()},
              {"regions", m.Regions()},
              {"files_checked", check_files},
              {"segments", segments},
              {"warnings", warnings},
              {"errors", problems}};
  WriteJson(OutputDir(c) / "manifest-check.json", out);
  for (const std::string &p : problems) std::cerr << "ERROR: " << p << "\n";
  if (!problems.empty())
    throw DataError(std::to_string(problems.size()) + " utterances failed validation");
  std::cout << fmt::format("OK: {} utterances, {} speakers, {} regions, {} warnings\n", m.Size(),
                           m.Speakers().size(), m.Regions().size(), warnings.size());
  return 0;
}

// ---- train-codebook -------------------------------------------------------

int CmdTrainCodebook(const RunConfig &c) {
  Manifest m = RequireManifest(c);
  std::vector<const UtteranceRecord *> train;
  for (const UtteranceRecord &r : m.Records())
    if (r.split == Split::kTrain) train.push_back(&r);
  if (train.empty()) throw DataError("manifest has no train utterances");
  std::vector<FeatureSequence> data(train.size());
  ParallelFor(train.size(), c.workers, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      data[i] = ReadFeatureFile(m.ResolvePath(train[i]->feature_path));
  });
  TrainConfig tc;
  tc.seed = c.seed;
  tc.decay = c.quantizer.decay;
  tc.epsilon = c.quantizer.epsilon;
  tc.max_frames = c.quantizer.max_frames;
  tc.epochs = c.quantizer.epochs;
  tc.early_stop_tol = c.quantizer.early_stop_tol;
  tc.workers = c.workers;
  TrainLog log;
  Codebook cb = TrainCodebook(data, c.quantizer.codebook_size, tc, &log);
  fs::path path = CodebookPath(c);
  SaveCodebook(cb, path);
  json config = {{"label", c.label}, {"codebook_size", c.quantizer.codebook_size}, {"seed", c.seed}};
  WriteJson(OutputDir(c) / "train-log.json", TrainLogToJson(log, cb, config));
  std::cout << fmt::format("codebook K={} D={} written to {}; error {} -> {} over {} epochs\n",
                           cb.Size(), cb.Dim(), path.string(), FormatDouble(log.errors.front()),
                           FormatDouble(log.errors.back()), log.errors.size() - 1);
  return 0;
}

// ---- quantize -------------------------------------------------------------

int CmdQuantize(const RunConfig &c, const std::string &split) {
  Manifest m = RequireManifest(c);
  Codebook cb = LoadCodebook(CodebookPath(c));
  std::vector<const UtteranceRecord *> recs;
  for (const UtteranceRecord &r : m.Records())
    if (split == "all" || SplitName(r.split) == split) recs.push_back(&r);
  std::vector<std::string> lines(recs.size());
  ParallelFor(recs.size(), c.workers, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      FeatureSequence seq = ReadFeatureFile(m.ResolvePath(recs[i]->feature_path));
      lines[i] = TokensToJsonLine(recs[i]->utt_id, Quantize(seq, cb, 1));
    }
  });
  std::string text;
  for (const std::string &l : lines) text += l;
  fs::path out = OutputDir(c) / "tokens.jsonl";
  WriteTextFile(out, text);
  std::cout << fmt::format("{} utterances quantized with K={} to {}\n", recs.size(), cb.Size(),
                           out.string());
  return 0;
}

// ---- abx ------------------------------------------------------------------

int CmdAbx(const RunConfig &c) {
  Manifest m = RequireManifest(c);
  AbxCondition cond = AbxCondition::FromName(c.abx.condition);
  Representation repr = ContinuousRepresentation(m);
  json config = ReportConfig(c);
  if (c.abx.representation == "tokens") {
    auto cb = std::make_shared<const Codebook>(LoadCodebook(CodebookPath(c)));
    config["codebook_size"] = cb->Size();
    repr = TokenRepresentation(repr, cb,
                               c.abx.token_embedding == "one_hot" ? TokenEmbedding::kOneHot
                                                                  : TokenEmbedding::kCentroid);
  }
  AbxRunOptions opt;
  opt.caps.max_per_cell = c.abx.max_per_cell;
  opt.caps.min_utterance_index = c.abx.min_utterance_index;
  opt.seed = c.seed;
  opt.workers = c.workers;

  AbxReport report;
  if (cond.On() == AbxCategory::kAccent) {
    CombinationList combos;
    if (!c.abx.combinations.empty()) {
      combos = ReadCombinationCsv(c.abx.combinations);
    } else {
      Representation selector = c.abx.selector_features.empty()
                                    ? ContinuousRepresentation(m)
                                    : DirectoryRepresentation(c.abx.selector_features, "selector");
      combos = SelectAccentWordCombinations(m, selector, c.abx.top_n_words, c.abx.p_percent, opt);
      WriteTextFile(OutputDir(c) / "combinations.csv", CombinationListToCsv(combos));
      std::cout << fmt::format("selected {} of {} (accent, accent, word) combinations\n",
                               combos.entries.size(), combos.candidate_count);
    }
    config["p_percent"] = c.abx.p_percent;
    report = AccentAbxScore(m, combos, repr, opt);
  } else {
    report = RunAbx(cond, m.FilterSplit(Split::kTest), repr, opt);
  }
  fs::path base = OutputDir(c) / ("abx-" + cond.Name());
  WriteJson(base.string() + ".json", AbxReportToJson(report, config));
  WriteTextFile(base.string() + ".csv", AbxReportToCsv(report));
  std::cout << fmt::format("{} ABX error rate {} over {} cells, {} triplets\n", cond.Name(),
                           FormatDouble(report.aggregate), report.cells.size(),
                           report.total_triplets);
  return 0;
}

// ---- metrics --------------------------------------------------------------

int CmdMetrics(const RunConfig &c) {
  Manifest m = RequireManifest(c);
  if (c.metrics.generated.empty())
    throw ConfigError("no generated-speech manifest given (--generated or metrics.generated)");
  std::vector<GeneratedRecord> generated = LoadGeneratedManifest(c.metrics.generated);
  std::optional<std::vector<GeneratedRecord>> copies;
  if (!c.metrics.copy_synthesis.empty()) copies = LoadGeneratedManifest(c.metrics.copy_synthesis);

  std::optional<EmbeddingTable> accent, speaker;
  std::optional<PpgStore> ppg;
  std::optional<std::map<std::string, std::string>> hyps;
  MetricInputs in;
  if (!c.metrics.accent_embeddings.empty()) {
    accent = EmbeddingTable::Load(c.metrics.accent_embeddings);
    in.accent = &*accent;
  }
  if (!c.metrics.speaker_embeddings.empty()) {
    speaker = EmbeddingTable::Load(c.metrics.speaker_embeddings);
    in.speaker = &*speaker;
  }
  if (!c.metrics.ppg_dir.empty()) {
    if (!fs::is_directory(c.metrics.ppg_dir))
      throw DataError("PPG directory " + c.metrics.ppg_dir + " does not exist");
    ppg.emplace(c.metrics.ppg_dir);
    in.ppg = &*ppg;
  }
  if (!c.metrics.hypotheses.empty()) {
    hyps = LoadTranscripts(c.metrics.hypotheses);
    in.hypotheses = &*hyps;
  }

  MetricOptions opt;
  opt.plan.seed = c.seed;
  opt.plan.shared_text_utterances = c.metrics.shared_text_utterances;
  opt.plan.wer_per_speaker = c.metrics.wer_per_speaker;
  opt.js_base = c.metrics.js_base;
  opt.wer_pooling = ParseWerPooling(c.metrics.wer_pooling);
  opt.workers = c.workers;

  std::vector<EvalPair> plan = BuildEvalPlan(m, generated, opt.plan);
  MetricReport report =
      ComputeMetricReport(plan, m, generated, copies ? &*copies : nullptr, in, opt);
  size_t shown = 0;
  for (const std::string &w : report.warnings) {
    if (shown++ < 20) Warn(w);
  }
  if (report.warnings.size() > 20)
    Warn(std::to_string(report.warnings.size() - 20) + " more warnings in metrics.json");
  json config = {{"label", c.label}, {"seed", c.seed}};
  WriteJson(OutputDir(c) / "metrics.json", MetricReportToJson(report, config));
  WriteTextFile(OutputDir(c) / "metrics-summary.csv", MetricSummaryToCsv(report));
  std::cout << MetricSummaryToCsv(report);
  return 0;
}

// ---- plotdata -------------------------------------------------------------

int CmdPlotData(const RunConfig &c, const std::vector<std::string> &paths, std::string out) {
  std::vector<json> reports;
  for (const std::string &p : paths) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot open report " + p);
    try {
      reports.push_back(json::parse(in));
    } catch (const json::parse_error &) {
      throw DataError(p + " is not valid JSON");
    }
  }
  std::string csv = MakePlotData(reports);
  if (out.empty()) out = (OutputDir(c) / "plotdata.csv").string();
  WriteTextFile(out, csv);
  std::cout << fmt::format("{} reports -> {}\n", reports.size(), out);
  return 0;
}

}  // namespace

int RunDsrtEval(int argc, const char *const *argv) {
  CLI::App app{"Accent-aware evaluation of discrete speech tokens."};
  app.name("dsrt-eval");
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");
  Overrides ov;
  ov.Add(&app, "--seed", [](RunConfig &c) -> auto & { return c.seed; }, "random seed");
  ov.Add(&app, "--workers", [](RunConfig &c) -> auto & { return c.workers; },
         "worker threads (0 = all cores)");
  ov.Add(&app, "--label", [](RunConfig &c) -> auto & { return c.label; },
         "tag copied into report config blocks");
  ov.Add(&app, "--manifest", [](RunConfig &c) -> auto & { return c.paths.manifest; },
         "utterance manifest (JSON Lines)");
  ov.Add(&app, "--feature-root", [](RunConfig &c) -> auto & { return c.paths.feature_root; },
         "directory that relative manifest paths resolve against");
  ov.Add(&app, "--output-dir", [](RunConfig &c) -> auto & { return c.paths.output_dir; },
         "where outputs are written");
  ov.Add(&app, "--codebook", [](RunConfig &c) -> auto & { return c.paths.codebook; },
         "codebook file (default <output-dir>/codebook.vqcb)");

  CLI::App *validate = app.add_subcommand("validate-manifest", "check a manifest");
  bool check_files = false, vctk = false;
  validate->add_flag("--check-files", check_files, "decode features and alignments too");
  validate->add_flag("--vctk", vctk, "compare against the VCTK accent partition");

  CLI::App *train = app.add_subcommand("train-codebook", "train an EMA k-means codebook");
  ov.Add(train, "-K,--codebook-size",
         [](RunConfig &c) -> auto & { return c.quantizer.codebook_size; }, "codebook size");
  ov.Add(train, "--decay", [](RunConfig &c) -> auto & { return c.quantizer.decay; }, "EMA decay");
  ov.Add(train, "--epsilon", [](RunConfig &c) -> auto & { return c.quantizer.epsilon; },
         "count smoothing");
  ov.Add(train, "--max-frames", [](RunConfig &c) -> auto & { return c.quantizer.max_frames; },
         "training frame budget");
  ov.Add(train, "--epochs", [](RunConfig &c) -> auto & { return c.quantizer.epochs; },
         "maximum epochs");

  CLI::App *quantize = app.add_subcommand("quantize", "write token sequences");
  std::string split = "all";
  quantize->add_option("--split", split, "train, test or all")
      ->check(CLI::IsMember({"train", "test", "all"}));

  CLI::App *abx = app.add_subcommand("abx", "ABX error rates");
  ov.Add(abx, "--condition", [](RunConfig &c) -> auto & { return c.abx.condition; },
         "accent, speaker or phone");
  ov.Add(abx, "--representation", [](RunConfig &c) -> auto & { return c.abx.representation; },
         "continuous or tokens");
  ov.Add(abx, "--token-embedding", [](RunConfig &c) -> auto & { return c.abx.token_embedding; },
         "centroid or one_hot");
  ov.Add(abx, "-K,--codebook-size",
         [](RunConfig &c) -> auto & { return c.quantizer.codebook_size; },
         "codebook size recorded in the report");
  ov.Add(abx, "--top-n-words", [](RunConfig &c) -> auto & { return c.abx.top_n_words; },
         "most frequent train words considered");
  ov.Add(abx, "--p-percent", [](RunConfig &c) -> auto & { return c.abx.p_percent; },
         "percentage of combinations retained");
  ov.Add(abx, "--max-per-cell", [](RunConfig &c) -> auto & { return c.abx.max_per_cell; },
         "triplet cap per cell");
  ov.Add(abx, "--selector-features",
         [](RunConfig &c) -> auto & { return c.abx.selector_features; },
         "directory of <utt_id>.ftr used for word selection");
  ov.Add(abx, "--combinations", [](RunConfig &c) -> auto & { return c.abx.combinations; },
         "reuse a combination list instead of selecting");

  CLI::App *metrics = app.add_subcommand("metrics", "recoverability metrics and bounds");
  ov.Add(metrics, "--generated", [](RunConfig &c) -> auto & { return c.metrics.generated; },
         "generated-speech manifest");
  ov.Add(metrics, "--copy-synthesis",
         [](RunConfig &c) -> auto & { return c.metrics.copy_synthesis; },
         "copy-synthesis manifest");
  ov.Add(metrics, "--accent-embeddings",
         [](RunConfig &c) -> auto & { return c.metrics.accent_embeddings; }, "accent embeddings");
  ov.Add(metrics, "--speaker-embeddings",
         [](RunConfig &c) -> auto & { return c.metrics.speaker_embeddings; },
         "speaker embeddings");
  ov.Add(metrics, "--ppg-dir", [](RunConfig &c) -> auto & { return c.metrics.ppg_dir; },
         "directory of <utt_id>.ftr posteriorgrams");
  ov.Add(metrics, "--hypotheses", [](RunConfig &c) -> auto & { return c.metrics.hypotheses; },
         "ASR hypotheses (JSON Lines)");
  ov.Add(metrics, "--js-base", [](RunConfig &c) -> auto & { return c.metrics.js_base; },
         "logarithm base of the JS divergence");
  ov.Add(metrics, "--wer-pooling", [](RunConfig &c) -> auto & { return c.metrics.wer_pooling; },
         "tokens or utterances");

  CLI::App *plot = app.add_subcommand("plotdata", "long-format CSV from reports");
  std::vector<std::string> report_paths;
  std::string plot_out;
  plot->add_option("reports", report_paths, "report JSON files")->required();
  plot->add_option("-o,--output", plot_out, "CSV path (default <output-dir>/plotdata.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig c = config_path.empty() ? RunConfig{} : LoadRunConfig(config_path);
    ApplyEnvironment(&c);
    ov.Apply(&c);
    ValidateRunConfig(c);
    if (*validate) return CmdValidateManifest(c, check_files, vctk);
    if (*train) return CmdTrainCodebook(c);
    if (*quantize) return CmdQuantize(c, split);
    if (*abx) return CmdAbx(c);
    if (*metrics) return CmdMetrics(c);
    if (*plot) return CmdPlotData(c, report_paths, plot_out);
    return 1;
  } catch (const ConfigError &e) {
    std::cerr << "dsrt-eval: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "dsrt-eval: error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace dsrt
