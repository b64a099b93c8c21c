// src/recoverability/eval-plan.cc

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

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include <json.hpp>

#include "dsrt/error.h"
#include "dsrt/io-util.h"
#include "dsrt/parallel.h"
#include "dsrt/recoverability.h"
#include "dsrt/rng.h"

namespace dsrt {

using nlohmann::json;

std::string DirectionName(Direction direction) {
  return direction == Direction::kToSource ? "to_source" : "to_target";
}

std::string MetricName(Metric metric) {
  switch (metric) {
    case Metric::kAccentSim: return "accent_sim";
    case Metric::kSpeakerSim: return "speaker_sim";
    case Metric::kPpg: return "ppg";
    case Metric::kWer: return "wer";
  }
  return "?";
}

std::vector<GeneratedRecord> LoadGeneratedManifest(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  static const std::set<std::string> kFields = {"utt_id", "source_speaker_id",
                                                "target_speaker_id", "utterance_index"};
  std::vector<GeneratedRecord> out;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = path.string() + ":" + std::to_string(line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &) {
      throw DataError(where + ": invalid JSON");
    }
    if (!obj.is_object()) throw DataError(where + ": expected an object");
    for (const auto &[key, value] : obj.items())
      if (!kFields.count(key)) throw DataError(where + ": unknown field '" + key + "'");
    GeneratedRecord r;
    for (auto [field, dest] : {std::pair{"utt_id", &r.utt_id},
                               std::pair{"source_speaker_id", &r.source_speaker_id},
                               std::pair{"target_speaker_id", &r.target_speaker_id}}) {
      if (!obj.contains(field) || !obj[field].is_string() || obj[field].get<std::string>().empty())
        throw DataError(where + ": missing or empty '" + field + "'");
      *dest = obj[field].get<std::string>();
    }
    if (!obj.contains("utterance_index") || !obj["utterance_index"].is_number_integer() ||
        obj["utterance_index"].get<int64_t>() < 0)
      throw DataError(where + ": utterance_index must be a non-negative integer");
    r.utterance_index = obj["utterance_index"].get<int64_t>();
    if (!seen.insert(r.utt_id).second) throw DataError(where + ": duplicate utt_id " + r.utt_id);
    out.push_back(std::move(r));
  }
  return out;
}

void WriteGeneratedManifest(const std::filesystem::path &path,
                            const std::vector<GeneratedRecord> &records) {
  std::string text;
  for (const GeneratedRecord &r : records) {
    json obj = {{"utt_id", r.utt_id},
                {"source_speaker_id", r.source_speaker_id},
                {"target_speaker_id", r.target_speaker_id},
                {"utterance_index", r.utterance_index}};
    text += obj.dump() + "\n";
  }
  WriteTextFile(path, text);
}

namespace {

const UtteranceRecord &RequireGroundTruth(const Manifest &reference, const std::string &speaker,
                                          int64_t index, const std::string &for_utt) {
  const UtteranceRecord *rec = reference.FindBySpeakerIndex(speaker, index);
  if (!rec)
    throw DataError("no ground truth for speaker " + speaker + " utterance_index " +
                    std::to_string(index) + " (needed by " + for_utt + ")");
  return *rec;
}

}  // namespace

std::vector<EvalPair> BuildEvalPlan(const Manifest &reference,
                                    const std::vector<GeneratedRecord> &generated,
                                    const PlanOptions &options,
                                    const std::set<std::string> *target_speakers) {
  std::vector<EvalPair> plan;
  std::map<std::string, std::vector<const GeneratedRecord *>> by_source;
  for (const GeneratedRecord &g : generated) {
    if (target_speakers && !target_speakers->count(g.target_speaker_id)) continue;
    by_source[g.source_speaker_id].push_back(&g);
    if (g.utterance_index >= options.shared_text_utterances) continue;
    const UtteranceRecord &src =
        RequireGroundTruth(reference, g.source_speaker_id, g.utterance_index, g.utt_id);
    const UtteranceRecord &tgt =
        RequireGroundTruth(reference, g.target_speaker_id, g.utterance_index, g.utt_id);
    std::vector<Metric> sims = {Metric::kAccentSim, Metric::kSpeakerSim, Metric::kPpg};
    plan.push_back({g.utt_id, src.utt_id, Direction::kToSource, sims, g.utterance_index});
    plan.push_back({g.utt_id, tgt.utt_id, Direction::kToTarget, sims, g.utterance_index});
  }
  for (const auto &[speaker, gens] : by_source) {
    std::vector<size_t> order(gens.size());
    std::iota(order.begin(), order.end(), 0);
    if (gens.size() > options.wer_per_speaker) {
      Rng rng(DeriveSeed(options.seed, "wer/" + speaker));
      rng.Shuffle(order.begin(), order.end());
      order.resize(options.wer_per_speaker);
      std::sort(order.begin(), order.end());
    }
    for (size_t i : order) {
      const GeneratedRecord &g = *gens[i];
      const UtteranceRecord &src =
          RequireGroundTruth(reference, g.source_speaker_id, g.utterance_index, g.utt_id);
      plan.push_back({g.utt_id, src.utt_id, Direction::kToSource, {Metric::kWer}, g.utterance_index});
    }
  }
  return plan;
}

namespace {

struct Outcome {
  std::optional<double> value;
  std::optional<EditCounts> counts;
  std::string missing;  // why no value was produced
};

bool HasInput(Metric metric, const MetricInputs &in) {
  switch (metric) {
    case Metric::kAccentSim: return in.accent != nullptr;
    case Metric::kSpeakerSim: return in.speaker != nullptr;
    case Metric::kPpg: return in.ppg != nullptr;
    case Metric::kWer: return in.hypotheses != nullptr;
  }
  return false;
}

// `eval_utt` is judged against `ref_utt`; for WER its hypothesis is scored
// against the reference utterance's manifest text.
Outcome Evaluate(Metric metric, const std::string &eval_utt, const std::string &ref_utt,
                 const Manifest &reference, const MetricInputs &in, const MetricOptions &opt) {
  Outcome out;
  switch (metric) {
    case Metric::kAccentSim:
    case Metric::kSpeakerSim: {
      const EmbeddingTable *table = metric == Metric::kAccentSim ? in.accent : in.speaker;
      const std::vector<float> *u = table->Find(eval_utt), *v = table->Find(ref_utt);
      if (!u || !v) {
        out.missing = MetricName(metric) + " embedding for " + (u ? ref_utt : eval_utt);
        return out;
      }
      out.value = CosineSimilarity(*u, *v);
      return out;
    }
    case Metric::kPpg: {
      if (!in.ppg->Has(eval_utt) || !in.ppg->Has(ref_utt)) {
        out.missing = "PPG for " + (in.ppg->Has(eval_utt) ? ref_utt : eval_utt);
        return out;
      }
      out.value = PpgJsDistance(in.ppg->Read(eval_utt), in.ppg->Read(ref_utt), opt.js_base);
      return out;
    }
    case Metric::kWer: {
      auto hyp = in.hypotheses->find(eval_utt);
      if (hyp == in.hypotheses->end()) {
        out.missing = "hypothesis transcript for " + eval_utt;
        return out;
      }
      const UtteranceRecord *rec = reference.Find(ref_utt);
      if (!rec) throw DataError("reference utterance " + ref_utt + " is not in the manifest");
      std::vector<std::string> ref_words = TokenizeTranscript(rec->text);
      if (ref_words.empty()) throw DataError("reference text of " + ref_utt + " has no words");
      out.counts = AlignWords(ref_words, TokenizeTranscript(hyp->second));
      out.value = static_cast<double>(out.counts->Errors()) /
                  static_cast<double>(out.counts->reference_length);
      return out;
    }
  }
  return out;
}

struct Job {
  std::string eval_utt, ref_utt;
};

std::vector<Outcome> EvaluateAll(Metric metric, const std::vector<Job> &jobs,
                                 const Manifest &reference, const MetricInputs &in,
                                 const MetricOptions &opt) {
  std::vector<Outcome> out(jobs.size());
  ParallelFor(jobs.size(), opt.workers, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      out[i] = Evaluate(metric, jobs[i].eval_utt, jobs[i].ref_utt, reference, in, opt);
  });
  return out;
}

// Mean (or pooled WER) of the available outcomes; counts skipped ones.
std::optional<double> Aggregate(Metric metric, const std::vector<Outcome> &outcomes,
                                WerPooling pooling, size_t *used) {
  *used = 0;
  if (metric == Metric::kWer) {
    std::vector<EditCounts> counts;
    for (const Outcome &o : outcomes)
      if (o.counts) counts.push_back(*o.counts);
    *used = counts.size();
    if (counts.empty()) return std::nullopt;
    return CorpusWordErrorRate(counts, pooling);
  }
  double sum = 0.0;
  for (const Outcome &o : outcomes)
    if (o.value) {
      sum += *o.value;
      ++*used;
    }
  if (*used == 0) return std::nullopt;
  return sum / static_cast<double>(*used);
}

}  // namespace

Bound ComputeBounds(Metric metric, const Manifest &reference,
                    const std::vector<GeneratedRecord> &generated,
                    const std::vector<GeneratedRecord> *copy_synthesis,
                    const MetricInputs &inputs, const MetricOptions &options) {
  Bound bound;
  if (!HasInput(metric, inputs)) {
    bound.flags.push_back("no " + MetricName(metric) + " inputs");
    return bound;
  }
  const int64_t shared = options.plan.shared_text_utterances;

  std::set<std::pair<std::string, std::string>> speaker_pairs;
  std::set<std::string> sources, targets;
  for (const GeneratedRecord &g : generated) {
    if (g.source_speaker_id == g.target_speaker_id) continue;
    speaker_pairs.insert({g.source_speaker_id, g.target_speaker_id});
    sources.insert(g.source_speaker_id);
    targets.insert(g.target_speaker_id);
  }

  std::vector<Job> lower_jobs;
  size_t lower_missing_gt = 0;
  for (const auto &[src, tgt] : speaker_pairs) {
    for (int64_t i = 0; i < shared; ++i) {
      const UtteranceRecord *rs = reference.FindBySpeakerIndex(src, i);
      const UtteranceRecord *rt = reference.FindBySpeakerIndex(tgt, i);
      if (!rs || !rt) {
        ++lower_missing_gt;
        continue;
      }
      lower_jobs.push_back({rs->utt_id, rt->utt_id});
    }
  }
  std::vector<Outcome> lower = EvaluateAll(metric, lower_jobs, reference, inputs, options);
  bound.lower = Aggregate(metric, lower, options.wer_pooling, &bound.lower_pairs);
  if (lower_missing_gt)
    bound.flags.push_back(std::to_string(lower_missing_gt) +
                          " lower-bound pairings lack ground truth");
  if (bound.lower_pairs < lower.size())
    bound.flags.push_back(std::to_string(lower.size() - bound.lower_pairs) +
                          " lower-bound pairings lack artifacts");

  if (!copy_synthesis) {
    bound.flags.push_back("no copy-synthesis set; upper bound omitted");
    return bound;
  }
  const std::set<std::string> &own = metric == Metric::kSpeakerSim ? targets : sources;
  std::vector<Job> upper_jobs;
  for (const GeneratedRecord &c : *copy_synthesis) {
    if (c.source_speaker_id != c.target_speaker_id)
      throw DataError("copy-synthesis utterance " + c.utt_id +
                      " has different source and target speakers");
    if (c.utterance_index >= shared || !own.count(c.source_speaker_id)) continue;
    const UtteranceRecord &gt =
        RequireGroundTruth(reference, c.source_speaker_id, c.utterance_index, c.utt_id);
    upper_jobs.push_back({c.utt_id, gt.utt_id});
  }
  if (upper_jobs.empty()) {
    bound.flags.push_back("copy-synthesis set has no utterance of the required speakers");
    return bound;
  }
  std::vector<Outcome> upper = EvaluateAll(metric, upper_jobs, reference, inputs, options);
  bound.upper = Aggregate(metric, upper, options.wer_pooling, &bound.upper_pairs);
  if (bound.upper_pairs < upper.size())
    bound.flags.push_back(std::to_string(upper.size() - bound.upper_pairs) +
                          " upper-bound pairings lack artifacts");
  return bound;
}

const std::vector<std::string> &MetricSummary::Columns() {
  static const std::vector<std::string> kColumns = {"A-SIM (src)", "A-SIM (tgt)", "S-SIM (src)",
                                                    "S-SIM (tgt)", "PPG",         "WER"};
  return kColumns;
}

MetricReport ComputeMetricReport(const std::vector<EvalPair> &plan, const Manifest &reference,
                                 const std::vector<GeneratedRecord> &generated,
                                 const std::vector<GeneratedRecord> *copy_synthesis,
                                 const MetricInputs &inputs, const MetricOptions &options) {
  const std::vector<Metric> all = {Metric::kAccentSim, Metric::kSpeakerSim, Metric::kPpg,
                                   Metric::kWer};
  MetricReport report;
  report.js_base = options.js_base;
  report.wer_pooling = options.wer_pooling;
  for (Metric m : all)
    if (!HasInput(m, inputs)) report.metrics_missing.push_back(MetricName(m));
  if (report.metrics_missing.size() == all.size())
    throw DataError("no metric inputs: give embeddings, PPGs or hypothesis transcripts");
  for (const std::string &m : report.metrics_missing)
    report.warnings.push_back("no inputs for " + m + "; reported as null");

  report.pairs.resize(plan.size());
  std::vector<std::vector<std::string>> missing(plan.size());
  ParallelFor(plan.size(), options.workers, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const EvalPair &p = plan[i];
      PairResult &r = report.pairs[i];
      r.pair = p;
      for (Metric m : p.metrics) {
        if (!HasInput(m, inputs)) continue;
        Outcome o = Evaluate(m, p.generated_utt, p.reference_utt, reference, inputs, options);
        if (!o.missing.empty()) missing[i].push_back(o.missing);
        switch (m) {
          case Metric::kAccentSim: r.accent_sim = o.value; break;
          case Metric::kSpeakerSim: r.speaker_sim = o.value; break;
          case Metric::kPpg: r.ppg = o.value; break;
          case Metric::kWer: r.wer_counts = o.counts; break;
        }
      }
    }
  });
  for (size_t i = 0; i < plan.size(); ++i)
    for (const std::string &m : missing[i])
      report.warnings.push_back("pair " + plan[i].generated_utt + " -> " + plan[i].reference_utt +
                                ": missing " + m);

  auto mean_of = [&](const std::string &column, Direction dir, auto field) {
    double sum = 0.0;
    size_t n = 0;
    for (const PairResult &r : report.pairs) {
      const std::optional<double> &v = r.*field;
      if (r.pair.direction == dir && v) {
        sum += *v;
        ++n;
      }
    }
    report.summary.counts[column] = n;
    report.summary.values[column] =
        n ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt;
  };
  mean_of("A-SIM (src)", Direction::kToSource, &PairResult::accent_sim);
  mean_of("A-SIM (tgt)", Direction::kToTarget, &PairResult::accent_sim);
  mean_of("S-SIM (src)", Direction::kToSource, &PairResult::speaker_sim);
  mean_of("S-SIM (tgt)", Direction::kToTarget, &PairResult::speaker_sim);
  mean_of("PPG", Direction::kToSource, &PairResult::ppg);
  std::vector<EditCounts> counts;
  for (const PairResult &r : report.pairs)
    if (r.wer_counts) counts.push_back(*r.wer_counts);
  report.summary.counts["WER"] = counts.size();
  report.summary.values["WER"] =
      counts.empty() ? std::nullopt
                     : std::optional<double>(CorpusWordErrorRate(counts, options.wer_pooling));

  const std::pair<const char *, Metric> bound_metrics[] = {{"A-SIM", Metric::kAccentSim},
                                                           {"S-SIM", Metric::kSpeakerSim},
                                                           {"PPG", Metric::kPpg},
                                                           {"WER", Metric::kWer}};
  for (const auto &[name, metric] : bound_metrics)
    report.bounds[name] =
        ComputeBounds(metric, reference, generated, copy_synthesis, inputs, options);
  return report;
}

}  // namespace dsrt
