// tests/recoverability-test.cc

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

#include <doctest.h>

#include <cmath>
#include <set>

#include "dsrt/error.h"
#include "dsrt/io-util.h"
#include "dsrt/recoverability.h"
#include "oracles.h"
#include "test-util.h"

namespace dsrt {
namespace {

using testing::TempDir;

std::vector<float> RandomDistribution(Rng &rng, size_t n) {
  std::vector<float> p(n);
  double sum = 0.0;
  for (float &v : p) {
    v = rng.Index(4) == 0 ? 0.0f : static_cast<float>(rng.Unit());
    sum += v;
  }
  if (sum == 0.0) {
    p[0] = 1.0f;
    return p;
  }
  for (float &v : p) v = static_cast<float>(v / sum);
  return p;
}

std::vector<double> AsDouble(const std::vector<float> &v) { return {v.begin(), v.end()}; }

TEST_CASE("JS distance reference value") {
  std::vector<float> p{0.5f, 0.5f}, q{1.0f, 0.0f};
  CHECK(oracle::Jsd({0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(0.311278).epsilon(1e-6));
  CHECK(std::abs(JsDistance(p, q) - 0.557923) < 1e-6);
  CHECK(JsDistance(p, q) == doctest::Approx(std::sqrt(oracle::Jsd({0.5, 0.5}, {1.0, 0.0}))).epsilon(1e-12));
}

TEST_CASE("JS distance of disjoint supports is one") {
  std::vector<float> p{1, 0, 0}, q{0, 0, 1};
  CHECK(JsDistance(p, q) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(JsDistance(p, p) == 0.0);
}

TEST_CASE("JS divergence agrees with direct summation") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    size_t n = 2 + rng.Index(20);
    auto p = RandomDistribution(rng, n), q = RandomDistribution(rng, n);
    double d = JsDivergence(p, q);
    // Float rows need not sum to exactly one; the divergence is capped at 1 bit.
    CHECK(std::abs(d - std::min(1.0, oracle::Jsd(AsDouble(p), AsDouble(q)))) < 1e-9);
    CHECK(JsDistance(p, q) == JsDistance(q, p));
    CHECK(JsDistance(p, q) >= 0.0);
    CHECK(JsDistance(p, q) <= 1.0);
    CHECK(JsDivergence(p, q, std::exp(1.0)) == doctest::Approx(d * std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("JS divergence errors") {
  std::vector<float> p{1, 0}, q{1, 0, 0};
  CHECK_THROWS_AS(JsDivergence(p, q), DataError);
  CHECK_THROWS_AS(JsDivergence(p, p, 1.0), ConfigError);
}

TEST_CASE("cosine similarity") {
  std::vector<float> u{1, 2, 3}, v{-1, -2, -3}, w{3, 0, -1}, z{0, 0, 0};
  CHECK(CosineSimilarity(u, u) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(CosineSimilarity(u, v) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(CosineSimilarity(u, w) == doctest::Approx(0.0));
  CHECK_THROWS_AS(CosineSimilarity(u, z), DataError);
}

FeatureSequence RandomPpg(Rng &rng, size_t t, size_t c) {
  Matrix m(t, c);
  for (size_t i = 0; i < t; ++i) {
    auto row = RandomDistribution(rng, c);
    std::copy(row.begin(), row.end(), m.Row(i).begin());
  }
  return {m, 100.0f};
}

TEST_CASE("PPG distance") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    size_t c = 2 + rng.Index(6);
    FeatureSequence p = RandomPpg(rng, 1 + rng.Index(6), c), q = RandomPpg(rng, 1 + rng.Index(6), c);
    double d = PpgJsDistance(p, q);
    CHECK(d == PpgJsDistance(q, p));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(PpgJsDistance(p, p) == 0.0);
    auto best = oracle::BestPath(
        [&](size_t i, size_t j) { return JsDistance(p.frames.Row(i), q.frames.Row(j)); },
        p.NumFrames(), q.NumFrames());
    CHECK(d == best.total / static_cast<double>(best.length));
  }
  FeatureSequence a{Matrix(1, 2, {0.5f, 0.5f}), 100.0f}, b{Matrix(1, 2, {1.0f, 0.0f}), 100.0f};
  CHECK(std::abs(PpgJsDistance(a, b) - 0.557923) < 1e-6);
  CHECK_THROWS_AS(PpgJsDistance(a, FeatureSequence{Matrix(1, 3, {1, 0, 0}), 100.0f}), DataError);
  CHECK_THROWS_AS(PpgJsDistance(a, FeatureSequence{Matrix(1, 2, {0.7f, 0.7f}), 100.0f}), DataError);
}

TEST_CASE("WER examples") {
  CHECK(WordErrorRate("the cat sat", "the sat") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(WordErrorRate("a b", "c d e") == 1.5);
  EditCounts c = AlignWords({"a", "b"}, {"c", "d", "e"});
  CHECK(c.substitutions == 2);
  CHECK(c.insertions == 1);
  CHECK(c.deletions == 0);
  CHECK(WordErrorRate("Please call Stella.", "please, CALL stella") == 0.0);
  CHECK_THROWS_AS(WordErrorRate("...", "a"), DataError);
  CHECK(WordErrorRate("a b c", "") == 1.0);
}

TEST_CASE("WER equals exhaustive edit-script minimum") {
  const std::vector<std::string> alphabet{"a", "b", "c"};
  std::vector<std::vector<std::string>> all{{}};
  for (size_t len = 1; len <= 4; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto &s : all)
      if (s.size() == len - 1)
        for (const auto &w : alphabet) {
          auto t = s;
          t.push_back(w);
          next.push_back(t);
        }
    all.insert(all.end(), next.begin(), next.end());
  }
  for (const auto &r : all)
    for (const auto &h : all) {
      EditCounts c = AlignWords(r, h);
      CHECK(c.Errors() == oracle::EditScript(r, 0, h, 0));
      CHECK(c.reference_length == r.size());
      CHECK(r.size() - c.deletions == h.size() - c.insertions);
    }
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> r(1 + rng.Index(6)), h(rng.Index(7));
    for (auto &w : r) w = alphabet[rng.Index(3)];
    for (auto &w : h) w = alphabet[rng.Index(3)];
    CHECK(AlignWords(r, h).Errors() == oracle::EditScript(r, 0, h, 0));
  }
}

TEST_CASE("corpus WER pooling") {
  std::vector<EditCounts> counts{{1, 0, 0, 2}, {0, 0, 0, 8}};
  CHECK(CorpusWordErrorRate(counts) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(CorpusWordErrorRate(counts, WerPooling::kUtterances) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ParseWerPooling("utterances") == WerPooling::kUtterances);
  CHECK(WerPoolingName(WerPooling::kTokens) == "tokens");
  CHECK_THROWS_AS(ParseWerPooling("words"), ConfigError);
  CHECK_THROWS_AS(CorpusWordErrorRate({}), DataError);
}

UtteranceRecord Rec(const std::string &spk, const std::string &acc, int64_t index,
                    const std::string &text = "one two three") {
  UtteranceRecord r;
  r.utt_id = spk + "_" + std::to_string(index);
  r.speaker_id = spk;
  r.accent_region = acc;
  r.split = Split::kTest;
  r.text = text;
  r.feature_path = "x";
  r.utterance_index = index;
  return r;
}

struct PlanFixture {
  Manifest manifest;
  std::vector<GeneratedRecord> generated;
  PlanFixture(int sources, int targets, int utts) {
    std::vector<UtteranceRecord> recs;
    for (int s = 0; s < sources; ++s)
      for (int i = 0; i < utts; ++i) recs.push_back(Rec("src" + std::to_string(s), "Scottish", i));
    for (int t = 0; t < targets; ++t)
      for (int i = 0; i < utts; ++i)
        recs.push_back(Rec("tgt" + std::to_string(t), "SouthernEnglish", i));
    manifest = Manifest::FromRecords(recs);
    for (int s = 0; s < sources; ++s)
      for (int i = 0; i < utts; ++i) {
        std::string src = "src" + std::to_string(s), tgt = "tgt" + std::to_string(s % targets);
        generated.push_back({"gen_" + src + "_" + std::to_string(i), src, tgt, i});
      }
  }
};

TEST_CASE("evaluation plan size for 46 source speakers") {
  PlanFixture f(46, 4, 40);
  auto plan = BuildEvalPlan(f.manifest, f.generated, {});
  size_t sim = 0, wer = 0;
  std::map<std::string, size_t> wer_per_speaker;
  for (const EvalPair &p : plan) {
    if (p.metrics == std::vector<Metric>{Metric::kWer}) {
      ++wer;
      ++wer_per_speaker[p.generated_utt.substr(4, p.generated_utt.rfind('_') - 4)];
      CHECK(p.direction == Direction::kToSource);
    } else {
      ++sim;
      CHECK(p.utterance_index < 24);
      CHECK(p.metrics.size() == 3);
    }
  }
  CHECK(sim == 2208);
  CHECK(wer == 46 * 24);
  CHECK(wer_per_speaker.size() == 46);
  for (const auto &[spk, n] : wer_per_speaker) CHECK(n == 24);
}

TEST_CASE("plan pairing rules") {
  PlanFixture f(2, 1, 40);
  auto plan = BuildEvalPlan(f.manifest, f.generated, {});
  bool index30_sim = false, index30_wer = false;
  for (const EvalPair &p : plan) {
    if (p.generated_utt == "gen_src0_30") {
      if (p.metrics == std::vector<Metric>{Metric::kWer}) index30_wer = true;
      else index30_sim = true;
    }
    if (p.generated_utt == "gen_src0_3" && p.metrics.size() == 3)
      CHECK(p.reference_utt == (p.direction == Direction::kToSource ? "src0_3" : "tgt0_3"));
  }
  CHECK_FALSE(index30_sim);
  CHECK(BuildEvalPlan(f.manifest, f.generated, {}).size() == plan.size());
  PlanOptions all_wer;
  all_wer.wer_per_speaker = 40;
  for (const EvalPair &p : BuildEvalPlan(f.manifest, f.generated, all_wer))
    if (p.generated_utt == "gen_src0_30" && p.metrics.size() == 1) index30_wer = true;
  CHECK(index30_wer);

  PlanOptions other_seed;
  other_seed.seed = 7;
  auto wer_set = [](const std::vector<EvalPair> &pl) {
    std::set<std::string> s;
    for (const auto &p : pl)
      if (p.metrics.size() == 1) s.insert(p.generated_utt);
    return s;
  };
  CHECK(wer_set(plan) != wer_set(BuildEvalPlan(f.manifest, f.generated, other_seed)));

  std::set<std::string> none{"nobody"};
  CHECK(BuildEvalPlan(f.manifest, f.generated, {}, &none).empty());

  auto broken = f.generated;
  broken.push_back({"gen_x", "src0", "tgt9", 2});
  CHECK_THROWS_AS(BuildEvalPlan(f.manifest, broken, {}), DataError);
}

TEST_CASE("generated manifest files") {
  TempDir dir("gen");
  std::vector<GeneratedRecord> recs{{"g1", "a", "b", 0}, {"g2", "a", "c", 5}};
  WriteGeneratedManifest(dir / "g.jsonl", recs);
  auto back = LoadGeneratedManifest(dir / "g.jsonl");
  REQUIRE(back.size() == 2);
  CHECK(back[1].target_speaker_id == "c");
  CHECK(back[1].utterance_index == 5);
  WriteTextFile(dir / "u.jsonl",
                "{\"utt_id\":\"g\",\"source_speaker_id\":\"a\",\"target_speaker_id\":\"b\","
                "\"utterance_index\":0,\"extra\":1}\n");
  CHECK_THROWS_AS(LoadGeneratedManifest(dir / "u.jsonl"), DataError);
  WriteGeneratedManifest(dir / "d.jsonl", {recs[0], recs[0]});
  CHECK_THROWS_AS(LoadGeneratedManifest(dir / "d.jsonl"), DataError);
  CHECK_THROWS_AS(LoadGeneratedManifest(dir / "missing.jsonl"), DataError);
}

// Every utterance shares one embedding, one PPG and its own transcript.
struct IdenticalInputs {
  TempDir dir{"identical"};
  PlanFixture f{2, 1, 30};
  EmbeddingTable emb;
  PpgStore ppg{dir.path()};
  std::map<std::string, std::string> hyps;
  std::vector<GeneratedRecord> copies;

  IdenticalInputs() {
    std::map<std::string, std::vector<float>> vecs;
    std::vector<std::string> ids;
    for (const auto &r : f.manifest.Records()) ids.push_back(r.utt_id);
    for (const auto &g : f.generated) ids.push_back(g.utt_id);
    for (const auto &r : f.manifest.Records()) {
      GeneratedRecord c{"copy_" + r.utt_id, r.speaker_id, r.speaker_id, r.utterance_index};
      copies.push_back(c);
      ids.push_back(c.utt_id);
    }
    FeatureSequence p{Matrix(3, 2, {0.25f, 0.75f, 1.0f, 0.0f, 0.5f, 0.5f}), 100.0f};
    for (const auto &id : ids) {
      vecs[id] = {1.0f, 2.0f, -1.0f};
      WriteFeatureFile(dir / (id + ".ftr"), p);
      hyps[id] = "one two three";
    }
    emb = EmbeddingTable::FromMap(vecs);
  }
  MetricInputs All() const { return {&emb, &emb, &ppg, &hyps}; }
};

TEST_CASE("identical generated and reference sets") {
  IdenticalInputs in;
  MetricOptions opt;
  opt.workers = 2;
  auto plan = BuildEvalPlan(in.f.manifest, in.f.generated, opt.plan);
  MetricReport r = ComputeMetricReport(plan, in.f.manifest, in.f.generated, &in.copies, in.All(), opt);
  CHECK(*r.summary.values.at("A-SIM (src)") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*r.summary.values.at("S-SIM (tgt)") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*r.summary.values.at("PPG") == 0.0);
  CHECK(*r.summary.values.at("WER") == 0.0);
  CHECK(r.summary.counts.at("A-SIM (src)") == 48);
  CHECK(r.summary.counts.at("WER") == 48);
  for (const auto &[name, b] : r.bounds) {
    CAPTURE(name);
    REQUIRE(b.lower);
    REQUIRE(b.upper);
    CHECK(*b.lower == doctest::Approx(*b.upper).epsilon(1e-12));
  }
  CHECK(*r.bounds.at("WER").lower == 0.0);
  CHECK(r.bounds.at("A-SIM").lower_pairs == 48);
  CHECK(r.bounds.at("A-SIM").upper_pairs == 48);
  CHECK(r.bounds.at("S-SIM").upper_pairs == 24);
  CHECK(r.warnings.empty());
  CHECK(MetricSummary::Columns().size() == 6);
}

TEST_CASE("missing inputs are reported as null") {
  IdenticalInputs in;
  MetricOptions opt;
  auto plan = BuildEvalPlan(in.f.manifest, in.f.generated, opt.plan);
  MetricInputs only_wer{nullptr, nullptr, nullptr, &in.hyps};
  MetricReport r = ComputeMetricReport(plan, in.f.manifest, in.f.generated, nullptr, only_wer, opt);
  CHECK_FALSE(r.summary.values.at("A-SIM (src)"));
  CHECK_FALSE(r.summary.values.at("PPG"));
  CHECK(r.summary.values.at("WER"));
  CHECK(r.metrics_missing.size() == 3);
  CHECK_FALSE(r.bounds.at("A-SIM").lower);
  CHECK_FALSE(r.bounds.at("WER").upper);
  CHECK(r.bounds.at("WER").lower);

  CHECK_THROWS_AS(ComputeMetricReport(plan, in.f.manifest, in.f.generated, nullptr, {}, opt),
                  DataError);

  auto partial = in.hyps;
  for (int i = 0; i < 30; ++i) partial.erase("gen_src0_" + std::to_string(i));
  MetricInputs some{nullptr, nullptr, nullptr, &partial};
  MetricReport p = ComputeMetricReport(plan, in.f.manifest, in.f.generated, nullptr, some, opt);
  CHECK(p.summary.counts.at("WER") == r.summary.counts.at("WER") - 24);
  CHECK_FALSE(p.warnings.empty());
}

TEST_CASE("WER bound scores hypotheses against the reference text") {
  std::vector<UtteranceRecord> recs{Rec("s", "Scottish", 0, "a b c d"), Rec("t", "Irish", 0, "a b c d")};
  Manifest m = Manifest::FromRecords(recs);
  std::vector<GeneratedRecord> gen{{"g", "s", "t", 0}};
  std::vector<GeneratedRecord> copy{{"c", "s", "s", 0}};
  std::map<std::string, std::string> hyps{{"s_0", "a b x d"}, {"t_0", "a b c d"}, {"c", "a b"}};
  MetricInputs in{nullptr, nullptr, nullptr, &hyps};
  MetricOptions opt;
  Bound b = ComputeBounds(Metric::kWer, m, gen, &copy, in, opt);
  CHECK(*b.lower == 0.25);
  CHECK(*b.upper == 0.5);

  std::vector<GeneratedRecord> bad{{"c", "s", "t", 0}};
  CHECK_THROWS_AS(ComputeBounds(Metric::kWer, m, gen, &bad, in, opt), DataError);
}

}  // namespace
}  // namespace dsrt
