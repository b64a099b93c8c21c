// src/synth/synth.cc

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

#include "dsrt/synth.h"

#include <cmath>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "dsrt/corpus.h"
#include "dsrt/error.h"
#include "dsrt/io-util.h"
#include "dsrt/recoverability.h"
#include "dsrt/rng.h"

namespace dsrt {

namespace {

const std::vector<std::string> kConsonants = {"b", "d", "g", "k", "m", "p", "s", "t"};
const std::vector<std::string> kVowels = {"aa", "ae", "ih", "iy", "uw"};

struct Lexicon {
  std::vector<std::string> phones;  // consonants, vowels, then "sil"
  std::vector<std::string> words;
  std::vector<std::vector<int>> pron;
  int Silence() const { return static_cast<int>(phones.size()) - 1; }
};

Lexicon MakeLexicon(const SynthConfig &cfg) {
  Lexicon lex;
  lex.phones = kConsonants;
  lex.phones.insert(lex.phones.end(), kVowels.begin(), kVowels.end());
  lex.phones.push_back("sil");
  std::vector<std::pair<int, int>> frames;
  for (int c1 = 0; c1 < static_cast<int>(kConsonants.size()); ++c1)
    for (int c2 = 0; c2 < static_cast<int>(kConsonants.size()); ++c2) frames.push_back({c1, c2});
  Rng rng(DeriveSeed(cfg.seed, "lexicon"));
  rng.Shuffle(frames.begin(), frames.end());
  if (cfg.consonant_frames < 1 || cfg.consonant_frames > static_cast<int>(frames.size()))
    throw ConfigError("consonant_frames must be in [1, 64]");
  frames.resize(cfg.consonant_frames);
  const int nc = static_cast<int>(kConsonants.size());
  for (auto [c1, c2] : frames)
    for (int v = 0; v < static_cast<int>(kVowels.size()); ++v) {
      lex.words.push_back(kConsonants[c1] + kVowels[v] + kConsonants[c2]);
      lex.pron.push_back({c1, nc + v, c2});
    }
  return lex;
}

std::vector<double> RandomVector(Rng &rng, int dim, double scale) {
  std::vector<double> v(dim);
  for (double &x : v) x = scale * rng.Gaussian();
  return v;
}

std::vector<double> UnitVector(Rng &rng, int dim) {
  std::vector<double> v = RandomVector(rng, dim, 1.0);
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double &x : v) x /= n;
  return v;
}

std::vector<int> RandomSentence(Rng &rng, const SynthConfig &cfg, size_t vocab) {
  int n = cfg.min_words + static_cast<int>(rng.Index(cfg.max_words - cfg.min_words + 1));
  std::vector<int> words(n);
  for (int &w : words) w = static_cast<int>(rng.Index(vocab));
  return words;
}

std::string SentenceText(const Lexicon &lex, const std::vector<int> &words) {
  std::string text;
  for (size_t i = 0; i < words.size(); ++i) {
    std::string w = lex.words[words[i]];
    if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    text += (i ? " " : "") + w;
  }
  return text + ".";
}

struct SpeakerInfo {
  std::string id;
  int accent = 0;
  Split split = Split::kTrain;
  std::vector<double> offset;
};

struct Interval {
  int start, end;  // frames
  std::string label;
};

// Frame-level phone classes of an utterance plus both alignment tiers.
struct Timeline {
  std::vector<int> classes;
  std::vector<Interval> words, phones;
};

Timeline MakeTimeline(const Lexicon &lex, const std::vector<int> &sentence, Rng &rng) {
  Timeline tl;
  auto pause = [&](int frames) {
    int t = static_cast<int>(tl.classes.size());
    tl.classes.insert(tl.classes.end(), frames, lex.Silence());
    tl.words.push_back({t, t + frames, "sil"});
    tl.phones.push_back({t, t + frames, "sil"});
  };
  pause(3);
  for (size_t i = 0; i < sentence.size(); ++i) {
    if (i) pause(2);
    int word_start = static_cast<int>(tl.classes.size());
    for (int p : lex.pron[sentence[i]]) {
      int t = static_cast<int>(tl.classes.size());
      int dur = 3 + static_cast<int>(rng.Index(5));
      tl.classes.insert(tl.classes.end(), dur, p);
      tl.phones.push_back({t, t + dur, lex.phones[p]});
    }
    tl.words.push_back({word_start, static_cast<int>(tl.classes.size()), lex.words[sentence[i]]});
  }
  pause(3);
  return tl;
}

std::string AlignmentText(const std::vector<Interval> &tier, float rate) {
  std::string out;
  for (const Interval &iv : tier)
    out += fmt::format("{}\t{}\t{}\n", iv.start / static_cast<double>(rate),
                       iv.end / static_cast<double>(rate), iv.label);
  return out;
}

// Accents other than the first shift part of each vowel's posterior mass to
// another vowel; `accent_mix` weights those shifts.
FeatureSequence MakePpg(const std::vector<int> &classes, size_t num_classes, float rate,
                        const std::vector<std::pair<double, int>> &accent_mix, double noise,
                        Rng &rng) {
  const int nc = static_cast<int>(kConsonants.size()), nv = static_cast<int>(kVowels.size());
  Matrix m(classes.size(), num_classes);
  for (size_t t = 0; t < classes.size(); ++t) {
    std::vector<double> logits(num_classes);
    double mx = -1e300;
    for (size_t c = 0; c < num_classes; ++c) {
      logits[c] = (static_cast<int>(c) == classes[t] ? 3.0 : 0.0) + noise * rng.Gaussian();
    }
    int v = classes[t] - nc;
    if (v >= 0 && v < nv)
      for (auto [w, a] : accent_mix)
        if (a > 0) logits[nc + (v + a) % nv] += 2.5 * w;
    for (double l : logits) mx = std::max(mx, l);
    double z = 0.0;
    for (double &l : logits) z += (l = std::exp(l - mx));
    for (size_t c = 0; c < num_classes; ++c) m(t, c) = static_cast<float>(logits[c] / z);
  }
  return FeatureSequence{std::move(m), rate};
}

std::string Hypothesis(const Lexicon &lex, const std::vector<int> &sentence, double sub_rate,
                       Rng &rng) {
  std::string text;
  for (size_t i = 0; i < sentence.size(); ++i) {
    int w = sentence[i];
    if (rng.Unit() < sub_rate) w = static_cast<int>(rng.Index(lex.words.size()));
    text += (i ? " " : "") + lex.words[w];
  }
  return text;
}

}  // namespace

void WriteSyntheticCorpus(const std::filesystem::path &dir, const SynthConfig &cfg) {
  if (cfg.accents.empty() || cfg.speakers_per_accent < 2 || cfg.dim < 1 ||
      cfg.utterances_per_speaker < 1 || cfg.shared_utterances < 0 || cfg.min_words < 1 ||
      cfg.max_words < cfg.min_words || !(cfg.frame_rate_hz > 0.0f))
    throw ConfigError("invalid synthetic corpus configuration");
  const Lexicon lex = MakeLexicon(cfg);
  const float rate = cfg.frame_rate_hz;
  const double sigma = cfg.noise_sigma;

  Rng phone_rng(DeriveSeed(cfg.seed, "phone-means"));
  std::vector<std::vector<double>> phone_mean;
  for (size_t p = 0; p < lex.phones.size(); ++p)
    phone_mean.push_back(RandomVector(phone_rng, cfg.dim, cfg.phone_scale * sigma));

  Rng accent_rng(DeriveSeed(cfg.seed, "accent-offsets"));
  std::vector<std::vector<double>> accent_offset;
  std::vector<double> axis = UnitVector(accent_rng, cfg.dim);
  for (size_t a = 0; a < cfg.accents.size(); ++a) {
    std::vector<double> dir = cfg.accents.size() == 2 ? axis : UnitVector(accent_rng, cfg.dim);
    double sign = cfg.accents.size() == 2 && a == 1 ? -1.0 : 1.0;
    for (double &x : dir) x *= sign * cfg.accent_offset * sigma;
    accent_offset.push_back(std::move(dir));
  }

  std::vector<SpeakerInfo> speakers;
  for (size_t a = 0; a < cfg.accents.size(); ++a)
    for (int s = 0; s < cfg.speakers_per_accent; ++s) {
      SpeakerInfo info;
      info.id = fmt::format("spk{:02d}", speakers.size() + 1);
      info.accent = static_cast<int>(a);
      info.split = s < cfg.speakers_per_accent / 2 ? Split::kTrain : Split::kTest;
      Rng rng(DeriveSeed(cfg.seed, "speaker/" + info.id));
      info.offset = RandomVector(rng, cfg.dim, cfg.speaker_offset * sigma);
      speakers.push_back(std::move(info));
    }

  Rng shared_rng(DeriveSeed(cfg.seed, "text/shared"));
  std::vector<std::vector<int>> shared;
  for (int i = 0; i < cfg.shared_utterances; ++i)
    shared.push_back(RandomSentence(shared_rng, cfg, lex.words.size()));

  std::vector<UtteranceRecord> records;
  std::map<std::string, std::vector<int>> sentence_of;  // utt -> words
  std::map<std::string, Timeline> timeline_of;
  for (const SpeakerInfo &spk : speakers) {
    Rng text_rng(DeriveSeed(cfg.seed, "text/" + spk.id));
    for (int i = 0; i < cfg.utterances_per_speaker; ++i) {
      std::vector<int> sentence =
          i < cfg.shared_utterances ? shared[i] : RandomSentence(text_rng, cfg, lex.words.size());
      std::string utt = fmt::format("{}_{:03d}", spk.id, i);
      Rng rng(DeriveSeed(cfg.seed, "frames/" + utt));
      Timeline tl = MakeTimeline(lex, sentence, rng);
      Matrix frames(tl.classes.size(), cfg.dim);
      for (size_t t = 0; t < tl.classes.size(); ++t)
        for (int d = 0; d < cfg.dim; ++d)
          frames(t, d) = static_cast<float>(phone_mean[tl.classes[t]][d] +
                                            accent_offset[spk.accent][d] + spk.offset[d] +
                                            sigma * rng.Gaussian());
      WriteFeatureFile(dir / "features" / (utt + ".ftr"), FeatureSequence{std::move(frames), rate});
      WriteTextFile(dir / "align" / "words" / (utt + ".txt"), AlignmentText(tl.words, rate));
      WriteTextFile(dir / "align" / "phones" / (utt + ".txt"), AlignmentText(tl.phones, rate));

      UtteranceRecord rec;
      rec.utt_id = utt;
      rec.speaker_id = spk.id;
      rec.accent_region = cfg.accents[spk.accent];
      rec.split = spk.split;
      rec.text = SentenceText(lex, sentence);
      rec.feature_path = "features/" + utt + ".ftr";
      rec.word_alignment_path = "align/words/" + utt + ".txt";
      rec.phone_alignment_path = "align/phones/" + utt + ".txt";
      rec.utterance_index = i;
      records.push_back(std::move(rec));
      sentence_of[utt] = std::move(sentence);
      timeline_of[utt] = std::move(tl);
    }
  }
  WriteManifest(dir / "manifest.jsonl", records);
  if (!cfg.with_metric_inputs) return;

  // ---- Side inputs for the recoverability metrics.
  const int emb_dim = 8;
  Rng proto_rng(DeriveSeed(cfg.seed, "embedding-prototypes"));
  std::vector<std::vector<double>> accent_proto, speaker_proto;
  for (size_t a = 0; a < cfg.accents.size(); ++a)
    accent_proto.push_back(RandomVector(proto_rng, emb_dim, 1.0));
  for (size_t s = 0; s < speakers.size(); ++s)
    speaker_proto.push_back(RandomVector(proto_rng, emb_dim, 1.0));

  std::string accent_lines, speaker_lines, hyp_lines;
  auto emit = [&](const std::string &utt, const std::vector<std::pair<double, int>> &accent_mix,
                  const std::vector<std::pair<double, int>> &speaker_mix, double noise) {
    Rng rng(DeriveSeed(cfg.seed, "embedding/" + utt));
    std::vector<float> acc(emb_dim, 0.0f), spk(emb_dim, 0.0f);
    for (int d = 0; d < emb_dim; ++d) {
      double va = noise * rng.Gaussian(), vs = noise * rng.Gaussian();
      for (auto [w, a] : accent_mix) va += w * accent_proto[a][d];
      for (auto [w, s] : speaker_mix) vs += w * speaker_proto[s][d];
      acc[d] = static_cast<float>(va);
      spk[d] = static_cast<float>(vs);
    }
    accent_lines += nlohmann::json{{"utt_id", utt}, {"vector", acc}}.dump() + "\n";
    speaker_lines += nlohmann::json{{"utt_id", utt}, {"vector", spk}}.dump() + "\n";
  };
  auto ppg = [&](const std::string &utt, const std::string &content_utt,
                 const std::vector<std::pair<double, int>> &accent_mix, double noise) {
    Rng rng(DeriveSeed(cfg.seed, "ppg/" + utt));
    WriteFeatureFile(dir / "ppg" / (utt + ".ftr"),
                     MakePpg(timeline_of.at(content_utt).classes, lex.phones.size(), rate,
                             accent_mix, noise, rng));
  };
  auto hyp = [&](const std::string &utt, const std::string &content_utt, double sub_rate) {
    Rng rng(DeriveSeed(cfg.seed, "hypothesis/" + utt));
    hyp_lines += nlohmann::json{{"utt_id", utt},
                                {"text", Hypothesis(lex, sentence_of.at(content_utt), sub_rate, rng)}}
                     .dump() +
                 "\n";
  };

  std::vector<size_t> sources, targets;
  for (size_t s = 0; s < speakers.size(); ++s) {
    if (speakers[s].split != Split::kTest) continue;
    if (speakers[s].accent == 0) targets.push_back(s);
    if (speakers[s].accent == (cfg.accents.size() > 1 ? 1 : 0)) sources.push_back(s);
  }
  std::vector<GeneratedRecord> generated, copies;
  for (size_t s = 0; s < speakers.size(); ++s) {
    if (speakers[s].split != Split::kTest) continue;
    const SpeakerInfo &spk = speakers[s];
    for (int i = 0; i < cfg.utterances_per_speaker; ++i) {
      std::string gt = fmt::format("{}_{:03d}", spk.id, i);
      emit(gt, {{1.0, spk.accent}}, {{1.0, static_cast<int>(s)}}, 0.1);
      ppg(gt, gt, {{1.0, spk.accent}}, 0.5);
      hyp(gt, gt, 0.02);
      std::string copy = fmt::format("copy_{}_{:03d}", spk.id, i);
      copies.push_back({copy, spk.id, spk.id, i});
      emit(copy, {{1.0, spk.accent}}, {{1.0, static_cast<int>(s)}}, 0.2);
      ppg(copy, gt, {{1.0, spk.accent}}, 0.6);
      hyp(copy, gt, 0.05);
    }
  }
  for (size_t src : sources)
    for (size_t tgt : targets) {
      if (src == tgt) continue;
      for (int i = 0; i < cfg.utterances_per_speaker; ++i) {
        std::string content = fmt::format("{}_{:03d}", speakers[src].id, i);
        std::string utt = fmt::format("gen_{}_{}_{:03d}", speakers[src].id, speakers[tgt].id, i);
        generated.push_back({utt, speakers[src].id, speakers[tgt].id, i});
        emit(utt, {{0.7, speakers[src].accent}, {0.3, speakers[tgt].accent}},
             {{0.3, static_cast<int>(src)}, {0.7, static_cast<int>(tgt)}}, 0.2);
        ppg(utt, content, {{0.7, speakers[src].accent}, {0.3, speakers[tgt].accent}}, 0.7);
        hyp(utt, content, 0.1);
      }
    }
  WriteGeneratedManifest(dir / "generated.jsonl", generated);
  WriteGeneratedManifest(dir / "copy_synthesis.jsonl", copies);
  WriteTextFile(dir / "accent_embeddings.jsonl", accent_lines);
  WriteTextFile(dir / "speaker_embeddings.jsonl", speaker_lines);
  WriteTextFile(dir / "hypotheses.jsonl", hyp_lines);
}

}  // namespace dsrt
