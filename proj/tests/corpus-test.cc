// tests/corpus-test.cc

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
#include <cstring>
#include <limits>

#include <json.hpp>

#include "dsrt/corpus.h"
#include "dsrt/error.h"
#include "dsrt/io-util.h"
#include "test-util.h"

namespace dsrt {
namespace {

using nlohmann::json;
using testing::TempDir;

json Record(const std::string &utt, const std::string &spk, const std::string &region,
            const std::string &split, int index) {
  return {{"utt_id", utt},          {"speaker_id", spk},
          {"accent_region", region}, {"split", split},
          {"text", "Please call Stella."}, {"feature_path", "f/" + utt + ".ftr"},
          {"utterance_index", index}};
}

std::filesystem::path WriteLines(const TempDir &dir, const std::vector<json> &lines,
                                 const std::string &name = "manifest.jsonl") {
  std::string text;
  for (const json &j : lines) text += j.dump() + "\n";
  WriteTextFile(dir / name, text);
  return dir / name;
}

TEST_CASE("manifest with two SouthernEnglish train speakers") {
  TempDir dir("manifest");
  auto path = WriteLines(dir, {Record("p225_001", "p225", "SouthernEnglish", "train", 0),
                               Record("p226_001", "p226", "SouthernEnglish", "train", 0),
                               Record("p225_002", "p225", "SouthernEnglish", "train", 1)});
  Manifest m = LoadManifest(path);
  CHECK(m.Size() == 3);
  CHECK(m.Speakers() == std::vector<std::string>{"p225", "p226"});
  CHECK(m.Regions() == std::vector<std::string>{"SouthernEnglish"});
  CHECK(m.Warnings().empty());
  CHECK(m.FindBySpeakerIndex("p225", 1)->utt_id == "p225_002");
  CHECK(m.ResolvePath("f/x.ftr") == dir.path() / "f/x.ftr");
  CHECK(LoadManifest(path, "/data").ResolvePath("f/x.ftr") == std::filesystem::path("/data/f/x.ftr"));
  CHECK(CheckAgainstVctkPartition(m).empty());
}

TEST_CASE("manifest errors") {
  TempDir dir("manifest-errors");
  SUBCASE("empty file") {
    WriteTextFile(dir / "m.jsonl", "");
    CHECK_THROWS_WITH_AS(LoadManifest(dir / "m.jsonl"), doctest::Contains("empty manifest"),
                         DataError);
  }
  SUBCASE("speaker in train and test") {
    auto p = WriteLines(dir, {Record("a", "p225", "SouthernEnglish", "train", 0),
                              Record("b", "p225", "SouthernEnglish", "test", 1)});
    CHECK_THROWS_AS(LoadManifest(p), DataError);
  }
  SUBCASE("speaker in two accents") {
    auto p = WriteLines(dir, {Record("a", "p225", "SouthernEnglish", "train", 0),
                              Record("b", "p225", "Scottish", "train", 1)});
    CHECK_THROWS_AS(LoadManifest(p), DataError);
  }
  SUBCASE("duplicate utt_id") {
    auto p = WriteLines(dir, {Record("a", "p225", "SouthernEnglish", "train", 0),
                              Record("a", "p225", "SouthernEnglish", "train", 1)});
    CHECK_THROWS_WITH_AS(LoadManifest(p), doctest::Contains("a"), DataError);
  }
  SUBCASE("missing field") {
    json r = Record("a", "p225", "SouthernEnglish", "train", 0);
    r.erase("speaker_id");
    CHECK_THROWS_AS(LoadManifest(WriteLines(dir, {r})), DataError);
  }
  SUBCASE("unknown field") {
    json r = Record("a", "p225", "SouthernEnglish", "train", 0);
    r["speaker"] = "x";
    CHECK_THROWS_AS(LoadManifest(WriteLines(dir, {r})), DataError);
  }
  SUBCASE("negative index") {
    CHECK_THROWS_AS(LoadManifest(WriteLines(dir, {Record("a", "p225", "SouthernEnglish", "train", -1)})),
                    DataError);
  }
  SUBCASE("bad split") {
    CHECK_THROWS_AS(LoadManifest(WriteLines(dir, {Record("a", "p225", "SouthernEnglish", "dev", 0)})),
                    DataError);
  }
}

TEST_CASE("manifest warnings for index gaps and unknown regions") {
  TempDir dir("manifest-warn");
  auto p = WriteLines(dir, {Record("a", "s1", "Atlantis", "train", 0),
                            Record("b", "s1", "Atlantis", "train", 2)});
  Manifest m = LoadManifest(p);
  CHECK(m.Warnings().size() == 2);
}

TEST_CASE("manifest maps do not depend on record order") {
  std::vector<UtteranceRecord> recs;
  for (int s = 0; s < 4; ++s)
    for (int i = 0; i < 5; ++i) {
      UtteranceRecord r;
      r.utt_id = "s" + std::to_string(s) + "_" + std::to_string(i);
      r.speaker_id = "s" + std::to_string(s);
      r.accent_region = s % 2 ? "Scottish" : "Irish";
      r.split = s < 2 ? Split::kTrain : Split::kTest;
      r.feature_path = "x";
      r.utterance_index = i;
      recs.push_back(r);
    }
  Manifest a = Manifest::FromRecords(recs);
  Rng rng(3);
  rng.Shuffle(recs.begin(), recs.end());
  Manifest b = Manifest::FromRecords(recs);
  CHECK(a.SpeakerAccent() == b.SpeakerAccent());
  CHECK(a.SpeakerSplit() == b.SpeakerSplit());
  CHECK(a.FilterSplit(Split::kTest).Size() == 10);
}

TEST_CASE("VCTK partition lookup") {
  auto p225 = LookupVctkSpeaker("p225");
  REQUIRE(p225);
  CHECK(p225->accent_region == "SouthernEnglish");
  CHECK(p225->split == Split::kTrain);
  CHECK(LookupVctkSpeaker("p268")->split == Split::kTest);
  CHECK_FALSE(LookupVctkSpeaker("p999"));
  CHECK(KnownAccentRegions().size() == 13);
  UtteranceRecord r;
  r.utt_id = "u";
  r.speaker_id = "p225";
  r.accent_region = "Scottish";
  r.feature_path = "x";
  CHECK(CheckAgainstVctkPartition(Manifest::FromRecords({r})).size() == 1);
}

std::vector<unsigned char> Header(uint32_t t, uint32_t d, float rate) {
  ByteWriter w;
  w.Raw("FTR1", 4);
  w.U32(t);
  w.U32(d);
  w.F32(rate);
  return w.Take();
}

TEST_CASE("FTR decoding") {
  auto bytes = Header(2, 3, 50.0f);
  std::vector<unsigned char> full = bytes;
  ByteWriter payload;
  for (int i = 0; i < 6; ++i) payload.F32(static_cast<float>(i));
  auto p = payload.Take();
  full.insert(full.end(), p.begin(), p.end());
  FeatureSequence seq = DecodeFeatures(full);
  CHECK(seq.NumFrames() == 2);
  CHECK(seq.Dim() == 3);
  CHECK(seq.frames(1, 2) == 5.0f);
  CHECK(seq.frame_rate_hz == 50.0f);

  std::vector<unsigned char> short_payload(bytes);
  short_payload.insert(short_payload.end(), p.begin(), p.begin() + 20);
  CHECK_THROWS_WITH_AS(DecodeFeatures(short_payload), doctest::Contains("truncated"), DataError);

  std::vector<unsigned char> trailing(full);
  trailing.push_back(0);
  CHECK_THROWS_AS(DecodeFeatures(trailing), DataError);

  std::vector<unsigned char> magic(full);
  magic[0] = 'X';
  CHECK_THROWS_WITH_AS(DecodeFeatures(magic), doctest::Contains("magic"), DataError);

  std::vector<unsigned char> nan(full);
  float q = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(nan.data() + 16, &q, 4);
  CHECK_THROWS_AS(DecodeFeatures(nan), DataError);

  CHECK_THROWS_AS(DecodeFeatures(std::vector<unsigned char>(full.begin(), full.begin() + 10)),
                  DataError);
}

TEST_CASE("FTR round trip is bitwise") {
  TempDir dir("ftr");
  Rng rng(11);
  FeatureSequence seq{testing::RandomMatrix(rng, 7, 11), 49.5f};
  WriteFeatureFile(dir / "a.ftr", seq);
  auto bytes = ReadFileBytes(dir / "a.ftr");
  CHECK(bytes.size() == 16 + 7 * 11 * 4);
  FeatureSequence back = ReadFeatureFile(dir / "a.ftr");
  CHECK(back.frames == seq.frames);
  CHECK(back.frame_rate_hz == seq.frame_rate_hz);
  WriteFeatureFile(dir / "b.ftr", back);
  CHECK(ReadFileBytes(dir / "b.ftr") == bytes);
}

FeatureSequence Ramp(size_t t, float rate) {
  Matrix m(t, 1);
  for (size_t i = 0; i < t; ++i) m(i, 0) = static_cast<float>(i);
  return {m, rate};
}

TEST_CASE("segment slicing") {
  FeatureSequence seq = Ramp(100, 50.0f);
  Segment s{"u", "w", 0.0, 0.2};
  FeatureSequence a = SliceSegment(seq, s);
  CHECK(a.NumFrames() == 10);
  CHECK(a.frames(9, 0) == 9.0f);

  FeatureSequence end = SliceSegment(seq, Segment{"u", "w", 1.99, 2.00});
  CHECK(end.NumFrames() >= 1);
  CHECK(end.frames(end.NumFrames() - 1, 0) == 99.0f);

  FeatureSequence tiny = SliceSegment(seq, Segment{"u", "w", 0.004, 0.006});
  CHECK(tiny.NumFrames() == 1);
  CHECK(tiny.frames(0, 0) == 0.0f);

  CHECK_THROWS_AS(SliceSegment(seq, Segment{"u", "w", 2.5, 2.6}), DataError);
  CHECK_THROWS_AS(SliceSegment(seq, Segment{"u", "w", 1.0, 3.0}), DataError);
}

TEST_CASE("slice length is ceil(end*rate) - floor(start*rate)") {
  FeatureSequence seq = Ramp(200, 100.0f);
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    double start = rng.Unit() * 1.9, end = start + 0.001 + rng.Unit() * (1.99 - start);
    long want = static_cast<long>(std::ceil(end * 100.0) - std::floor(start * 100.0));
    size_t got = SliceSegment(seq, Segment{"u", "w", start, end}).NumFrames();
    CAPTURE(start);
    CAPTURE(end);
    if (want >= 1) CHECK(static_cast<long>(got) == want);
  }
}

TEST_CASE("transcript tokenization") {
  using V = std::vector<std::string>;
  CHECK(TokenizeTranscript("Please call Stella.") == V{"please", "call", "stella"});
  CHECK(TokenizeTranscript("Mr. Smith's dog") == V{"mr", "smith's", "dog"});
  CHECK(TokenizeTranscript("").empty());
  CHECK(TokenizeTranscript("  \"Hello,\"  world!  ") == V{"hello", "world"});
  CHECK(TokenizeTranscript("'quoted' don't") == V{"quoted", "don't"});
  CHECK(TokenizeTranscript("It\xE2\x80\x99s") == V{"it's"});
  CHECK(TokenizeTranscript("-- ...") == V{});
}

TEST_CASE("alignment parsing") {
  std::string phones =
      "0\t0.1\tsil\n0.1\t0.2\tb\n0.2\t0.3\tih\n0.3\t0.4\tt\n0.4\t0.5\tsp\n0.5\t0.6\tk\n";
  auto segs = ParseAlignment(phones, "u", Tier::kPhone);
  REQUIRE(segs.size() == 4);
  CHECK(segs[0].label == "b");
  CHECK(*segs[0].prev_label == "#");
  CHECK(*segs[0].next_label == "ih");
  CHECK(*segs[1].prev_label == "b");
  CHECK(*segs[1].next_label == "t");
  CHECK(*segs[2].next_label == "#");
  CHECK(*segs[3].prev_label == "#");
  CHECK(*segs[3].next_label == "#");

  auto words = ParseAlignment("0\t0.3\tWater,\n0.3\t0.4\tsil\n0.4\t0.9\tMr.\n", "u", Tier::kWord);
  REQUIRE(words.size() == 2);
  CHECK(words[0].label == "water");
  CHECK(words[1].label == "mr");

  CHECK_THROWS_AS(ParseAlignment("0.2\t0.1\tb\n", "u", Tier::kPhone), DataError);
  CHECK_THROWS_AS(ParseAlignment("0.5\t0.6\tb\n0.1\t0.2\tc\n", "u", Tier::kPhone), DataError);
  CHECK_THROWS_AS(ParseAlignment("0\tx\tb\n", "u", Tier::kPhone), DataError);
}

TEST_CASE("embedding tables") {
  TempDir dir("emb");
  WriteTextFile(dir / "e.jsonl",
                "{\"utt_id\": \"a\", \"vector\": [1, 2]}\n{\"utt_id\": \"b\", \"vector\": [3, 4]}\n");
  EmbeddingTable t = EmbeddingTable::Load(dir / "e.jsonl");
  CHECK(t.Size() == 2);
  CHECK(t.Dim() == 2);
  CHECK((*t.Find("b"))[1] == 4.0f);
  CHECK(t.Find("c") == nullptr);

  WriteTextFile(dir / "dup.jsonl",
                "{\"utt_id\": \"a\", \"vector\": [1, 2]}\n{\"utt_id\": \"a\", \"vector\": [3, 4]}\n");
  CHECK_THROWS_AS(EmbeddingTable::Load(dir / "dup.jsonl"), DataError);
  WriteTextFile(dir / "dim.jsonl",
                "{\"utt_id\": \"a\", \"vector\": [1, 2]}\n{\"utt_id\": \"b\", \"vector\": [3]}\n");
  CHECK_THROWS_AS(EmbeddingTable::Load(dir / "dim.jsonl"), DataError);

  std::filesystem::create_directories(dir / "ftr");
  WriteFeatureFile(dir / "ftr" / "a.ftr", FeatureSequence{Matrix(1, 3, {1, 2, 3}), 1.0f});
  EmbeddingTable f = EmbeddingTable::Load(dir / "ftr");
  CHECK(f.Dim() == 3);
  CHECK((*f.Find("a"))[2] == 3.0f);
}

TEST_CASE("posteriorgram validation") {
  CHECK_NOTHROW(ValidatePpg(FeatureSequence{Matrix(2, 2, {0.5f, 0.5f, 1.0f, 0.0f}), 100.0f}));
  CHECK_NOTHROW(ValidatePpg(FeatureSequence{Matrix(1, 2, {0.50004f, 0.5f}), 100.0f}));
  CHECK_THROWS_AS(ValidatePpg(FeatureSequence{Matrix(1, 2, {0.6f, 0.5f}), 100.0f}), DataError);
  CHECK_THROWS_AS(ValidatePpg(FeatureSequence{Matrix(1, 2, {1.1f, -0.1f}), 100.0f}), DataError);

  TempDir dir("ppg");
  PpgStore store(dir.path());
  CHECK_FALSE(store.Has("x"));
  WriteFeatureFile(dir / "x.ftr", FeatureSequence{Matrix(1, 2, {0.7f, 0.4f}), 100.0f});
  CHECK(store.Has("x"));
  CHECK_THROWS_AS(store.Read("x"), DataError);
}

TEST_CASE("transcript files") {
  TempDir dir("tx");
  WriteTextFile(dir / "h.jsonl", "{\"utt_id\": \"a\", \"text\": \"hi there\"}\n");
  CHECK(LoadTranscripts(dir / "h.jsonl").at("a") == "hi there");
  WriteTextFile(dir / "d.jsonl",
                "{\"utt_id\": \"a\", \"text\": \"x\"}\n{\"utt_id\": \"a\", \"text\": \"y\"}\n");
  CHECK_THROWS_AS(LoadTranscripts(dir / "d.jsonl"), DataError);
}

}  // namespace
}  // namespace dsrt
