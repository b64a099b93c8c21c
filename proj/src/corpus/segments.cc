// src/corpus/segments.cc

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
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dsrt/corpus.h"
#include "dsrt/error.h"

namespace dsrt {

namespace {

// Tolerance, in frames, absorbing binary rounding of times like 0.07 * 100.
constexpr double kFrameSlack = 1e-6;
// Adjacent intervals closer than this (seconds) count as contiguous.
constexpr double kContiguity = 1e-6;

bool IsWordChar(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<std::string> TokenizeTranscript(std::string_view text) {
  // Typographic apostrophe (U+2019) behaves like '.
  std::string normalized;
  normalized.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0x99) {
      normalized.push_back('\'');
      i += 2;
    } else {
      normalized.push_back(text[i]);
    }
  }

  std::vector<std::string> tokens;
  std::istringstream in(normalized);
  std::string raw;
  while (in >> raw) {
    std::string kept;
    for (unsigned char c : raw) {
      if (IsWordChar(c)) {
        kept.push_back(static_cast<char>(std::tolower(c)));
      } else if (c == '\'') {
        if (!kept.empty() && kept.back() != '\'') kept.push_back('\'');
      }
    }
    while (!kept.empty() && kept.back() == '\'') kept.pop_back();
    if (!kept.empty()) tokens.push_back(std::move(kept));
  }
  return tokens;
}

bool IsSilenceLabel(std::string_view label) {
  return label.empty() || label == "sil" || label == "sp" || label == "spn" ||
         label == "<eps>" || label == "SIL";
}

std::vector<Segment> ParseAlignment(std::string_view text, const std::string &utt_id, Tier tier,
                                    const std::string &what) {
  struct Interval {
    double start, end;
    std::string label;
  };
  std::vector<Interval> intervals;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t1 == std::string::npos)
      throw DataError(what + ":" + std::to_string(line_no) + ": expected start<TAB>end<TAB>label");
    Interval iv;
    try {
      size_t used = 0;
      std::string start_str = line.substr(0, t1);
      iv.start = std::stod(start_str, &used);
      if (used != start_str.size()) throw std::invalid_argument("start");
      std::string end_str = line.substr(t1 + 1, t2 == std::string::npos ? t2 : t2 - t1 - 1);
      iv.end = std::stod(end_str, &used);
      if (used != end_str.size()) throw std::invalid_argument("end");
    } catch (const std::exception &) {
      throw DataError(what + ":" + std::to_string(line_no) + ": malformed time value");
    }
    iv.label = t2 == std::string::npos ? std::string() : Trim(line.substr(t2 + 1));
    if (!(iv.start >= 0.0) || !(iv.end > iv.start))
      throw DataError(what + ":" + std::to_string(line_no) + ": need 0 <= start < end");
    if (!intervals.empty() && iv.start < intervals.back().start)
      throw DataError(what + ":" + std::to_string(line_no) + ": intervals not sorted by start");
    intervals.push_back(std::move(iv));
  }

  std::vector<Segment> segments;
  for (size_t i = 0; i < intervals.size(); ++i) {
    const Interval &iv = intervals[i];
    if (IsSilenceLabel(iv.label)) continue;
    Segment seg;
    seg.utt_id = utt_id;
    seg.start_s = iv.start;
    seg.end_s = iv.end;
    if (tier == Tier::kWord) {
      auto toks = TokenizeTranscript(iv.label);
      if (toks.empty()) continue;
      std::string joined = toks[0];
      for (size_t k = 1; k < toks.size(); ++k) joined += " " + toks[k];
      seg.label = std::move(joined);
    } else {
      seg.label = iv.label;
      bool prev_ok = i > 0 && !IsSilenceLabel(intervals[i - 1].label) &&
                     std::abs(intervals[i - 1].end - iv.start) < kContiguity;
      bool next_ok = i + 1 < intervals.size() && !IsSilenceLabel(intervals[i + 1].label) &&
                     std::abs(intervals[i + 1].start - iv.end) < kContiguity;
      seg.prev_label = prev_ok ? intervals[i - 1].label : std::string(kBoundaryLabel);
      seg.next_label = next_ok ? intervals[i + 1].label : std::string(kBoundaryLabel);
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

std::vector<Segment> ReadAlignmentFile(const std::filesystem::path &path,
                                       const std::string &utt_id, Tier tier) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open alignment file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseAlignment(buf.str(), utt_id, tier, path.string());
}

std::pair<size_t, size_t> SegmentFrameRange(const FeatureSequence &seq, const Segment &seg) {
  const double rate = seq.frame_rate_hz;
  const size_t num_frames = seq.NumFrames();
  const double duration = seq.DurationSeconds();
  if (!(seg.start_s >= 0.0) || !(seg.end_s > seg.start_s))
    throw DataError("segment '" + seg.label + "' of " + seg.utt_id + " has invalid times");
  // One frame of slack: aligners and feature extractors often disagree on
  // the final partial frame.
  if (seg.end_s > duration + 1.0 / rate + 1e-9)
    throw DataError("segment '" + seg.label + "' [" + std::to_string(seg.start_s) + ", " +
                    std::to_string(seg.end_s) + ") lies outside utterance " + seg.utt_id +
                    " of duration " + std::to_string(duration) + " s");
  auto first = static_cast<size_t>(std::floor(seg.start_s * rate + kFrameSlack));
  auto last = static_cast<size_t>(std::max(0.0, std::ceil(seg.end_s * rate - kFrameSlack)));
  if (first >= num_frames)
    throw DataError("segment '" + seg.label + "' of " + seg.utt_id + " starts after the last frame");
  last = std::min(last, num_frames);
  if (last <= first) last = first + 1;
  return {first, last};
}

FeatureSequence SliceSegment(const FeatureSequence &seq, const Segment &seg) {
  auto [first, last] = SegmentFrameRange(seq, seg);
  return {seq.frames.RowRange(first, last), seq.frame_rate_hz};
}

}  // namespace dsrt
