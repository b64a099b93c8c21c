// tools/dsrt-synth.cc

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
#include <iostream>

#include "dsrt/error.h"
#include "dsrt/synth.h"

int main(int argc, char *argv[]) {
  CLI::App app{"Writes a synthetic two-accent corpus with known structure."};
  app.name("dsrt-synth");
  dsrt::SynthConfig cfg;
  std::string dir;
  app.add_option("dir", dir, "output directory")->required();
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--speakers-per-accent", cfg.speakers_per_accent, "speakers per accent");
  app.add_option("--utterances", cfg.utterances_per_speaker, "utterances per speaker");
  app.add_option("--dim", cfg.dim, "feature dimension");
  app.add_option("--accent-offset", cfg.accent_offset, "accent offset norm, in noise sigmas");
  app.add_option("--speaker-offset", cfg.speaker_offset, "speaker offset std, in noise sigmas");
  bool no_metrics = false;
  app.add_flag("--no-metric-inputs", no_metrics, "skip embeddings, PPGs and hypotheses");
  CLI11_PARSE(app, argc, argv);
  cfg.with_metric_inputs = !no_metrics;
  try {
    dsrt::WriteSyntheticCorpus(dir, cfg);
  } catch (const dsrt::ConfigError &e) {
    std::cerr << "dsrt-synth: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "dsrt-synth: error: " << e.what() << "\n";
    return 2;
  }
  std::cout << "synthetic corpus written to " << dir << "\n";
  return 0;
}
