// Copyright 2026  The sem-augment Authors
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

// semtool: batch front end for small-energy-masking feature augmentation.
//
//   semtool featurize --in wavs/ --out feats/
//   semtool mask --in wavs/ --stats feats/global_stats.txt --mode sem --seed 7 --out masked/
//   semtool stats --in wavs/ --out eta.csv
//   semtool render --in a.wav --eta-th -20 --out a.pgm
//   semtool synth --kind chirp --duration 1 --out chirp.wav

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sem/commands.hpp"
#include "sem/error.hpp"

namespace {

void add_feature_flags(CLI::App *cmd, sem::FeatureConfig &cfg) {
  cmd->add_option("--window-ms", cfg.window_length_ms, "analysis window length")
      ->capture_default_str();
  cmd->add_option("--hop-ms", cfg.hop_ms, "frame period")->capture_default_str();
  cmd->add_option("--fft-size", cfg.fft_size, "FFT size (power of two)")->capture_default_str();
  cmd->add_option("--num-channels", cfg.num_channels, "mel channels")->capture_default_str();
  cmd->add_option("--sample-rate", cfg.sample_rate_hz, "expected input sample rate")
      ->capture_default_str();
  cmd->add_option("--power-exponent", cfg.power_exponent, "power-law exponent")
      ->capture_default_str();
}

template <typename T>
void optional_flag(CLI::App *cmd, const std::string &name, std::optional<T> &target,
                   const std::string &help) {
  cmd->add_option_function<T>(name, [&target](const T &v) { target = v; }, help);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Small-energy masking of mel filterbank features"};
  app.require_subcommand(1);

  sem::FeaturizeOptions featurize;
  auto *feat_cmd = app.add_subcommand("featurize", "WAV directory -> FMX1 power-mel features + stats");
  feat_cmd->add_option("--in", featurize.in_dir, "input WAV directory")->required();
  feat_cmd->add_option("--out", featurize.out_dir, "output directory")->required();
  feat_cmd->add_option("--jobs", featurize.jobs, "worker threads (0 = all cores)");
  add_feature_flags(feat_cmd, featurize.config);

  sem::MaskOptions mask;
  std::string mode = "sem";
  auto *mask_cmd = app.add_subcommand("mask", "normalize and mask features");
  mask_cmd->add_option("--in", mask.in_dir, "input WAV directory")->required();
  mask_cmd->add_option("--stats", mask.stats_path, "stats file from featurize")->required();
  mask_cmd->add_option("--out", mask.out_dir, "output directory")->required();
  mask_cmd->add_option("--mode", mode, "sem | fixed | dropout | none")
      ->check(CLI::IsMember({"sem", "fixed", "dropout", "none"}))
      ->capture_default_str();
  optional_flag(mask_cmd, "--eta-a", mask.eta_a, "lower threshold bound in dB (sem, default -80)");
  optional_flag(mask_cmd, "--eta-b", mask.eta_b, "upper threshold bound in dB (sem, default 0)");
  optional_flag(mask_cmd, "--eta-th", mask.eta_th, "fixed threshold in dB (fixed)");
  optional_flag(mask_cmd, "--rate", mask.rate, "dropout rate (dropout)");
  mask_cmd->add_option("--seed", mask.seed, "global seed")->capture_default_str();
  mask_cmd->add_option("--jobs", mask.jobs, "worker threads (0 = all cores)");
  add_feature_flags(mask_cmd, mask.config);

  sem::StatsOptions stats;
  auto *stats_cmd = app.add_subcommand("stats", "eta distribution and energy ratio as CSV");
  stats_cmd->add_option("--in", stats.in_dir, "input WAV directory")->required();
  stats_cmd->add_option("--out", stats.out_csv, "output CSV")->required();
  stats_cmd->add_option("--bin-width", stats.range.bin_width_db, "bin width in dB")
      ->capture_default_str();
  stats_cmd->add_option("--lo", stats.range.lo_db, "lowest bin edge in dB")->capture_default_str();
  stats_cmd->add_option("--hi", stats.range.hi_db, "highest bin edge in dB")->capture_default_str();
  stats_cmd->add_option("--jobs", stats.jobs, "worker threads (0 = all cores)");
  add_feature_flags(stats_cmd, stats.config);

  sem::RenderOptions render;
  auto *render_cmd = app.add_subcommand("render", "power-mel spectrogram as binary PGM");
  render_cmd->add_option("--in", render.in_wav, "input WAV")->required();
  render_cmd->add_option("--out", render.out_pgm, "output PGM")->required();
  optional_flag(render_cmd, "--eta-th", render.eta_th, "mask bins below this dB threshold");
  add_feature_flags(render_cmd, render.config);

  sem::SynthOptions synth;
  std::string kind = "sine";
  auto *synth_cmd = app.add_subcommand("synth", "write a deterministic fixture WAV");
  synth_cmd->add_option("--kind", kind, "sine | white_noise | chirp | silence")
      ->check(CLI::IsMember({"sine", "white_noise", "chirp", "silence"}))
      ->capture_default_str();
  synth_cmd->add_option("--duration", synth.duration_s, "seconds")->capture_default_str();
  synth_cmd->add_option("--sample-rate", synth.sample_rate_hz)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--frequency", synth.params.frequency_hz, "sine / chirp start frequency")
      ->capture_default_str();
  synth_cmd->add_option("--end-frequency", synth.params.end_frequency_hz, "chirp end frequency")
      ->capture_default_str();
  synth_cmd->add_option("--amplitude", synth.params.amplitude)->capture_default_str();
  synth_cmd->add_option("--out", synth.out_wav, "output WAV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sem::kExitUsage;
  }

  if (*feat_cmd) return sem::cmd_featurize(featurize, std::cerr);
  if (*mask_cmd) {
    mask.mode = sem::parse_mask_mode(mode);
    return sem::cmd_mask(mask, std::cerr);
  }
  if (*stats_cmd) return sem::cmd_stats(stats, std::cerr);
  if (*render_cmd) return sem::cmd_render(render, std::cerr);
  if (*synth_cmd) {
    synth.kind = sem::parse_fixture_kind(kind);
    return sem::cmd_synth(synth, std::cerr);
  }
  return sem::kExitUsage;
}
