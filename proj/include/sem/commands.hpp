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

#ifndef SEM_COMMANDS_HPP_
#define SEM_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sem/audio_io.hpp"
#include "sem/dsp.hpp"
#include "sem/stats.hpp"

namespace sem {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char *kStatsFileName = "global_stats.txt";
inline constexpr const char *kManifestFileName = "manifest.csv";
inline constexpr const char *kFeatureExtension = ".fmx";

/// *.wav files directly inside `dir`, sorted by file name.
std::vector<std::filesystem::path> list_wavs(const std::filesystem::path &dir);

/// Runs fn(0) .. fn(n - 1) on up to `jobs` threads (0 means one per core).
/// Exceptions escaping fn are rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> &fn);

struct FeaturizeOptions {
  std::filesystem::path in_dir;
  std::filesystem::path out_dir;
  FeatureConfig config;
  int jobs = 0;
};

/// One FMX1 file of raw power-mel features per WAV plus the corpus stats file.
int cmd_featurize(const FeaturizeOptions &opts, std::ostream &log);

enum class MaskMode { kSem, kFixed, kDropout, kNone };

MaskMode parse_mask_mode(std::string_view name);

struct MaskOptions {
  std::filesystem::path in_dir;  // WAV inputs; features and energies are recomputed
  std::filesystem::path stats_path;
  std::filesystem::path out_dir;
  MaskMode mode = MaskMode::kSem;
  std::optional<double> eta_a;   // sem only
  std::optional<double> eta_b;   // sem only
  std::optional<double> eta_th;  // fixed only, required
  std::optional<double> rate;    // dropout only, required
  std::uint64_t seed = 0;
  FeatureConfig config;
  int jobs = 0;
};

/// Normalized (and optionally masked) FMX1 files plus manifest.csv with
/// columns utterance_id,eta_th,e_th,masked_fraction,scaling_r,fallback.
int cmd_mask(const MaskOptions &opts, std::ostream &log);

struct StatsOptions {
  std::filesystem::path in_dir;  // WAV inputs
  std::filesystem::path out_csv;
  HistogramRange range;
  FeatureConfig config;
  int jobs = 0;
};

int cmd_stats(const StatsOptions &opts, std::ostream &log);

struct RenderOptions {
  std::filesystem::path in_wav;
  std::filesystem::path out_pgm;
  std::optional<double> eta_th;  // unset renders without masking
  FeatureConfig config;
};

int cmd_render(const RenderOptions &opts, std::ostream &log);

struct SynthOptions {
  FixtureKind kind = FixtureKind::kSine;
  double duration_s = 1.0;
  int sample_rate_hz = 16000;
  std::uint64_t seed = 0;
  FixtureParams params;
  std::filesystem::path out_wav;
};

int cmd_synth(const SynthOptions &opts, std::ostream &log);

}  // namespace sem

#endif  // SEM_COMMANDS_HPP_
