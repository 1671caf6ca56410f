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

#include "sem/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <mutex>
#include <thread>

#include "sem/error.hpp"
#include "sem/features.hpp"
#include "sem/formats.hpp"
#include "sem/masking.hpp"

namespace fs = std::filesystem;

namespace sem {

std::vector<fs::path> list_wavs(const fs::path &dir) {
  std::vector<fs::path> out;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".wav") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path &a, const fs::path &b) { return a.filename() < b.filename(); });
  return out;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> &fn) {
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

namespace {

// Shared front half of every batch command: validates the directory and
// returns its WAVs, or an exit code.
std::optional<int> gather_inputs(const fs::path &dir, std::vector<fs::path> &wavs,
                                 std::ostream &log) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    log << "error: input directory " << dir << " does not exist\n";
    return kExitUsage;
  }
  wavs = list_wavs(dir);
  if (wavs.empty()) {
    log << "error: no input files\n";
    return kExitUsage;
  }
  return std::nullopt;
}

bool prepare_output_dir(const fs::path &dir, std::ostream &log) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    log << "error: cannot create output directory " << dir << ": " << ec.message() << "\n";
    return false;
  }
  return true;
}

bool validate_config(const FeatureConfig &cfg, std::ostream &log) {
  try {
    cfg.validate();
    mel_filterbank(cfg);
  } catch (const Error &e) {
    log << "error: " << e.what() << "\n";
    return false;
  }
  return true;
}

// Per-file error messages, printed in input order once the pool drains.
struct FileErrors {
  explicit FileErrors(std::size_t n) : messages(n) {}

  void record(std::size_t i, const fs::path &path, const std::exception &e) {
    messages[i] = path.filename().string() + ": " + e.what();
  }
  int flush(std::ostream &log) const {
    int failures = 0;
    for (const auto &m : messages) {
      if (m.empty()) continue;
      log << "error: " << m << "\n";
      ++failures;
    }
    return failures;
  }

  std::vector<std::string> messages;
};

}  // namespace

int cmd_featurize(const FeaturizeOptions &opts, std::ostream &log) {
  std::vector<fs::path> wavs;
  if (auto code = gather_inputs(opts.in_dir, wavs, log)) return *code;
  if (!validate_config(opts.config, log)) return kExitUsage;
  if (!prepare_output_dir(opts.out_dir, log)) return kExitUsage;

  const FilterbankMatrix filterbank = mel_filterbank(opts.config);
  std::vector<StatsAccumulator> partial(wavs.size());
  FileErrors errors(wavs.size());

  parallel_for(wavs.size(), opts.jobs, [&](std::size_t i) {
    try {
      const Waveform wave = read_wav(wavs[i]);
      const FeatureMatrix x =
          power_mel(filterbank_energies(wave, opts.config, filterbank), opts.config.power_exponent);
      write_feature_file(opts.out_dir / (wave.utterance_id + kFeatureExtension), x.values);
      partial[i].add(x);
    } catch (const std::exception &e) {
      errors.record(i, wavs[i], e);
    }
  });

  const int failures = errors.flush(log);
  // Merge in sorted input order so the stats bytes never depend on scheduling.
  StatsAccumulator total;
  for (const auto &acc : partial) total.merge(acc);
  if (total.count() == 0) {
    log << "error: no utterance could be processed\n";
    return kExitPartialFailure;
  }
  try {
    write_stats_file(opts.out_dir / kStatsFileName, total.finalize());
  } catch (const Error &e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  log << "featurized " << wavs.size() - static_cast<std::size_t>(failures) << " of "
      << wavs.size() << " files, " << total.count() << " frames\n";
  return failures > 0 ? kExitPartialFailure : kExitOk;
}

MaskMode parse_mask_mode(std::string_view name) {
  if (name == "sem") return MaskMode::kSem;
  if (name == "fixed") return MaskMode::kFixed;
  if (name == "dropout") return MaskMode::kDropout;
  if (name == "none") return MaskMode::kNone;
  throw Error(ErrorCode::kInvalidConfig, "unknown mask mode '" + std::string(name) + "'");
}

namespace {

std::optional<std::string> check_mask_flags(const MaskOptions &o) {
  const bool sem = o.mode == MaskMode::kSem;
  const bool fixed = o.mode == MaskMode::kFixed;
  const bool dropout = o.mode == MaskMode::kDropout;
  if ((o.eta_a || o.eta_b) && !sem) return "--eta-a/--eta-b require --mode sem";
  if (o.eta_th && !fixed) return "--eta-th requires --mode fixed";
  if (o.rate && !dropout) return "--rate requires --mode dropout";
  if (fixed && !o.eta_th) return "--mode fixed requires --eta-th";
  if (dropout && !o.rate) return "--mode dropout requires --rate";
  return std::nullopt;
}

struct ManifestRow {
  std::string utterance_id;
  std::string eta_th, e_th, masked_fraction, scaling_r;
  bool fallback = false;
};

std::string encode_manifest(std::vector<ManifestRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const ManifestRow &a, const ManifestRow &b) { return a.utterance_id < b.utterance_id; });
  std::string out = "utterance_id,eta_th,e_th,masked_fraction,scaling_r,fallback\n";
  for (const auto &r : rows) {
    out += r.utterance_id + "," + r.eta_th + "," + r.e_th + "," + r.masked_fraction + "," +
           r.scaling_r + "," + (r.fallback ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace

int cmd_mask(const MaskOptions &opts, std::ostream &log) {
  if (auto problem = check_mask_flags(opts)) {
    log << "error: " << *problem << "\n";
    return kExitUsage;
  }
  SemConfig sem_cfg{opts.eta_a.value_or(-80.0), opts.eta_b.value_or(0.0), opts.seed};
  try {
    if (opts.mode == MaskMode::kSem) sem_cfg.validate();
    if (opts.rate && !(*opts.rate >= 0.0 && *opts.rate < 1.0))
      throw Error(ErrorCode::kInvalidRate, "dropout rate must lie in [0, 1)");
  } catch (const Error &e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  GlobalStats stats;
  try {
    stats = read_stats_file(opts.stats_path);
  } catch (const Error &e) {
    log << "error: cannot load stats: " << e.what() << "\n";
    return kExitUsage;
  }
  if (stats.num_channels() != opts.config.num_channels) {
    log << "error: stats file has " << stats.num_channels() << " channels, config has "
        << opts.config.num_channels << "\n";
    return kExitUsage;
  }

  std::vector<fs::path> wavs;
  if (auto code = gather_inputs(opts.in_dir, wavs, log)) return *code;
  if (!validate_config(opts.config, log)) return kExitUsage;
  if (!prepare_output_dir(opts.out_dir, log)) return kExitUsage;

  const FilterbankMatrix filterbank = mel_filterbank(opts.config);
  std::vector<std::optional<ManifestRow>> rows(wavs.size());
  FileErrors errors(wavs.size());

  parallel_for(wavs.size(), opts.jobs, [&](std::size_t i) {
    try {
      const Waveform wave = read_wav(wavs[i]);
      const EnergyMatrix e = filterbank_energies(wave, opts.config, filterbank);
      const FeatureMatrix x = power_mel(e, opts.config.power_exponent);
      ManifestRow row;
      row.utterance_id = wave.utterance_id;
      FeatureMatrix out;

      switch (opts.mode) {
        case MaskMode::kNone:
          out = normalize(x, stats);
          break;
        case MaskMode::kSem:
        case MaskMode::kFixed: {
          const SemOutcome sem = opts.mode == MaskMode::kSem
                                     ? apply_sem(x, e, stats, sem_cfg)
                                     : apply_fixed_sem(x, e, stats, *opts.eta_th);
          out = sem.features;
          row.eta_th = format_g9(sem.mask.eta_th_used);
          row.e_th = format_g9(sem.mask.e_th_used);
          row.masked_fraction = format_g9(sem.mask.masked_fraction());
          row.scaling_r = format_g9(sem.scaling_r);
          row.fallback = sem.fallback_applied;
          break;
        }
        case MaskMode::kDropout: {
          const FeatureMatrix normalized = normalize(x, stats);
          out = input_dropout(normalized, *opts.rate, opts.seed, wave.utterance_id);
          const BinaryMatrix keep = dropout_keep_mask(x.values.rows(), x.values.cols(),
                                                      *opts.rate, opts.seed, wave.utterance_id);
          const double dropped =
              static_cast<double>(keep.size() - keep.cast<std::int64_t>().sum()) /
              static_cast<double>(keep.size());
          row.masked_fraction = format_g9(dropped);
          row.scaling_r = format_g9(1.0 / (1.0 - *opts.rate));
          break;
        }
      }
      write_feature_file(opts.out_dir / (wave.utterance_id + kFeatureExtension), out.values);
      rows[i] = std::move(row);
    } catch (const std::exception &e) {
      errors.record(i, wavs[i], e);
    }
  });

  const int failures = errors.flush(log);
  std::vector<ManifestRow> done;
  for (auto &r : rows)
    if (r) done.push_back(std::move(*r));
  try {
    write_text_file(opts.out_dir / kManifestFileName, encode_manifest(std::move(done)));
  } catch (const Error &e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  log << "masked " << wavs.size() - static_cast<std::size_t>(failures) << " of " << wavs.size()
      << " files\n";
  return failures > 0 ? kExitPartialFailure : kExitOk;
}

int cmd_stats(const StatsOptions &opts, std::ostream &log) {
  std::vector<fs::path> wavs;
  if (auto code = gather_inputs(opts.in_dir, wavs, log)) return *code;
  if (!validate_config(opts.config, log)) return kExitUsage;

  std::vector<EtaHistogram> partial;
  try {
    partial.assign(wavs.size(), EtaHistogram(opts.range));
  } catch (const Error &e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const FilterbankMatrix filterbank = mel_filterbank(opts.config);
  FileErrors errors(wavs.size());
  parallel_for(wavs.size(), opts.jobs, [&](std::size_t i) {
    try {
      partial[i].add(filterbank_energies(read_wav(wavs[i]), opts.config, filterbank));
    } catch (const std::exception &e) {
      errors.record(i, wavs[i], e);
    }
  });
  const int failures = errors.flush(log);

  EtaHistogram total(opts.range);
  for (const auto &h : partial) total.merge(h);
  if (total.total() == 0) {
    log << "error: empty corpus\n";
    return kExitUsage;
  }
  const EtaDistribution dist = total.finalize();
  try {
    if (opts.out_csv.has_parent_path()) fs::create_directories(opts.out_csv.parent_path());
    write_text_file(opts.out_csv, encode_distribution_csv(dist));
  } catch (const std::exception &e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  log << "counted " << dist.total_bins_counted << " bins from " << wavs.size() << " files ("
      << dist.underflow << " below range, " << dist.overflow << " above, "
      << dist.skipped_utterances << " silent files skipped)\n";
  return failures > 0 ? kExitPartialFailure : kExitOk;
}

int cmd_render(const RenderOptions &opts, std::ostream &log) {
  try {
    const Waveform wave = read_wav(opts.in_wav);
    const EnergyMatrix e = filterbank_energies(wave, opts.config);
    const FeatureMatrix x = power_mel(e, opts.config.power_exponent);
    std::optional<BinaryMatrix> mask;
    if (opts.eta_th) {
      const double peak = peak_energy(e.values);
      if (peak > 0.0) mask = binary_mask(e.values, energy_threshold(peak, *opts.eta_th));
    }
    write_file_bytes(opts.out_pgm,
                     encode_pgm(render_spectrogram(x.values, mask ? &*mask : nullptr)));
  } catch (const std::exception &e) {
    log << "error: " << e.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

int cmd_synth(const SynthOptions &opts, std::ostream &log) {
  try {
    Waveform wave =
        synth_fixture(opts.kind, opts.duration_s, opts.sample_rate_hz, opts.seed, opts.params);
    write_wav(opts.out_wav, wave);
  } catch (const std::exception &e) {
    log << "error: " << e.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

}  // namespace sem
