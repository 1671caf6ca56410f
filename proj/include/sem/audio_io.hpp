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

#ifndef SEM_AUDIO_IO_HPP_
#define SEM_AUDIO_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sem {

struct Waveform {
  std::vector<double> samples;  // amplitudes in [-1, 1)
  int sample_rate_hz = 16000;
  std::string utterance_id;

  std::size_t size() const { return samples.size(); }
};

/// Reads a RIFF/WAVE file holding 16-bit linear PCM, single channel.
/// Samples are the raw integers divided by 32768; the utterance id is the
/// file stem. Unknown chunks are skipped.
Waveform read_wav(const std::filesystem::path &path);

/// Parses an in-memory WAV image; `utterance_id` is attached verbatim.
Waveform parse_wav(const std::vector<std::uint8_t> &bytes,
                   std::string utterance_id);

/// Writes 16-bit mono PCM. Samples are scaled by 32768, rounded to nearest and
/// clamped to [-32768, 32767], so read_wav(write_wav(w)) is exact for any
/// waveform whose samples are multiples of 1/32768.
void write_wav(const std::filesystem::path &path, const Waveform &wave);
std::vector<std::uint8_t> encode_wav(const Waveform &wave);

enum class FixtureKind { kSine, kWhiteNoise, kChirp, kSilence };

FixtureKind parse_fixture_kind(std::string_view name);

struct FixtureParams {
  double frequency_hz = 440.0;   // sine frequency, chirp start
  double end_frequency_hz = 4000.0;  // chirp end
  double amplitude = 0.5;
};

/// Deterministic test signals. The output is a pure function of the
/// arguments; `seed` only affects white noise.
Waveform synth_fixture(FixtureKind kind, double duration_s, int sample_rate_hz,
                       std::uint64_t seed, const FixtureParams &params = {});

}  // namespace sem

#endif  // SEM_AUDIO_IO_HPP_
