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

#include "sem/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

#include "sem/error.hpp"
#include "sem/random.hpp"

namespace sem {

namespace {

std::uint32_t read_u32(const std::uint8_t *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const std::uint8_t *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t> &out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t> &out, const char *tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

Waveform parse_wav(const std::vector<std::uint8_t> &bytes,
                   std::string utterance_id) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(ErrorCode::kMalformedHeader, "not a RIFF/WAVE file");

  bool have_fmt = false;
  int sample_rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t *chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body)
      throw Error(ErrorCode::kMalformedHeader, "chunk runs past end of file");

    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error(ErrorCode::kMalformedHeader, "fmt chunk too small");
      const std::uint16_t format = read_u16(bytes.data() + body);
      const std::uint16_t channels = read_u16(bytes.data() + body + 2);
      const std::uint32_t rate = read_u32(bytes.data() + body + 4);
      const std::uint16_t bits = read_u16(bytes.data() + body + 14);
      if (format != 1)
        throw Error(ErrorCode::kUnsupportedFormat,
                    "audio format " + std::to_string(format) + " is not linear PCM");
      if (channels != 1)
        throw Error(ErrorCode::kUnsupportedFormat,
                    std::to_string(channels) + " channels, expected mono");
      if (bits != 16)
        throw Error(ErrorCode::kUnsupportedFormat,
                    std::to_string(bits) + "-bit samples, expected 16-bit");
      if (rate == 0 || rate > 0x7fffffffU)
        throw Error(ErrorCode::kMalformedHeader, "invalid sample rate");
      sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt)
        throw Error(ErrorCode::kMalformedHeader, "data chunk before fmt chunk");
      if (size % 2 != 0)
        throw Error(ErrorCode::kMalformedHeader, "odd data chunk size");
      if (size == 0) throw Error(ErrorCode::kEmptyAudio, "no samples");
      Waveform wave;
      wave.sample_rate_hz = sample_rate;
      wave.utterance_id = std::move(utterance_id);
      wave.samples.resize(size / 2);
      for (std::size_t i = 0; i < wave.samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(read_u16(bytes.data() + body + 2 * i));
        wave.samples[i] = static_cast<double>(raw) / 32768.0;
      }
      return wave;
    }
    // Chunks are word aligned.
    pos = body + size + (size & 1U);
  }
  throw Error(ErrorCode::kMalformedHeader,
              have_fmt ? "missing data chunk" : "missing fmt chunk");
}

Waveform read_wav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_wav(bytes, path.stem().string());
}

std::vector<std::uint8_t> encode_wav(const Waveform &wave) {
  if (wave.sample_rate_hz <= 0)
    throw Error(ErrorCode::kInvalidConfig, "sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(2 * wave.samples.size());
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate_hz) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : wave.samples) {
    const double scaled = std::clamp(std::nearbyint(s * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

void write_wav(const std::filesystem::path &path, const Waveform &wave) {
  const auto bytes = encode_wav(wave);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

FixtureKind parse_fixture_kind(std::string_view name) {
  if (name == "sine") return FixtureKind::kSine;
  if (name == "white_noise") return FixtureKind::kWhiteNoise;
  if (name == "chirp") return FixtureKind::kChirp;
  if (name == "silence") return FixtureKind::kSilence;
  throw Error(ErrorCode::kInvalidConfig, "unknown fixture kind '" + std::string(name) + "'");
}

Waveform synth_fixture(FixtureKind kind, double duration_s, int sample_rate_hz,
                       std::uint64_t seed, const FixtureParams &params) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    throw Error(ErrorCode::kInvalidDuration, "duration must be positive");
  if (sample_rate_hz <= 0)
    throw Error(ErrorCode::kInvalidConfig, "sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  if (n == 0)
    throw Error(ErrorCode::kInvalidDuration, "duration shorter than one sample");

  Waveform wave;
  wave.sample_rate_hz = sample_rate_hz;
  wave.samples.assign(n, 0.0);
  const double fs = sample_rate_hz;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  switch (kind) {
    case FixtureKind::kSilence:
      break;
    case FixtureKind::kSine:
      for (std::size_t i = 0; i < n; ++i)
        wave.samples[i] = params.amplitude * std::sin(kTwoPi * params.frequency_hz * i / fs);
      break;
    case FixtureKind::kChirp: {
      const double duration = n / fs;
      const double sweep = (params.end_frequency_hz - params.frequency_hz) / duration;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = i / fs;
        wave.samples[i] = params.amplitude *
                          std::sin(kTwoPi * (params.frequency_hz * t + 0.5 * sweep * t * t));
      }
      break;
    }
    case FixtureKind::kWhiteNoise: {
      Rng rng(mix64(seed));
      for (auto &s : wave.samples) s = params.amplitude * (2.0 * uniform01(rng) - 1.0);
      break;
    }
  }
  return wave;
}

}  // namespace sem
