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

#include "sem/dsp.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "sem/error.hpp"

namespace sem {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Reuses one FFT plan and scratch buffers across the frames of an utterance.
class SpectrumAnalyzer {
 public:
  explicit SpectrumAnalyzer(int fft_size)
      : fft_size_(fft_size), input_(static_cast<std::size_t>(fft_size), 0.0) {}

  void compute(const double *frame, std::size_t length, double *out) {
    std::fill(input_.begin(), input_.end(), 0.0);
    std::copy(frame, frame + length, input_.begin());
    fft_.fwd(spectrum_, input_);
    for (int k = 0; k <= fft_size_ / 2; ++k) out[k] = std::norm(spectrum_[static_cast<std::size_t>(k)]);
  }

 private:
  int fft_size_;
  Eigen::FFT<double> fft_;
  std::vector<double> input_;
  std::vector<std::complex<double>> spectrum_;
};

}  // namespace

int FeatureConfig::window_samples() const {
  return static_cast<int>(std::lround(window_length_ms * sample_rate_hz / 1000.0));
}

int FeatureConfig::hop_samples() const {
  return static_cast<int>(std::lround(hop_ms * sample_rate_hz / 1000.0));
}

void FeatureConfig::validate() const {
  auto fail = [](const std::string &msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (sample_rate_hz <= 0) fail("sample rate must be positive");
  if (!(window_length_ms > 0.0) || !(hop_ms > 0.0)) fail("window and hop must be positive");
  if (hop_ms > window_length_ms) fail("hop longer than window");
  if (window_samples() < 2) fail("window shorter than two samples");
  if (hop_samples() < 1) fail("hop shorter than one sample");
  if (!is_power_of_two(fft_size)) fail("FFT size must be a power of two");
  if (fft_size < window_samples()) fail("FFT size smaller than the window");
  if (num_channels <= 0 || num_channels > fft_size / 2)
    fail("channel count must lie in [1, K/2]");
  if (!(power_exponent > 0.0)) fail("power exponent must be positive");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Vector hamming_window(int length) {
  if (length < 2)
    throw Error(ErrorCode::kLengthTooSmall, "Hamming window needs at least 2 points");
  Vector w(length);
  const double denom = length - 1;
  for (int n = 0; n < length; ++n)
    w(n) = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / denom);
  // Force exact symmetry; cos() is not guaranteed to be symmetric to the ulp.
  for (int n = 0; n < length / 2; ++n) w(length - 1 - n) = w(n);
  return w;
}

std::size_t num_frames(std::size_t num_samples, int window, int hop) {
  const auto l = static_cast<std::size_t>(window);
  if (num_samples < l) return 0;
  return 1 + (num_samples - l) / static_cast<std::size_t>(hop);
}

Matrix frame_signal(const Waveform &wave, const FeatureConfig &cfg) {
  cfg.validate();
  const int window = cfg.window_samples();
  const int hop = cfg.hop_samples();
  const std::size_t frames = num_frames(wave.size(), window, hop);
  if (frames == 0)
    throw Error(ErrorCode::kTooShort,
                wave.utterance_id + ": " + std::to_string(wave.size()) +
                    " samples, need at least " + std::to_string(window));
  Matrix out(static_cast<Eigen::Index>(frames), window);
  for (std::size_t m = 0; m < frames; ++m) {
    out.row(static_cast<Eigen::Index>(m)) =
        Eigen::Map<const RowVector>(wave.samples.data() + m * static_cast<std::size_t>(hop), window);
  }
  return out;
}

RowVector power_spectrum_impl(const double *frame, std::size_t length, int fft_size) {
  if (!is_power_of_two(fft_size))
    throw Error(ErrorCode::kInvalidConfig, "FFT size must be a power of two");
  if (length > static_cast<std::size_t>(fft_size))
    throw Error(ErrorCode::kFrameTooLong,
                std::to_string(length) + " samples exceed FFT size " + std::to_string(fft_size));
  RowVector out(fft_size / 2 + 1);
  SpectrumAnalyzer(fft_size).compute(frame, length, out.data());
  return out;
}

FilterbankMatrix mel_filterbank(const FeatureConfig &cfg) {
  cfg.validate();
  const int channels = cfg.num_channels;
  const int bins = cfg.num_bins();
  const double nyquist = 0.5 * cfg.sample_rate_hz;
  const double bin_hz = static_cast<double>(cfg.sample_rate_hz) / cfg.fft_size;
  const double mel_max = hz_to_mel(nyquist);

  // channels + 2 equally spaced mel points; point 0 is 0 Hz, the last Nyquist.
  std::vector<double> mel_points(static_cast<std::size_t>(channels) + 2);
  for (std::size_t i = 0; i < mel_points.size(); ++i)
    mel_points[i] = mel_max * static_cast<double>(i) / (channels + 1);

  FilterbankMatrix fb;
  fb.weights = Matrix::Zero(channels, bins);
  fb.center_freqs_hz.resize(channels);

  long previous_center_bin = -1;
  for (int c = 0; c < channels; ++c) {
    const double left = mel_points[static_cast<std::size_t>(c)];
    const double center = mel_points[static_cast<std::size_t>(c) + 1];
    const double right = mel_points[static_cast<std::size_t>(c) + 2];
    fb.center_freqs_hz(c) = mel_to_hz(center);

    const long center_bin = std::lround(fb.center_freqs_hz(c) / bin_hz);
    if (center_bin == previous_center_bin)
      throw Error(ErrorCode::kTooManyChannels,
                  "channels " + std::to_string(c - 1) + " and " + std::to_string(c) +
                      " share DFT bin " + std::to_string(center_bin));
    previous_center_bin = center_bin;

    for (int k = 0; k < bins; ++k) {
      const double mel = hz_to_mel(k * bin_hz);
      if (mel > left && mel <= center)
        fb.weights(c, k) = (mel - left) / (center - left);
      else if (mel > center && mel < right)
        fb.weights(c, k) = (right - mel) / (right - center);
    }
    const double peak = fb.weights.row(c).maxCoeff();
    if (!(peak > 0.0))
      throw Error(ErrorCode::kTooManyChannels,
                  "channel " + std::to_string(c) + " covers no DFT bin");
    fb.weights.row(c) /= peak;
  }
  return fb;
}

EnergyMatrix filterbank_energies(const Waveform &wave, const FeatureConfig &cfg) {
  return filterbank_energies(wave, cfg, mel_filterbank(cfg));
}

EnergyMatrix filterbank_energies(const Waveform &wave, const FeatureConfig &cfg,
                                 const FilterbankMatrix &filterbank) {
  if (wave.sample_rate_hz != cfg.sample_rate_hz)
    throw Error(ErrorCode::kSampleRateMismatch,
                wave.utterance_id + ": " + std::to_string(wave.sample_rate_hz) +
                    " Hz, expected " + std::to_string(cfg.sample_rate_hz) + " Hz");
  if (filterbank.weights.cols() != cfg.num_bins())
    throw Error(ErrorCode::kShapeMismatch, "filterbank does not match FFT size");

  Matrix frames = frame_signal(wave, cfg);
  frames.array().rowwise() *= hamming_window(cfg.window_samples()).transpose().array();

  Matrix power(frames.rows(), cfg.num_bins());
  SpectrumAnalyzer analyzer(cfg.fft_size);
  for (Eigen::Index m = 0; m < frames.rows(); ++m)
    analyzer.compute(frames.row(m).data(), static_cast<std::size_t>(frames.cols()),
                     power.row(m).data());

  EnergyMatrix e;
  e.utterance_id = wave.utterance_id;
  e.values.noalias() = power * filterbank.weights.transpose();
  return e;
}

}  // namespace sem
