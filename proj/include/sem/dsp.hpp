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

#ifndef SEM_DSP_HPP_
#define SEM_DSP_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "sem/audio_io.hpp"
#include "sem/types.hpp"

namespace sem {

struct FeatureConfig {
  double window_length_ms = 25.0;
  double hop_ms = 10.0;
  int fft_size = 512;
  int num_channels = 40;
  int sample_rate_hz = 16000;
  double power_exponent = 1.0 / 15.0;

  int window_samples() const;
  int hop_samples() const;
  int num_bins() const { return fft_size / 2 + 1; }

  // Throws kInvalidConfig on any violated constraint.
  void validate() const;
};

// Triangular mel responses, one row per channel over DFT bins 0..K/2.
struct FilterbankMatrix {
  Matrix weights;
  Vector center_freqs_hz;

  int num_channels() const { return static_cast<int>(weights.rows()); }
};

// e[m, c]; row m is the energy vector of frame m.
struct EnergyMatrix {
  Matrix values;
  std::string utterance_id;

  Eigen::Index num_frames() const { return values.rows(); }
  Eigen::Index num_channels() const { return values.cols(); }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Symmetric Hamming window, 0.54 - 0.46 cos(2 pi n / (length - 1)).
Vector hamming_window(int length);

/// 1 + floor((n - window) / hop), or 0 when n < window.
std::size_t num_frames(std::size_t num_samples, int window, int hop);

/// Slices the waveform into frames of window_samples(); the trailing partial
/// frame is dropped. Row m holds samples [m * hop, m * hop + window).
Matrix frame_signal(const Waveform &wave, const FeatureConfig &cfg);

/// Squared DFT magnitudes at bins 0..K/2 of the frame zero-padded to K.
/// The transform is unscaled.
RowVector power_spectrum_impl(const double *frame, std::size_t length, int fft_size);

template <typename Derived>
RowVector power_spectrum(const Eigen::MatrixBase<Derived> &frame, int fft_size) {
  const Eigen::Matrix<double, Eigen::Dynamic, 1> copy =
      frame.derived().template cast<double>().reshaped();
  return power_spectrum_impl(copy.data(), static_cast<std::size_t>(copy.size()), fft_size);
}

FilterbankMatrix mel_filterbank(const FeatureConfig &cfg);

EnergyMatrix filterbank_energies(const Waveform &wave, const FeatureConfig &cfg);
EnergyMatrix filterbank_energies(const Waveform &wave, const FeatureConfig &cfg,
                                 const FilterbankMatrix &filterbank);

}  // namespace sem

#endif  // SEM_DSP_HPP_
