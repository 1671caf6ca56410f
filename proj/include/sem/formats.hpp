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

#ifndef SEM_FORMATS_HPP_
#define SEM_FORMATS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sem/features.hpp"
#include "sem/stats.hpp"
#include "sem/types.hpp"

namespace sem {

// FMX1 feature file, all fields little-endian:
//   "FMX1" | u16 version = 1 | u32 frames | u32 channels | frames*channels f32
// Payload is frame-major.
inline constexpr std::uint16_t kFeatureFileVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 14;

std::vector<std::uint8_t> encode_feature_file(const MatrixX<float> &values);
MatrixX<float> decode_feature_file(const std::vector<std::uint8_t> &bytes);

void write_feature_file(const std::filesystem::path &path, const MatrixX<float> &values);
MatrixX<float> read_feature_file(const std::filesystem::path &path);

template <typename Derived>
void write_feature_file(const std::filesystem::path &path,
                        const Eigen::MatrixBase<Derived> &values) {
  write_feature_file(path, MatrixX<float>(values.template cast<float>()));
}

// Stats file: "SEMSTATS v1 C=<channels> N=<frames>" followed by one
// "<c> <mean> <std>" line per channel. Numbers use the shortest decimal form
// that reads back to the same double.
std::string encode_stats_file(const GlobalStats &stats);
GlobalStats decode_stats_file(const std::string &text);

void write_stats_file(const std::filesystem::path &path, const GlobalStats &stats);
GlobalStats read_stats_file(const std::filesystem::path &path);

/// printf("%.9g"), the number format of every CSV this project writes.
std::string format_g9(double value);

/// CSV with header "eta_db,pdf,cdf,energy_ratio"; eta_db is the lower edge of
/// each bin.
std::string encode_distribution_csv(const EtaDistribution &dist);

/// Grayscale spectrogram, one column per frame and one row per channel with
/// channel 0 on the bottom row. Values are min-max scaled to 0..255 over the
/// whole matrix; bins where `mask` is 0 are drawn black.
MatrixX<std::uint8_t> render_spectrogram(const Matrix &features,
                                         const BinaryMatrix *mask = nullptr);

/// Binary PGM (P5, maxval 255).
std::vector<std::uint8_t> encode_pgm(const MatrixX<std::uint8_t> &image);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path);
void write_file_bytes(const std::filesystem::path &path, const std::vector<std::uint8_t> &bytes);
void write_text_file(const std::filesystem::path &path, const std::string &text);

}  // namespace sem

#endif  // SEM_FORMATS_HPP_
