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

#include "sem/formats.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "sem/error.hpp"

namespace sem {

namespace {

void put_le(std::vector<std::uint8_t> &out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(const std::uint8_t *p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw Error(ErrorCode::kMalformedHeader, "bad number '" + std::string(token) + "'");
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_feature_file(const MatrixX<float> &values) {
  if (values.rows() > 0xffffffffLL || values.cols() > 0xffffffffLL)
    throw Error(ErrorCode::kInvalidConfig, "matrix too large for FMX1");
  std::vector<std::uint8_t> out;
  out.reserve(kFeatureHeaderBytes + 4 * static_cast<std::size_t>(values.size()));
  out.insert(out.end(), {'F', 'M', 'X', '1'});
  put_le(out, kFeatureFileVersion, 2);
  put_le(out, static_cast<std::uint64_t>(values.rows()), 4);
  put_le(out, static_cast<std::uint64_t>(values.cols()), 4);
  for (Eigen::Index i = 0; i < values.size(); ++i)
    put_le(out, std::bit_cast<std::uint32_t>(values.data()[i]), 4);
  return out;
}

MatrixX<float> decode_feature_file(const std::vector<std::uint8_t> &bytes) {
  if (bytes.size() < kFeatureHeaderBytes || std::memcmp(bytes.data(), "FMX1", 4) != 0)
    throw Error(ErrorCode::kMalformedHeader, "missing FMX1 magic");
  const auto version = get_le(bytes.data() + 4, 2);
  if (version != kFeatureFileVersion)
    throw Error(ErrorCode::kUnsupportedFormat, "FMX1 version " + std::to_string(version));
  const auto frames = get_le(bytes.data() + 6, 4);
  const auto channels = get_le(bytes.data() + 10, 4);
  if (bytes.size() - kFeatureHeaderBytes != 4 * frames * channels)
    throw Error(ErrorCode::kMalformedHeader, "FMX1 payload length does not match header");
  MatrixX<float> values(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(channels));
  const std::uint8_t *p = bytes.data() + kFeatureHeaderBytes;
  for (Eigen::Index i = 0; i < values.size(); ++i, p += 4)
    values.data()[i] = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(p, 4)));
  return values;
}

void write_feature_file(const std::filesystem::path &path, const MatrixX<float> &values) {
  write_file_bytes(path, encode_feature_file(values));
}

MatrixX<float> read_feature_file(const std::filesystem::path &path) {
  return decode_feature_file(read_file_bytes(path));
}

std::string encode_stats_file(const GlobalStats &stats) {
  if (stats.mean.size() != stats.std.size())
    throw Error(ErrorCode::kShapeMismatch, "mean and std lengths differ");
  std::string out = "SEMSTATS v1 C=" + std::to_string(stats.mean.size()) +
                    " N=" + std::to_string(stats.num_frames_seen) + "\n";
  for (Eigen::Index c = 0; c < stats.mean.size(); ++c) {
    if (!(stats.std(c) > 0.0))
      throw Error(ErrorCode::kInvalidConfig, "std must be strictly positive");
    out += std::to_string(c) + " " + shortest(stats.mean(c)) + " " + shortest(stats.std(c)) + "\n";
  }
  return out;
}

GlobalStats decode_stats_file(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::kMalformedHeader, "empty stats file");
  long long channels = -1;
  long long frames = -1;
  char tail = 0;
  if (std::sscanf(line.c_str(), "SEMSTATS v1 C=%lld N=%lld%c", &channels, &frames, &tail) != 2 ||
      channels < 0 || frames < 0)
    throw Error(ErrorCode::kMalformedHeader, "bad stats header '" + line + "'");

  GlobalStats stats;
  stats.num_frames_seen = frames;
  stats.mean.resize(channels);
  stats.std.resize(channels);
  for (long long c = 0; c < channels; ++c) {
    if (!std::getline(in, line))
      throw Error(ErrorCode::kMalformedHeader, "stats file ends at channel " + std::to_string(c));
    std::istringstream fields(line);
    std::string index, mean, std;
    std::string extra;
    if (!(fields >> index >> mean >> std) || (fields >> extra) || index != std::to_string(c))
      throw Error(ErrorCode::kMalformedHeader, "bad stats line '" + line + "'");
    stats.mean(c) = parse_double(mean);
    stats.std(c) = parse_double(std);
    if (!(stats.std(c) > 0.0) || !std::isfinite(stats.std(c)))
      throw Error(ErrorCode::kMalformedHeader, "non-positive std on channel " + std::to_string(c));
  }
  if (std::getline(in, line) && !line.empty())
    throw Error(ErrorCode::kMalformedHeader, "trailing data after channel lines");
  return stats;
}

void write_stats_file(const std::filesystem::path &path, const GlobalStats &stats) {
  write_text_file(path, encode_stats_file(stats));
}

GlobalStats read_stats_file(const std::filesystem::path &path) {
  const auto bytes = read_file_bytes(path);
  return decode_stats_file(std::string(bytes.begin(), bytes.end()));
}

std::string format_g9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string encode_distribution_csv(const EtaDistribution &dist) {
  std::string out = "eta_db,pdf,cdf,energy_ratio\n";
  for (std::size_t i = 0; i < dist.num_bins(); ++i) {
    out += format_g9(dist.bin_edges[i]) + "," + format_g9(dist.pdf[i]) + "," +
           format_g9(dist.cdf[i]) + "," + format_g9(dist.energy_ratio[i]) + "\n";
  }
  return out;
}

MatrixX<std::uint8_t> render_spectrogram(const Matrix &features, const BinaryMatrix *mask) {
  if (mask && (mask->rows() != features.rows() || mask->cols() != features.cols()))
    throw Error(ErrorCode::kShapeMismatch, "mask shape differs from features");
  const Eigen::Index frames = features.rows();
  const Eigen::Index channels = features.cols();
  MatrixX<std::uint8_t> image = MatrixX<std::uint8_t>::Zero(channels, frames);
  if (features.size() == 0) return image;

  const double lo = features.minCoeff();
  const double span = features.maxCoeff() - lo;
  for (Eigen::Index m = 0; m < frames; ++m) {
    for (Eigen::Index c = 0; c < channels; ++c) {
      if (mask && (*mask)(m, c) == 0) continue;
      const double level = span > 0.0 ? (features(m, c) - lo) / span : 0.0;
      image(channels - 1 - c, m) = static_cast<std::uint8_t>(std::lround(255.0 * level));
    }
  }
  return image;
}

std::vector<std::uint8_t> encode_pgm(const MatrixX<std::uint8_t> &image) {
  const std::string header = "P5\n" + std::to_string(image.cols()) + " " +
                             std::to_string(image.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.data(), image.data() + image.size());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path &path, const std::vector<std::uint8_t> &bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
  write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace sem
