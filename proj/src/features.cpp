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

#include "sem/features.hpp"

#include <algorithm>
#include <cmath>

#include "sem/error.hpp"

namespace sem {

std::string_view to_string(FeatureStage stage) {
  switch (stage) {
    case FeatureStage::kRawPowerMel: return "raw_power_mel";
    case FeatureStage::kMeanSubtracted: return "mean_subtracted";
    case FeatureStage::kFinal: return "final";
  }
  return "unknown";
}

FeatureMatrix power_mel(const EnergyMatrix &e, double exponent) {
  if (!(exponent > 0.0))
    throw Error(ErrorCode::kInvalidConfig, "power exponent must be positive");
  FeatureMatrix x;
  x.utterance_id = e.utterance_id;
  x.stage = FeatureStage::kRawPowerMel;
  x.values = power_law(e.values, exponent);
  return x;
}

StatsAccumulator::StatsAccumulator(Eigen::Index num_channels)
    : mean_(Vector::Zero(num_channels)), m2_(Vector::Zero(num_channels)) {}

void StatsAccumulator::add(const Eigen::Ref<const Matrix> &frames) {
  if (frames.rows() == 0) return;
  if (count_ == 0 && mean_.size() == 0) {
    mean_ = Vector::Zero(frames.cols());
    m2_ = Vector::Zero(frames.cols());
  }
  if (frames.cols() != mean_.size())
    throw Error(ErrorCode::kShapeMismatch,
                "expected " + std::to_string(mean_.size()) + " channels, got " +
                    std::to_string(frames.cols()));

  StatsAccumulator batch;
  batch.count_ = frames.rows();
  batch.mean_ = frames.colwise().mean().transpose();
  batch.m2_ = (frames.rowwise() - batch.mean_.transpose()).colwise().squaredNorm().transpose();
  merge(batch);
}

void StatsAccumulator::merge(const StatsAccumulator &other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    if (mean_.size() != 0 && mean_.size() != other.mean_.size())
      throw Error(ErrorCode::kShapeMismatch, "accumulator channel counts differ");
    *this = other;
    return;
  }
  if (other.mean_.size() != mean_.size())
    throw Error(ErrorCode::kShapeMismatch, "accumulator channel counts differ");

  const double n_a = static_cast<double>(count_);
  const double n_b = static_cast<double>(other.count_);
  const double n = n_a + n_b;
  const Vector delta = other.mean_ - mean_;
  mean_ += delta * (n_b / n);
  m2_ += other.m2_ + delta.cwiseAbs2() * (n_a * n_b / n);
  count_ += other.count_;
}

GlobalStats StatsAccumulator::finalize() const {
  if (count_ == 0) throw Error(ErrorCode::kEmptyCorpus, "no frames accumulated");
  GlobalStats stats;
  stats.mean = mean_;
  stats.std = (m2_ / static_cast<double>(count_)).cwiseSqrt().cwiseMax(kStdFloor);
  stats.num_frames_seen = count_;
  return stats;
}

GlobalStats compute_global_stats(std::span<const FeatureMatrix> corpus) {
  StatsAccumulator acc;
  for (const auto &x : corpus) acc.add(x);
  return acc.finalize();
}

namespace {

void check_channels(const FeatureMatrix &x, const GlobalStats &stats) {
  if (x.num_channels() != stats.mean.size() || x.num_channels() != stats.std.size())
    throw Error(ErrorCode::kShapeMismatch,
                x.utterance_id + ": " + std::to_string(x.num_channels()) +
                    " channels, stats have " + std::to_string(stats.mean.size()));
}

}  // namespace

FeatureMatrix subtract_mean(const FeatureMatrix &x, const GlobalStats &stats) {
  check_channels(x, stats);
  FeatureMatrix out{x.values.rowwise() - stats.mean.transpose(), x.utterance_id,
                    FeatureStage::kMeanSubtracted};
  return out;
}

FeatureMatrix divide_std(const FeatureMatrix &x, const GlobalStats &stats) {
  check_channels(x, stats);
  FeatureMatrix out{x.values.array().rowwise() / stats.std.transpose().array(),
                    x.utterance_id, FeatureStage::kFinal};
  return out;
}

FeatureMatrix normalize(const FeatureMatrix &x, const GlobalStats &stats) {
  return divide_std(subtract_mean(x, stats), stats);
}

}  // namespace sem
