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

#ifndef SEM_FEATURES_HPP_
#define SEM_FEATURES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "sem/dsp.hpp"
#include "sem/types.hpp"

namespace sem {

enum class FeatureStage { kRawPowerMel, kMeanSubtracted, kFinal };

std::string_view to_string(FeatureStage stage);

struct FeatureMatrix {
  Matrix values;
  std::string utterance_id;
  FeatureStage stage = FeatureStage::kRawPowerMel;

  Eigen::Index num_frames() const { return values.rows(); }
  Eigen::Index num_channels() const { return values.cols(); }
};

inline constexpr double kStdFloor = 1e-8;

struct GlobalStats {
  Vector mean;
  Vector std;  // population estimator, floored at kStdFloor
  std::int64_t num_frames_seen = 0;

  Eigen::Index num_channels() const { return mean.size(); }
};

/// Elementwise e^exponent as an Eigen expression.
template <typename Derived>
auto power_law(const Eigen::MatrixBase<Derived> &energies, double exponent) {
  return energies.array().pow(exponent).matrix();
}

/// x[m, c] = e[m, c]^exponent. Throws kInvalidConfig for exponent <= 0.
FeatureMatrix power_mel(const EnergyMatrix &e, double exponent = 1.0 / 15.0);

// Per-channel running mean and squared-deviation sum. Each added utterance is
// reduced in two passes over its own frames and folded in with the
// pairwise update of Chan et al., so accumulators from different workers can
// be merged in any grouping.
class StatsAccumulator {
 public:
  StatsAccumulator() = default;
  explicit StatsAccumulator(Eigen::Index num_channels);

  void add(const Eigen::Ref<const Matrix> &frames);
  void add(const FeatureMatrix &x) { add(x.values); }
  void merge(const StatsAccumulator &other);

  std::int64_t count() const { return count_; }
  Eigen::Index num_channels() const { return mean_.size(); }

  // Throws kEmptyCorpus when no frame has been added.
  GlobalStats finalize() const;

 private:
  std::int64_t count_ = 0;
  Vector mean_;
  Vector m2_;
};

GlobalStats compute_global_stats(std::span<const FeatureMatrix> corpus);

/// x[m, c] - mean[c]. Throws kShapeMismatch on channel-count mismatch.
FeatureMatrix subtract_mean(const FeatureMatrix &x, const GlobalStats &stats);

/// x[m, c] / std[c]. Zeros stay zero. Throws kShapeMismatch.
FeatureMatrix divide_std(const FeatureMatrix &x, const GlobalStats &stats);

/// (x - mean) / std in one step.
FeatureMatrix normalize(const FeatureMatrix &x, const GlobalStats &stats);

}  // namespace sem

#endif  // SEM_FEATURES_HPP_
