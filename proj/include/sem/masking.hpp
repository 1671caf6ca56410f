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

#ifndef SEM_MASKING_HPP_
#define SEM_MASKING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sem/dsp.hpp"
#include "sem/error.hpp"
#include "sem/features.hpp"
#include "sem/types.hpp"

namespace sem {

inline constexpr double kEtaFloorEnergy = 1e-30;
inline constexpr double kScalingDenominatorFloor = 1e-12;

/// Index of the nearest-rank 95th percentile among n sorted values,
/// ceil(0.95 n) - 1, in exact integer arithmetic.
constexpr std::size_t peak_rank_index(std::size_t n) {
  return (95 * n + 99) / 100 - 1;
}

/// Per-utterance peak energy: nearest-rank 95th percentile of all entries.
template <typename Derived>
typename Derived::Scalar peak_energy(const Eigen::MatrixBase<Derived> &energies) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<std::size_t>(energies.size());
  if (n == 0) throw Error(ErrorCode::kEmptyMatrix, "peak of an empty matrix");
  std::vector<Scalar> values(n);
  Eigen::Map<MatrixX<Scalar>>(values.data(), energies.rows(), energies.cols()) = energies;
  const auto nth = values.begin() + static_cast<std::ptrdiff_t>(peak_rank_index(n));
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

inline double peak_energy(const EnergyMatrix &e) { return peak_energy(e.values); }

/// Energy relative to the peak in dB; energies are floored at 1e-30 so the
/// result stays finite.
double eta(double energy, double e_peak);

/// e_peak * 10^(eta_th / 10).
double energy_threshold(double e_peak, double eta_th_db);

/// 1 where energy >= e_th, 0 where energy < e_th.
template <typename Derived>
BinaryMatrix binary_mask(const Eigen::MatrixBase<Derived> &energies,
                         typename Derived::Scalar e_th) {
  return (energies.array() >= e_th).template cast<std::uint8_t>();
}

struct MaskMatrix {
  BinaryMatrix values;
  double eta_th_used = 0.0;
  double e_th_used = 0.0;

  std::int64_t num_masked() const {
    return static_cast<std::int64_t>(values.size()) - values.template cast<std::int64_t>().sum();
  }
  double masked_fraction() const {
    return values.size() == 0 ? 0.0
                              : static_cast<double>(num_masked()) / static_cast<double>(values.size());
  }
};

MaskMatrix binary_mask(const EnergyMatrix &e, double e_th);

struct SemConfig {
  double eta_a = -80.0;
  double eta_b = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One draw of the dB threshold from U[eta_a, eta_b), taken from the
/// utterance's keyed stream so the result depends only on (seed, id).
double sample_threshold(const SemConfig &cfg, std::string_view utterance_id);

/// sum(x) / sum(x * mask) over the utterance; nullopt when the masked sum is
/// below 1e-12.
std::optional<double> try_scaling_coefficient(const FeatureMatrix &x_raw,
                                              const MaskMatrix &mask);

/// As try_scaling_coefficient, throwing kAllMaskedSignal instead of nullopt.
double scaling_coefficient(const FeatureMatrix &x_raw, const MaskMatrix &mask);

struct SemOutcome {
  FeatureMatrix features;  // stage kFinal
  MaskMatrix mask;
  double scaling_r = 1.0;
  bool fallback_applied = false;
};

// Full masking procedure for one utterance:
//   eta_th ~ U[eta_a, eta_b), e_th = peak * 10^(eta_th / 10),
//   mu = [e >= e_th], r = sum(x_raw) / sum(mu * x_raw),
//   out = r * mu * (x_raw - mean) / std.
// The coefficient r comes from the raw, nonnegative features. If every bin is
// masked, or the utterance has zero peak energy, the mask falls back to all
// ones with r = 1 and fallback_applied set.
SemOutcome apply_sem(const FeatureMatrix &x_raw, const EnergyMatrix &e,
                     const GlobalStats &stats, const SemConfig &cfg);

/// apply_sem with the random draw replaced by a constant dB threshold.
SemOutcome apply_fixed_sem(const FeatureMatrix &x_raw, const EnergyMatrix &e,
                           const GlobalStats &stats, double eta_th_db);

/// Keep-mask of inverted dropout: each element is kept with probability
/// 1 - rate, drawn in row-major order from the utterance's keyed stream.
BinaryMatrix dropout_keep_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                               std::uint64_t seed, std::string_view utterance_id);

/// Zeroes elements with probability `rate` and scales survivors by
/// 1 / (1 - rate). Throws kInvalidRate unless 0 <= rate < 1.
FeatureMatrix input_dropout(const FeatureMatrix &x, double rate, std::uint64_t seed,
                            std::string_view utterance_id);

}  // namespace sem

#endif  // SEM_MASKING_HPP_
