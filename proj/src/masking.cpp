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

#include "sem/masking.hpp"

#include <cmath>

#include "sem/random.hpp"

namespace sem {

double eta(double energy, double e_peak) {
  if (!(e_peak > 0.0))
    throw Error(ErrorCode::kNonPositivePeak, "peak energy must be positive");
  return 10.0 * std::log10(std::max(energy, kEtaFloorEnergy) / e_peak);
}

double energy_threshold(double e_peak, double eta_th_db) {
  if (!(e_peak > 0.0))
    throw Error(ErrorCode::kNonPositivePeak, "peak energy must be positive");
  return e_peak * std::pow(10.0, eta_th_db / 10.0);
}

MaskMatrix binary_mask(const EnergyMatrix &e, double e_th) {
  if (e_th < 0.0) throw Error(ErrorCode::kInvalidConfig, "energy threshold must be >= 0");
  MaskMatrix mask;
  mask.values = binary_mask(e.values, e_th);
  mask.e_th_used = e_th;
  return mask;
}

void SemConfig::validate() const {
  if (!std::isfinite(eta_a) || !std::isfinite(eta_b) || !(eta_a < eta_b))
    throw Error(ErrorCode::kInvalidConfig, "need finite eta_a < eta_b");
}

double sample_threshold(const SemConfig &cfg, std::string_view utterance_id) {
  cfg.validate();
  Rng rng = utterance_rng(cfg.seed, utterance_id);
  const double draw = cfg.eta_a + (cfg.eta_b - cfg.eta_a) * uniform01(rng);
  // a + (b - a) u can round up to b for u close to 1.
  return draw < cfg.eta_b ? draw : std::nextafter(cfg.eta_b, cfg.eta_a);
}

std::optional<double> try_scaling_coefficient(const FeatureMatrix &x_raw,
                                              const MaskMatrix &mask) {
  if (x_raw.values.rows() != mask.values.rows() || x_raw.values.cols() != mask.values.cols())
    throw Error(ErrorCode::kShapeMismatch, x_raw.utterance_id + ": mask shape differs");
  // total = kept + removed, so r >= 1 holds in floating point as well.
  const auto keep = mask.values.array() != 0;
  const double kept = keep.select(x_raw.values.array(), 0.0).sum();
  const double removed = keep.select(0.0, x_raw.values.array()).sum();
  const double total = kept + removed;
  if (kept < kScalingDenominatorFloor) return std::nullopt;
  return total / kept;
}

double scaling_coefficient(const FeatureMatrix &x_raw, const MaskMatrix &mask) {
  if (auto r = try_scaling_coefficient(x_raw, mask)) return *r;
  throw Error(ErrorCode::kAllMaskedSignal, x_raw.utterance_id + ": masked sum vanishes");
}

namespace {

SemOutcome mask_with_threshold(const FeatureMatrix &x_raw, const EnergyMatrix &e,
                               const GlobalStats &stats, double eta_th) {
  if (x_raw.values.rows() != e.values.rows() || x_raw.values.cols() != e.values.cols())
    throw Error(ErrorCode::kShapeMismatch,
                x_raw.utterance_id + ": features and energies differ in shape");
  // Normalization checks the stats' channel count.
  const FeatureMatrix centered = subtract_mean(x_raw, stats);

  SemOutcome out;
  const double e_peak = peak_energy(e.values);
  std::optional<double> r;
  if (e_peak > 0.0) {
    out.mask = binary_mask(e, energy_threshold(e_peak, eta_th));
    r = try_scaling_coefficient(x_raw, out.mask);
  }
  out.mask.eta_th_used = eta_th;
  if (!r) {
    out.mask.values = BinaryMatrix::Ones(e.values.rows(), e.values.cols());
    out.mask.e_th_used = 0.0;
    out.fallback_applied = true;
    r = 1.0;
  }
  out.scaling_r = *r;

  // select() rather than a product so masked bins are +0.0, not -0.0.
  FeatureMatrix scaled{(out.mask.values.array() != 0)
                           .select(centered.values.array() * out.scaling_r, 0.0)
                           .matrix(),
                       x_raw.utterance_id, FeatureStage::kMeanSubtracted};
  out.features = divide_std(scaled, stats);
  return out;
}

}  // namespace

SemOutcome apply_sem(const FeatureMatrix &x_raw, const EnergyMatrix &e,
                     const GlobalStats &stats, const SemConfig &cfg) {
  return mask_with_threshold(x_raw, e, stats, sample_threshold(cfg, x_raw.utterance_id));
}

SemOutcome apply_fixed_sem(const FeatureMatrix &x_raw, const EnergyMatrix &e,
                           const GlobalStats &stats, double eta_th_db) {
  if (std::isnan(eta_th_db)) throw Error(ErrorCode::kInvalidConfig, "threshold is NaN");
  return mask_with_threshold(x_raw, e, stats, eta_th_db);
}

BinaryMatrix dropout_keep_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                               std::uint64_t seed, std::string_view utterance_id) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw Error(ErrorCode::kInvalidRate, "dropout rate must lie in [0, 1)");
  Rng rng = utterance_rng(seed, utterance_id);
  BinaryMatrix keep(rows, cols);
  for (Eigen::Index i = 0; i < keep.size(); ++i)
    keep.data()[i] = uniform01(rng) < rate ? 0 : 1;
  return keep;
}

FeatureMatrix input_dropout(const FeatureMatrix &x, double rate, std::uint64_t seed,
                            std::string_view utterance_id) {
  const BinaryMatrix keep =
      dropout_keep_mask(x.values.rows(), x.values.cols(), rate, seed, utterance_id);
  const double scale = 1.0 / (1.0 - rate);
  FeatureMatrix out{x.values, x.utterance_id, x.stage};
  for (Eigen::Index i = 0; i < out.values.size(); ++i)
    out.values.data()[i] = keep.data()[i] ? out.values.data()[i] * scale : 0.0;
  return out;
}

}  // namespace sem
