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

#include "sem/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sem/error.hpp"
#include "sem/masking.hpp"

namespace sem {

EtaHistogram::EtaHistogram(const HistogramRange &range) : range_(range) {
  if (!(range.bin_width_db > 0.0) || !(range.lo_db < range.hi_db) ||
      !std::isfinite(range.lo_db) || !std::isfinite(range.hi_db))
    throw Error(ErrorCode::kInvalidConfig, "need bin width > 0 and lo < hi");
  const auto bins = static_cast<std::size_t>(
      std::ceil((range.hi_db - range.lo_db) / range.bin_width_db - 1e-9));
  counts_.assign(std::max<std::size_t>(bins, 1), 0);
  energy_.assign(counts_.size(), 0.0);
}

void EtaHistogram::add(const EnergyMatrix &e) {
  if (e.values.size() == 0) return;
  const double peak = peak_energy(e.values);
  if (!(peak > 0.0)) {
    ++skipped_;
    return;
  }
  const auto last = static_cast<long>(counts_.size()) - 1;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double energy = e.values.data()[i];
    const double db = eta(energy, peak);
    if (db < range_.lo_db) ++underflow_;
    if (db >= range_.hi_db) ++overflow_;
    const auto bin = std::clamp(
        static_cast<long>(std::floor((db - range_.lo_db) / range_.bin_width_db)), 0L, last);
    ++counts_[static_cast<std::size_t>(bin)];
    energy_[static_cast<std::size_t>(bin)] += energy / peak;
  }
  total_ += e.values.size();
}

void EtaHistogram::merge(const EtaHistogram &other) {
  if (other.range_.lo_db != range_.lo_db || other.range_.hi_db != range_.hi_db ||
      other.range_.bin_width_db != range_.bin_width_db)
    throw Error(ErrorCode::kShapeMismatch, "histograms use different bins");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    counts_[i] += other.counts_[i];
    energy_[i] += other.energy_[i];
  }
  total_ += other.total_;
  underflow_ += other.underflow_;
  overflow_ += other.overflow_;
  skipped_ += other.skipped_;
}

EtaDistribution EtaHistogram::finalize() const {
  if (total_ == 0) throw Error(ErrorCode::kEmptyCorpus, "no bins counted");
  EtaDistribution d;
  const std::size_t n = counts_.size();
  d.bin_edges.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    d.bin_edges[i] = range_.lo_db + static_cast<double>(i) * range_.bin_width_db;
  d.pdf.resize(n);
  d.cdf.resize(n);
  d.energy_ratio.resize(n);

  std::vector<double> energy_cum(n);
  std::partial_sum(energy_.begin(), energy_.end(), energy_cum.begin());
  const double energy_total = energy_cum.back();
  std::int64_t count_cum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    count_cum += counts_[i];
    d.pdf[i] = static_cast<double>(counts_[i]) / static_cast<double>(total_);
    d.cdf[i] = static_cast<double>(count_cum) / static_cast<double>(total_);
    d.energy_ratio[i] = energy_total > 0.0 ? energy_cum[i] / energy_total : d.cdf[i];
  }
  d.total_bins_counted = total_;
  d.underflow = underflow_;
  d.overflow = overflow_;
  d.skipped_utterances = skipped_;
  return d;
}

EtaDistribution eta_histogram(std::span<const EnergyMatrix> corpus,
                              const HistogramRange &range) {
  EtaHistogram hist(range);
  for (const auto &e : corpus) hist.add(e);
  return hist.finalize();
}

EnergyRatioCurve energy_ratio_curve(std::span<const EnergyMatrix> corpus,
                                    std::span<const double> thresholds_db) {
  if (thresholds_db.empty()) throw Error(ErrorCode::kInvalidConfig, "no thresholds given");
  if (!std::is_sorted(thresholds_db.begin(), thresholds_db.end()))
    throw Error(ErrorCode::kInvalidConfig, "thresholds must be sorted");

  const std::size_t nt = thresholds_db.size();
  std::vector<double> numerator(nt, 0.0);
  std::vector<std::int64_t> below(nt, 0);
  double energy_total = 0.0;
  std::int64_t count_total = 0;

  std::vector<std::pair<double, double>> bins;  // (eta, e / peak)
  std::vector<double> prefix;
  for (const auto &e : corpus) {
    if (e.values.size() == 0) continue;
    const double peak = peak_energy(e.values);
    if (!(peak > 0.0)) continue;
    bins.clear();
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
      bins.emplace_back(eta(e.values.data()[i], peak), e.values.data()[i] / peak);
    std::sort(bins.begin(), bins.end());
    prefix.assign(bins.size() + 1, 0.0);
    for (std::size_t i = 0; i < bins.size(); ++i) prefix[i + 1] = prefix[i] + bins[i].second;

    for (std::size_t t = 0; t < nt; ++t) {
      const auto it = std::lower_bound(
          bins.begin(), bins.end(), thresholds_db[t],
          [](const std::pair<double, double> &b, double th) { return b.first < th; });
      const auto k = static_cast<std::size_t>(it - bins.begin());
      numerator[t] += prefix[k];
      below[t] += static_cast<std::int64_t>(k);
    }
    energy_total += prefix.back();
    count_total += static_cast<std::int64_t>(bins.size());
  }
  if (count_total == 0) throw Error(ErrorCode::kEmptyCorpus, "no bins counted");

  EnergyRatioCurve curve;
  curve.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
  curve.energy_ratio.resize(nt);
  curve.cdf.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    curve.cdf[t] = static_cast<double>(below[t]) / static_cast<double>(count_total);
    curve.energy_ratio[t] = energy_total > 0.0 ? numerator[t] / energy_total : curve.cdf[t];
  }
  return curve;
}

std::int64_t count_below(const EnergyMatrix &e, double eta_th_db) {
  if (e.values.size() == 0) throw Error(ErrorCode::kEmptyMatrix, "empty energy matrix");
  const double peak = peak_energy(e.values);
  std::int64_t n = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (eta(e.values.data()[i], peak) < eta_th_db) ++n;
  return n;
}

double masked_fraction(const EnergyMatrix &e, double eta_th_db) {
  return static_cast<double>(count_below(e, eta_th_db)) / static_cast<double>(e.values.size());
}

}  // namespace sem
