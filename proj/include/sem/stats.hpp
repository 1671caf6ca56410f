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

#ifndef SEM_STATS_HPP_
#define SEM_STATS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "sem/dsp.hpp"

namespace sem {

struct HistogramRange {
  double lo_db = -100.0;
  double hi_db = 10.0;
  double bin_width_db = 1.0;
};

// Distribution of eta (dB relative to each utterance's peak) over a corpus.
// Bin i covers [bin_edges[i], bin_edges[i + 1]); values outside the range are
// clamped into the first or last bin and also tallied in underflow/overflow.
// cdf[i] and energy_ratio[i] are cumulative through the end of bin i.
struct EtaDistribution {
  std::vector<double> bin_edges;     // num_bins + 1 entries
  std::vector<double> pdf;           // probability mass per bin, sums to 1
  std::vector<double> cdf;
  std::vector<double> energy_ratio;  // share of peak-normalized energy
  std::int64_t total_bins_counted = 0;
  std::int64_t underflow = 0;  // eta < lo before clamping
  std::int64_t overflow = 0;   // eta >= hi before clamping
  std::int64_t skipped_utterances = 0;  // zero peak energy

  std::size_t num_bins() const { return pdf.size(); }
};

// Mergeable per-bin counts and energy sums. Energy enters as e / e_peak so
// that utterances recorded at different levels are weighted alike.
class EtaHistogram {
 public:
  explicit EtaHistogram(const HistogramRange &range = {});

  void add(const EnergyMatrix &e);
  void merge(const EtaHistogram &other);

  std::size_t num_bins() const { return counts_.size(); }
  std::int64_t total() const { return total_; }
  const std::vector<std::int64_t> &counts() const { return counts_; }

  // Throws kEmptyCorpus when nothing was counted.
  EtaDistribution finalize() const;

 private:
  HistogramRange range_;
  std::vector<std::int64_t> counts_;
  std::vector<double> energy_;
  std::int64_t total_ = 0;
  std::int64_t underflow_ = 0;
  std::int64_t overflow_ = 0;
  std::int64_t skipped_ = 0;
};

EtaDistribution eta_histogram(std::span<const EnergyMatrix> corpus,
                              const HistogramRange &range = {});

struct EnergyRatioCurve {
  std::vector<double> thresholds_db;
  std::vector<double> energy_ratio;  // r_e at each threshold
  std::vector<double> cdf;           // fraction of bins with eta < threshold
};

/// r_e(t) = sum of e / e_peak over bins with eta < t, divided by the sum over
/// all bins, pooled across the corpus. Thresholds must be sorted ascending.
EnergyRatioCurve energy_ratio_curve(std::span<const EnergyMatrix> corpus,
                                    std::span<const double> thresholds_db);

/// Fraction of bins with eta < eta_th.
double masked_fraction(const EnergyMatrix &e, double eta_th_db);
std::int64_t count_below(const EnergyMatrix &e, double eta_th_db);

}  // namespace sem

#endif  // SEM_STATS_HPP_
