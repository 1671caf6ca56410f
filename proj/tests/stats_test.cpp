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

#include <random>

#include "doctest.h"
#include "sem/error.hpp"
#include "sem/masking.hpp"
#include "sem/stats.hpp"
#include "test_support.hpp"

using namespace sem;

namespace {

std::vector<EnergyMatrix> fixture_corpus(std::uint64_t first, std::uint64_t count) {
  std::vector<EnergyMatrix> corpus;
  for (std::uint64_t s = first; s < first + count; ++s)
    corpus.push_back(filterbank_energies(testing::speech_like(s, 1.0), FeatureConfig{}));
  return corpus;
}

EnergyMatrix two_by_two() {
  Matrix e(2, 2);
  e << 4.0, 1.0, 2.0, 8.0;
  return EnergyMatrix{e, "h"};
}

}  // namespace

TEST_CASE("eta_histogram: constant utterance puts all mass at 0 dB") {
  std::vector<EnergyMatrix> corpus = {EnergyMatrix{Matrix::Constant(10, 4, 3.0), "c"}};
  const EtaDistribution d = eta_histogram(corpus);
  REQUIRE(d.num_bins() == 110);
  CHECK(d.bin_edges.front() == -100.0);
  CHECK(d.bin_edges.back() == 10.0);
  for (std::size_t i = 0; i < d.num_bins(); ++i) {
    if (d.bin_edges[i] == 0.0) {
      CHECK(d.pdf[i] == 1.0);
    } else {
      CHECK(d.pdf[i] == 0.0);
    }
  }
  CHECK(d.cdf.back() == 1.0);
  CHECK(d.energy_ratio.back() == 1.0);
  CHECK(d.total_bins_counted == 40);
}

TEST_CASE("eta_histogram: merge equals pooled counts") {
  const auto a = fixture_corpus(0, 3);
  const auto b = fixture_corpus(10, 2);
  EtaHistogram ha, hb, pooled;
  for (const auto &e : a) ha.add(e), pooled.add(e);
  for (const auto &e : b) hb.add(e), pooled.add(e);
  ha.merge(hb);
  CHECK(ha.counts() == pooled.counts());

  // Reversed utterance order: counts are identical.
  EtaHistogram reversed;
  for (auto it = a.rbegin(); it != a.rend(); ++it) reversed.add(*it);
  for (auto it = b.rbegin(); it != b.rend(); ++it) reversed.add(*it);
  CHECK(reversed.counts() == pooled.counts());

  const EtaDistribution d = pooled.finalize();
  double mass = 0.0;
  for (double p : d.pdf) mass += p;
  CHECK(std::abs(mass - 1.0) < 1e-9);
  for (std::size_t i = 1; i < d.num_bins(); ++i) {
    CHECK(d.cdf[i] >= d.cdf[i - 1]);
    CHECK(d.energy_ratio[i] >= d.energy_ratio[i - 1]);
  }
  for (std::size_t i = 0; i < d.num_bins(); ++i) CHECK(d.energy_ratio[i] <= d.cdf[i]);

  EtaHistogram other(HistogramRange{-50.0, 10.0, 1.0});
  CHECK_THROWS_AS(ha.merge(other), Error);
}

TEST_CASE("eta_histogram: errors and silent utterances") {
  std::vector<EnergyMatrix> none;
  CHECK_THROWS_AS(eta_histogram(none), Error);
  CHECK_THROWS_AS(EtaHistogram(HistogramRange{0.0, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(EtaHistogram(HistogramRange{-10.0, 0.0, 0.0}), Error);

  std::vector<EnergyMatrix> silent = {EnergyMatrix{Matrix::Zero(3, 3), "s"}};
  try {
    eta_histogram(silent);
    FAIL("expected EmptyCorpus");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kEmptyCorpus);
  }

  silent.push_back(EnergyMatrix{Matrix::Constant(2, 3, 1.0), "c"});
  const EtaDistribution d = eta_histogram(silent);
  CHECK(d.skipped_utterances == 1);
  CHECK(d.total_bins_counted == 6);
}

TEST_CASE("energy_ratio_curve") {
  std::vector<EnergyMatrix> corpus = {two_by_two()};
  const std::vector<double> thresholds = {-100.0, -3.0, 0.0, 100.0};
  const EnergyRatioCurve curve = energy_ratio_curve(corpus, thresholds);
  CHECK(curve.energy_ratio[0] == 0.0);
  CHECK(curve.energy_ratio[3] == 1.0);
  // e_peak = 8 (rank index ceil(3.8) - 1 = 3). eta: 4 -> -3.01 dB, 1 -> -9.03,
  // 2 -> -6.02, 8 -> 0. Below -3 dB: {4, 1, 2}, so r_e = 7/15.
  CHECK(curve.energy_ratio[1] == doctest::Approx(7.0 / 15.0).epsilon(1e-15));
  CHECK(curve.cdf[1] == 0.75);
  // Below 0 dB: {4, 1, 2} as well.
  CHECK(curve.energy_ratio[2] == doctest::Approx(7.0 / 15.0).epsilon(1e-15));

  const std::vector<double> unsorted = {0.0, -1.0};
  CHECK_THROWS_AS(energy_ratio_curve(corpus, unsorted), Error);
  std::vector<EnergyMatrix> empty;
  CHECK_THROWS_AS(energy_ratio_curve(empty, thresholds), Error);
}

TEST_CASE("energy_ratio_curve weights utterances by peak-relative energy") {
  // One loud utterance (entries 500 and 1000) and one quiet one. Pooling raw
  // energies would put r_e above the cdf at -3 dB; peak-relative pooling keeps
  // r_e <= cdf.
  Matrix loud = Matrix::Constant(4, 5, 1000.0);
  loud(0, 0) = 500.0;
  std::vector<EnergyMatrix> corpus = {EnergyMatrix{loud, "loud"},
                                      EnergyMatrix{Matrix::Constant(4, 5, 1e-3), "quiet"}};
  const std::vector<double> thresholds = {-3.0};
  const EnergyRatioCurve curve = energy_ratio_curve(corpus, thresholds);
  CHECK(curve.cdf[0] == 1.0 / 40.0);
  CHECK(curve.energy_ratio[0] <= curve.cdf[0]);
  CHECK(curve.energy_ratio[0] == doctest::Approx(0.5 / (0.5 + 19.0 + 20.0)));
}

TEST_CASE("masked_fraction") {
  const auto corpus = fixture_corpus(30, 3);
  for (const auto &e : corpus) {
    CHECK(masked_fraction(e, 100.0) == 1.0);
    CHECK(masked_fraction(e, -1000.0) == 0.0);
    const double peak = peak_energy(e.values);
    for (double t = -100.0; t <= 10.0; t += 1.0) {
      std::int64_t brute = 0;
      for (Eigen::Index i = 0; i < e.values.size(); ++i)
        brute += 10.0 * std::log10(std::max(e.values.data()[i], 1e-30) / peak) < t;
      CHECK(count_below(e, t) == brute);
      const MaskMatrix m = binary_mask(e, energy_threshold(peak, t));
      CHECK(m.num_masked() == brute);
    }
  }
  CHECK_THROWS_AS(masked_fraction(EnergyMatrix{Matrix(0, 0), "e"}, 0.0), Error);
}
