/*
 * Copyright 2026 The epointda Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EPOINTDA_ALIGN_SPATIAL_REPORT_H_
#define EPOINTDA_ALIGN_SPATIAL_REPORT_H_

#include <string>
#include <vector>

#include "epointda/geometry/range_image.h"

namespace epointda {
namespace align {

// Selects the Euclidean range of each pixel instead of a stored channel.
inline constexpr int kRangeChannel = -1;

struct PixelPosition {
  int row = 0;
  int col = 0;
};

struct HistogramRow {
  int position_id = 0;
  double bin_low = 0.0;
  double bin_high = 0.0;
  int64_t count = 0;
  std::string domain;

  bool operator==(const HistogramRow&) const = default;
};

struct DomainSamples {
  std::string domain;
  const std::vector<geometry::RangeImage>* images = nullptr;
};

struct PositionGap {
  int position_id = 0;
  double ks_statistic = 0.0;
  double critical_value = 0.0;  // two-sample, alpha = 0.05
  bool differs() const { return ks_statistic > critical_value; }
};

struct SpatialReport {
  std::vector<HistogramRow> rows;
  // Filled when exactly two domains are given.
  std::vector<PositionGap> gaps;
};

// Per-position histograms of one channel across every frame of each domain.
// Bin edges are shared between domains at a position; a position whose
// values are all equal gets a single degenerate bin.
SpatialReport SpatialDistributionReport(const std::vector<DomainSamples>& domains,
                                        int channel,
                                        const std::vector<PixelPosition>& positions,
                                        int bins = 20);

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double KsStatistic(std::vector<double> a, std::vector<double> b);
double KsCriticalValue(size_t n, size_t m);

void WriteHistogramCsv(const std::string& path, const std::vector<HistogramRow>& rows);
std::vector<HistogramRow> ReadHistogramCsv(const std::string& path);

}  // namespace align
}  // namespace epointda

#endif  // EPOINTDA_ALIGN_SPATIAL_REPORT_H_
