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

#include "epointda/align/spatial_report.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "epointda/text_format.h"

namespace epointda {
namespace align {
namespace {

constexpr char kHeader[] = "position_id,bin_low,bin_high,count,domain";

double PixelValue(const geometry::RangeImage& image, int row, int col, int channel) {
  if (channel == kRangeChannel) return image.point(row, col).norm();
  return image.value(row, col, channel);
}

}  // namespace

SpatialReport SpatialDistributionReport(const std::vector<DomainSamples>& domains,
                                        int channel,
                                        const std::vector<PixelPosition>& positions,
                                        int bins) {
  if (domains.empty()) throw ContractError("spatial_distribution_report: no domains");
  if (bins < 1) throw ContractError("spatial_distribution_report: bins must be >= 1");
  for (const DomainSamples& d : domains) {
    if (d.images == nullptr || d.images->empty()) {
      throw ContractError("spatial_distribution_report: domain '" + d.domain + "' is empty");
    }
    for (const geometry::RangeImage& image : *d.images) {
      if (channel < kRangeChannel || channel >= image.channels()) {
        throw ContractError("spatial_distribution_report: channel " +
                            std::to_string(channel) + " out of range");
      }
      for (const PixelPosition& p : positions) {
        if (p.row < 0 || p.row >= image.rows() || p.col < 0 || p.col >= image.cols()) {
          throw ContractError("spatial_distribution_report: position (" +
                              std::to_string(p.row) + ", " + std::to_string(p.col) +
                              ") outside the image");
        }
      }
    }
  }

  SpatialReport report;
  for (size_t pid = 0; pid < positions.size(); ++pid) {
    const PixelPosition& pos = positions[pid];
    std::vector<std::vector<double>> samples(domains.size());
    double lo = INFINITY;
    double hi = -INFINITY;
    for (size_t d = 0; d < domains.size(); ++d) {
      for (const geometry::RangeImage& image : *domains[d].images) {
        const double v = PixelValue(image, pos.row, pos.col, channel);
        samples[d].push_back(v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    const int nbins = hi > lo ? bins : 1;
    const double width = (hi - lo) / nbins;
    for (size_t d = 0; d < domains.size(); ++d) {
      std::vector<int64_t> counts(nbins, 0);
      for (double v : samples[d]) {
        int b = width > 0.0 ? static_cast<int>((v - lo) / width) : 0;
        counts[std::clamp(b, 0, nbins - 1)]++;
      }
      for (int b = 0; b < nbins; ++b) {
        const double bin_low = lo + b * width;
        const double bin_high = b + 1 == nbins ? hi : lo + (b + 1) * width;
        report.rows.push_back({static_cast<int>(pid), bin_low, bin_high, counts[b],
                               domains[d].domain});
      }
    }
    if (domains.size() == 2) {
      report.gaps.push_back({static_cast<int>(pid), KsStatistic(samples[0], samples[1]),
                             KsCriticalValue(samples[0].size(), samples[1].size())});
    }
  }
  return report;
}

double KsStatistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ContractError("KsStatistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  size_t i = 0;
  size_t j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    best = std::max(best, std::abs(i / na - j / nb));
  }
  return best;
}

double KsCriticalValue(size_t n, size_t m) {
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return 1.358 * std::sqrt((nd + md) / (nd * md));
}

void WriteHistogramCsv(const std::string& path, const std::vector<HistogramRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << kHeader << '\n';
  for (const HistogramRow& r : rows) {
    out << r.position_id << ',' << FormatDouble(r.bin_low) << ',' << FormatDouble(r.bin_high)
        << ',' << r.count << ',' << r.domain << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<HistogramRow> ReadHistogramCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw ContractError("'" + path + "': unexpected histogram CSV header");
  }
  std::vector<HistogramRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitString(line, ',');
    if (f.size() != 5) throw ContractError("'" + path + "': malformed row '" + line + "'");
    rows.push_back({static_cast<int>(ParseInt(f[0], "position_id")),
                    ParseDouble(f[1], "bin_low"), ParseDouble(f[2], "bin_high"),
                    ParseInt(f[3], "count"), f[4]});
  }
  return rows;
}

}  // namespace align
}  // namespace epointda
