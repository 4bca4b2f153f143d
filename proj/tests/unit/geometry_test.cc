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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <random>

#include "epointda/binary_io.h"
#include "epointda/geometry/io.h"
#include "epointda/geometry/projection.h"
#include "gtest/gtest.h"

namespace epointda {
namespace geometry {
namespace {

PointCloud Cloud(std::vector<Eigen::Vector3d> points, std::vector<uint8_t> labels) {
  return {std::move(points), std::move(labels)};
}

Eigen::Vector3d FromAngles(double range, double az_deg, double el_deg) {
  const double az = az_deg * std::numbers::pi / 180.0;
  const double el = el_deg * std::numbers::pi / 180.0;
  return range * Eigen::Vector3d(std::cos(el) * std::cos(az),
                                 std::cos(el) * std::sin(az), std::sin(el));
}

PointCloud RandomCloud(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> az(-60.0, 60.0), el(-35.0, 10.0),
      range(1.0, 70.0);
  std::uniform_int_distribution<int> label(0, kNumClasses - 1);
  PointCloud cloud;
  for (int i = 0; i < n; ++i) {
    cloud.points.push_back(FromAngles(range(rng), az(rng), el(rng)));
    cloud.labels.push_back(static_cast<uint8_t>(label(rng)));
  }
  return cloud;
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("epointda_geo_" + name)).string();
}

TEST(BinOfTest, BoresightPoint) {
  const auto bin = BinOf({10.0, 0.0, 0.0}, SensorConfig{});
  ASSERT_TRUE(bin.has_value());
  EXPECT_EQ(bin->col, 256);
  EXPECT_EQ(bin->row, 4);  // floor(2.0 / 26.8 * 64)
}

TEST(BinOfTest, AboveFieldOfViewIsDiscarded) {
  EXPECT_FALSE(BinOf(FromAngles(10.0, 0.0, 10.0), SensorConfig{}).has_value());
  EXPECT_FALSE(BinOf(FromAngles(10.0, 50.0, 0.0), SensorConfig{}).has_value());
  EXPECT_FALSE(BinOf(Eigen::Vector3d::Zero(), SensorConfig{}).has_value());
}

TEST(BinOfTest, MaxBoundaryClampsIntoLastBin) {
  const SensorConfig cfg;
  const auto right = BinOf(FromAngles(5.0, 45.0, 0.0), cfg);
  ASSERT_TRUE(right.has_value());
  EXPECT_EQ(right->col, cfg.cols - 1);
  const auto bottom = BinOf(FromAngles(5.0, 0.0, -24.8), cfg);
  ASSERT_TRUE(bottom.has_value());
  EXPECT_EQ(bottom->row, cfg.rows - 1);
}

TEST(BinOfTest, BinCenterRaysLandInTheirBins) {
  const SensorConfig cfg = SensorConfig::DeskScale();
  for (int r = 0; r < cfg.rows; ++r) {
    for (int c = 0; c < cfg.cols; c += 7) {
      const auto bin = BinOf(7.5 * BinCenterDirection(r, c, cfg), cfg);
      ASSERT_TRUE(bin.has_value());
      EXPECT_EQ(*bin, (PixelIndex{r, c}));
    }
  }
}

TEST(ProjectTest, NearestRangeWinsSharedBin) {
  const Eigen::Vector3d dir = BinCenterDirection(10, 100, SensorConfig{});
  const Projection p =
      ProjectCloud(Cloud({9.0 * dir, 5.0 * dir}, {kPedestrian, kCar}), SensorConfig{});
  EXPECT_EQ(p.image.point(10, 100), 5.0 * dir);
  EXPECT_EQ(p.image.label(10, 100), kCar);
  EXPECT_EQ(p.stats.binned, 1);
  EXPECT_EQ(p.stats.occluded, 1);
}

TEST(ProjectTest, TieKeepsEarlierPoint) {
  const Eigen::Vector3d dir = BinCenterDirection(3, 3, SensorConfig{});
  const RangeImage img = Project(Cloud({4.0 * dir, 4.0 * dir}, {kCar, kPedestrian}),
                                 SensorConfig{});
  EXPECT_EQ(img.label(3, 3), kCar);
}

TEST(ProjectTest, EmptyCloudAndFullyOutOfView) {
  EXPECT_THROW(Project(PointCloud{}, SensorConfig{}), ContractError);
  EXPECT_THROW(Project(Cloud({FromAngles(3.0, 90.0, 0.0)}, {0}), SensorConfig{}),
               EmptyImageError);
}

TEST(ProjectTest, RejectsInvalidCloud) {
  EXPECT_THROW(Project(Cloud({{1.0, 0.0, 0.0}}, {}), SensorConfig{}), ContractError);
  EXPECT_THROW(Project(Cloud({{1.0, 0.0, 0.0}}, {7}), SensorConfig{}), ContractError);
  EXPECT_THROW(Project(Cloud({{NAN, 0.0, 0.0}}, {0}), SensorConfig{}), ContractError);
}

TEST(SensorConfigTest, Validation) {
  SensorConfig cfg;
  cfg.rows = 0;
  EXPECT_THROW(cfg.Validate(), ContractError);
  cfg = SensorConfig{};
  cfg.elevation_max_deg = cfg.elevation_min_deg;
  EXPECT_THROW(cfg.Validate(), ContractError);
  EXPECT_NO_THROW(SensorConfig::DeskScale().Validate());
}

TEST(ExtractMaskTest, ZeroImage) {
  const RangeImage img(4, 5);
  EXPECT_EQ(ExtractMask(img).CountOnes(), 0);
}

TEST(ExtractMaskTest, SingleNonzeroPixel) {
  RangeImage img(4, 5);
  std::vector<double> data(img.data());
  data[(2 * 5 + 3) * 3 + 2] = -0.5;  // only z set
  img.Assign(data, img.labels());
  const DropoutMask mask = ExtractMask(img);
  EXPECT_EQ(mask.CountOnes(), 1);
  EXPECT_EQ(mask.at(2, 3), 1);
}

TEST(ExtractMaskTest, MatchesProjectionMask) {
  std::mt19937_64 rng(5);
  const RangeImage img = Project(RandomCloud(rng, 3000), SensorConfig::DeskScale());
  EXPECT_EQ(ExtractMask(img).values, img.mask());
  EXPECT_TRUE(img.MaskConsistent());
}

TEST(RangeImageTest, SetPointRejectsOrigin) {
  RangeImage img(2, 2);
  EXPECT_THROW(img.SetPoint(0, 0, Eigen::Vector3d::Zero(), kCar), ContractError);
  img.SetPoint(1, 1, {1.0, 0.0, 0.0}, kCar);
  EXPECT_EQ(img.mask(1, 1), 1);
  img.ClearPixel(1, 1);
  EXPECT_EQ(img.mask(1, 1), 0);
  EXPECT_TRUE(img.MaskConsistent());
}

TEST(UnprojectTest, ProjectedLabelsReturnToWinningPoints) {
  std::mt19937_64 rng(9);
  const SensorConfig cfg = SensorConfig::DeskScale();
  const PointCloud cloud = RandomCloud(rng, 2000);
  const Projection p = ProjectCloud(cloud, cfg);
  const std::vector<uint8_t> labels =
      UnprojectLabels(p.image, p.image.labels(), cloud, cfg);
  for (size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& bin = p.pixel_of_point[i];
    if (!bin) {
      EXPECT_EQ(labels[i], kNoLabel);
    } else if (p.image.point(bin->row, bin->col) == cloud.points[i]) {
      EXPECT_EQ(labels[i], cloud.labels[i]);
    }
  }
}

TEST(UnprojectTest, AllBackgroundPrediction) {
  std::mt19937_64 rng(10);
  const SensorConfig cfg = SensorConfig::DeskScale();
  const PointCloud cloud = RandomCloud(rng, 500);
  const RangeImage img = Project(cloud, cfg);
  const std::vector<uint8_t> labels = UnprojectLabels(
      img, std::vector<uint8_t>(img.pixels(), kBackground), cloud, cfg);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (BinOf(cloud.points[i], cfg)) EXPECT_EQ(labels[i], kBackground);
  }
}

TEST(UnprojectTest, OccludedPointTakesOccluderLabel) {
  const SensorConfig cfg;
  const Eigen::Vector3d dir = BinCenterDirection(20, 200, cfg);
  const PointCloud cloud = Cloud({12.0 * dir, 6.0 * dir}, {kPedestrian, kCar});
  const RangeImage img = Project(cloud, cfg);
  const std::vector<uint8_t> labels = UnprojectLabels(img, img.labels(), cloud, cfg);
  EXPECT_EQ(labels[0], kCar);
  EXPECT_EQ(labels[1], kCar);
}

TEST(UnprojectTest, ShapeMismatchThrows) {
  const RangeImage img(4, 4);
  EXPECT_THROW(UnprojectLabels(img, std::vector<uint8_t>(16, 0), PointCloud{},
                               SensorConfig{}),
               ContractError);
}

TEST(ProjectProperty, CountsReconcileAndReprojectionIsStable) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const SensorConfig cfg = trial % 2 ? SensorConfig{} : SensorConfig::DeskScale();
    const PointCloud cloud = RandomCloud(rng, 200 + 300 * trial);
    const Projection p = ProjectCloud(cloud, cfg);
    EXPECT_EQ(p.stats.binned + p.stats.occluded + p.stats.out_of_fov, cloud.size());
    EXPECT_EQ(p.image.mask().end() - p.image.mask().begin(), p.image.pixels());
    int64_t present = 0;
    for (int r = 0; r < cfg.rows; ++r) {
      for (int c = 0; c < cfg.cols; ++c) {
        if (!p.image.mask(r, c)) continue;
        ++present;
        const auto bin = BinOf(p.image.point(r, c), cfg);
        ASSERT_TRUE(bin.has_value());
        EXPECT_EQ(*bin, (PixelIndex{r, c}));
      }
    }
    EXPECT_EQ(present, p.stats.binned);
    EXPECT_TRUE(p.image.MaskConsistent());
    // Every in-view point is at least as far as its pixel's winner.
    for (size_t i = 0; i < cloud.points.size(); ++i) {
      if (const auto& bin = p.pixel_of_point[i]) {
        EXPECT_LE(p.image.point(bin->row, bin->col).norm(), cloud.points[i].norm());
      }
    }
  }
}

TEST(EpdaTest, RoundTripIsBitwiseIdentical) {
  PointCloud cloud = Cloud({{1.25, -2.5, 0.125}, {30.0, 4.0, -1.5}}, {kCar, kPedestrian});
  const std::string path = TempPath("roundtrip.epda");
  SavePointCloud(path, cloud);
  const std::string first = ReadFileBytes(path);
  const PointCloud loaded = LoadPointCloud(path, CloudFormat::kEpda);
  EXPECT_EQ(loaded.points, cloud.points);
  EXPECT_EQ(loaded.labels, cloud.labels);
  SavePointCloud(path, loaded);
  EXPECT_EQ(ReadFileBytes(path), first);
  EXPECT_EQ(first.size(), 4u + 1u + 4u + 2u * 13u);
  std::filesystem::remove(path);
}

TEST(EpdaTest, FormatErrorsCarryOffsets) {
  const std::string good =
      EncodeEpda(Cloud({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}}, {kCar, kBackground}));
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(DecodeEpda(bad_magic), FormatError);

  try {
    DecodeEpda(good.substr(0, good.size() - 3));
    FAIL() << "truncation accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 9u + 13u + 8u);  // z of the second record
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }

  std::string bad_label = good;
  bad_label[9 + 12] = 3;
  try {
    DecodeEpda(bad_label);
    FAIL() << "label accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 21u);
  }

  ByteWriter empty;
  empty.Bytes("EPDA");
  empty.U8(1);
  empty.U32(0);
  EXPECT_THROW(DecodeEpda(empty.buffer()), FormatError);
}

TEST(KittiBinTest, HandPackedRecord) {
  const float record[4] = {1.0f, 2.0f, 0.5f, 0.9f};
  std::string bytes(16, '\0');
  std::memcpy(bytes.data(), record, 16);
  const PointCloud cloud = DecodeKittiBin(bytes);
  ASSERT_EQ(cloud.size(), 1);
  EXPECT_EQ(cloud.points[0], Eigen::Vector3d(1.0, 2.0, 0.5));
  EXPECT_EQ(cloud.labels[0], kBackground);
  EXPECT_THROW(DecodeKittiBin(bytes.substr(0, 15)), FormatError);
  EXPECT_THROW(DecodeKittiBin(""), FormatError);
}

TEST(EpriTest, RoundTripIsBitwiseIdentical) {
  std::mt19937_64 rng(3);
  const RangeImage img = Project(RandomCloud(rng, 800), SensorConfig::DeskScale());
  const std::string bytes = EncodeEpri(img);
  EXPECT_EQ(bytes.size(), 17u + 32u * 256u * (12u + 2u));
  const RangeImage back = DecodeEpri(bytes);
  EXPECT_EQ(EncodeEpri(back), bytes);
  EXPECT_EQ(back.mask(), img.mask());
  EXPECT_EQ(back.labels(), img.labels());

  const std::string path = TempPath("roundtrip.epri");
  SaveRangeImage(path, img);
  EXPECT_EQ(ReadFileBytes(path), bytes);
  EXPECT_EQ(EncodeEpri(LoadRangeImage(path)), bytes);
  std::filesystem::remove(path);
}

TEST(EpriTest, InconsistentMaskIsRejected) {
  RangeImage img(2, 2);
  img.SetPoint(0, 1, {3.0, 1.0, 0.0}, kCar);
  std::string bytes = EncodeEpri(img);
  const size_t mask_offset = 17 + 4 * 3 * 4;
  bytes[mask_offset] = 1;  // claims a return at an all-zero pixel
  try {
    DecodeEpri(bytes);
    FAIL() << "inconsistent mask accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), mask_offset);
  }
  EXPECT_THROW(DecodeEpri(bytes.substr(0, 20)), FormatError);
}

}  // namespace
}  // namespace geometry
}  // namespace epointda
