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

#ifndef EPOINTDA_GEOMETRY_IO_H_
#define EPOINTDA_GEOMETRY_IO_H_

#include <string>

#include "epointda/geometry/range_image.h"

namespace epointda {
namespace geometry {

// File formats, all integers little-endian:
//
// EPDA point cloud
//   "EPDA" u8 version=1 u32 N, then N x { f32 x, f32 y, f32 z, u8 label }
//
// EPRI range image
//   "EPRI" u8 version=1 u32 H u32 W u32 C,
//   H*W*C f32 (row-major, channel-minor), H*W u8 mask, H*W u8 labels
//
// KITTI velodyne .bin
//   headerless f32 quadruples (x, y, z, intensity); intensity is dropped and
//   every point is labeled background.

enum class CloudFormat { kEpda, kKittiBin };

std::string EncodeEpda(const PointCloud& cloud);
PointCloud DecodeEpda(std::string_view bytes);
PointCloud DecodeKittiBin(std::string_view bytes);

std::string EncodeEpri(const RangeImage& image);
RangeImage DecodeEpri(std::string_view bytes);

void SavePointCloud(const std::string& path, const PointCloud& cloud);
PointCloud LoadPointCloud(const std::string& path, CloudFormat format);

void SaveRangeImage(const std::string& path, const RangeImage& image);
RangeImage LoadRangeImage(const std::string& path);

}  // namespace geometry
}  // namespace epointda

#endif  // EPOINTDA_GEOMETRY_IO_H_
