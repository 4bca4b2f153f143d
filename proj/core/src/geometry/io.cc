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

#include "epointda/geometry/io.h"

#include "epointda/binary_io.h"

namespace epointda {
namespace geometry {
namespace {

void ExpectMagic(ByteReader& in, std::string_view magic) {
  if (in.Bytes(4, "magic") != magic) {
    throw FormatError("bad magic, expected '" + std::string(magic) + "'", 0);
  }
  const uint64_t offset = in.offset();
  if (in.U8("version") != 1) throw FormatError("unsupported version", offset);
}

}  // namespace

std::string EncodeEpda(const PointCloud& cloud) {
  cloud.Validate();
  ByteWriter out;
  out.Bytes("EPDA");
  out.U8(1);
  out.U32(static_cast<uint32_t>(cloud.points.size()));
  for (size_t i = 0; i < cloud.points.size(); ++i) {
    for (int k = 0; k < 3; ++k) out.F32(static_cast<float>(cloud.points[i][k]));
    out.U8(cloud.labels[i]);
  }
  return out.buffer();
}

PointCloud DecodeEpda(std::string_view bytes) {
  ByteReader in(bytes);
  ExpectMagic(in, "EPDA");
  const uint64_t count_offset = in.offset();
  const uint32_t count = in.U32("point count");
  if (count == 0) throw FormatError("empty point cloud", count_offset);
  PointCloud cloud;
  cloud.points.reserve(count);
  cloud.labels.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    Eigen::Vector3d p;
    for (int k = 0; k < 3; ++k) p[k] = in.F32("point record");
    const uint64_t label_offset = in.offset();
    const uint8_t label = in.U8("point record");
    if (label >= kNumClasses) {
      throw FormatError("label " + std::to_string(label) + " out of range",
                        label_offset);
    }
    if (!p.allFinite()) throw FormatError("non-finite coordinate", label_offset - 12);
    cloud.points.push_back(p);
    cloud.labels.push_back(label);
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes", in.offset());
  return cloud;
}

PointCloud DecodeKittiBin(std::string_view bytes) {
  if (bytes.size() % 16 != 0) {
    throw FormatError("truncated KITTI record", bytes.size() - bytes.size() % 16);
  }
  if (bytes.empty()) throw FormatError("empty point cloud", 0);
  ByteReader in(bytes);
  PointCloud cloud;
  const size_t count = bytes.size() / 16;
  cloud.points.reserve(count);
  cloud.labels.assign(count, kBackground);
  for (size_t i = 0; i < count; ++i) {
    const uint64_t offset = in.offset();
    Eigen::Vector3d p;
    for (int k = 0; k < 3; ++k) p[k] = in.F32("point record");
    in.F32("intensity");
    if (!p.allFinite()) throw FormatError("non-finite coordinate", offset);
    cloud.points.push_back(p);
  }
  return cloud;
}

std::string EncodeEpri(const RangeImage& image) {
  ByteWriter out;
  out.Bytes("EPRI");
  out.U8(1);
  out.U32(static_cast<uint32_t>(image.rows()));
  out.U32(static_cast<uint32_t>(image.cols()));
  out.U32(static_cast<uint32_t>(image.channels()));
  for (const double v : image.data()) out.F32(static_cast<float>(v));
  for (const uint8_t m : image.mask()) out.U8(m);
  for (const uint8_t l : image.labels()) out.U8(l);
  return out.buffer();
}

RangeImage DecodeEpri(std::string_view bytes) {
  ByteReader in(bytes);
  ExpectMagic(in, "EPRI");
  const uint64_t header_offset = in.offset();
  const uint32_t rows = in.U32("height");
  const uint32_t cols = in.U32("width");
  const uint32_t channels = in.U32("channels");
  if (rows == 0 || cols == 0 || channels == 0 || rows > 1u << 16 ||
      cols > 1u << 16 || channels > 64) {
    throw FormatError("implausible image extents", header_offset);
  }
  RangeImage image(static_cast<int>(rows), static_cast<int>(cols),
                   static_cast<int>(channels));
  const size_t pixels = static_cast<size_t>(rows) * cols;
  std::vector<double> data(pixels * channels);
  for (double& v : data) v = in.F32("pixel data");
  const uint64_t mask_offset = in.offset();
  std::string_view mask = in.Bytes(pixels, "mask");
  const uint64_t label_offset = in.offset();
  std::vector<uint8_t> labels(pixels);
  for (size_t i = 0; i < pixels; ++i) {
    labels[i] = in.U8("labels");
    if (labels[i] >= kNumClasses) {
      throw FormatError("label out of range", label_offset + i);
    }
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes", in.offset());
  image.Assign(std::move(data), std::move(labels));
  for (size_t i = 0; i < pixels; ++i) {
    const auto stored = static_cast<uint8_t>(mask[i]);
    if (stored > 1) throw FormatError("mask value not binary", mask_offset + i);
    if (stored != image.mask()[i]) {
      throw FormatError("mask disagrees with zero pixels", mask_offset + i);
    }
  }
  return image;
}

void SavePointCloud(const std::string& path, const PointCloud& cloud) {
  WriteFileBytes(path, EncodeEpda(cloud));
}

PointCloud LoadPointCloud(const std::string& path, CloudFormat format) {
  const std::string bytes = ReadFileBytes(path);
  return format == CloudFormat::kEpda ? DecodeEpda(bytes) : DecodeKittiBin(bytes);
}

void SaveRangeImage(const std::string& path, const RangeImage& image) {
  WriteFileBytes(path, EncodeEpri(image));
}

RangeImage LoadRangeImage(const std::string& path) {
  return DecodeEpri(ReadFileBytes(path));
}

}  // namespace geometry
}  // namespace epointda
