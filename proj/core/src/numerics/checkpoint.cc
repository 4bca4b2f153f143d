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

#include "epointda/numerics/checkpoint.h"

#include <map>

#include "epointda/binary_io.h"

namespace epointda {
namespace numerics {

void SaveCheckpoint(const std::string& path, const ParameterList& params) {
  ByteWriter out;
  out.Bytes("EPCK");
  out.U8(1);
  out.U32(static_cast<uint32_t>(params.size()));
  for (const NamedVariable& entry : params) {
    out.U16(static_cast<uint16_t>(entry.name.size()));
    out.Bytes(entry.name);
    const Shape& shape = entry.variable.shape();
    out.U8(static_cast<uint8_t>(shape.size()));
    for (const int64_t extent : shape) out.U32(static_cast<uint32_t>(extent));
  }
  for (const NamedVariable& entry : params) {
    for (const double v : entry.variable.value().data()) {
      out.F32(static_cast<float>(v));
    }
  }
  WriteFileBytes(path, out.buffer());
}

void LoadCheckpoint(const std::string& path, const ParameterList& params) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader in(bytes);
  if (in.Bytes(4, "magic") != "EPCK") throw FormatError("bad checkpoint magic", 0);
  const uint64_t version_offset = in.offset();
  if (in.U8("version") != 1) {
    throw FormatError("unsupported checkpoint version", version_offset);
  }
  const uint32_t count = in.U32("entry count");
  std::vector<std::pair<std::string, Shape>> manifest;
  for (uint32_t i = 0; i < count; ++i) {
    const uint16_t length = in.U16("name length");
    std::string name(in.Bytes(length, "name"));
    const uint8_t rank = in.U8("rank");
    Shape shape;
    for (uint8_t r = 0; r < rank; ++r) shape.push_back(in.U32("extent"));
    manifest.emplace_back(std::move(name), std::move(shape));
  }
  std::map<std::string, NdArray> values;
  for (const auto& [name, shape] : manifest) {
    NdArray array(shape);
    for (double& v : array.mutable_data()) v = in.F32("tensor data");
    values.emplace(name, std::move(array));
  }
  for (const NamedVariable& entry : params) {
    auto it = values.find(entry.name);
    if (it == values.end()) {
      throw FormatError("checkpoint lacks entry '" + entry.name + "'",
                        in.offset());
    }
    if (it->second.shape() != entry.variable.shape()) {
      throw FormatError("checkpoint entry '" + entry.name + "' has shape " +
                            ShapeToString(it->second.shape()),
                        in.offset());
    }
    Variable target = entry.variable;
    target.SetValue(it->second);
  }
}

}  // namespace numerics
}  // namespace epointda
