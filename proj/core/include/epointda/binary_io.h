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

#ifndef EPOINTDA_BINARY_IO_H_
#define EPOINTDA_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "epointda/errors.h"

namespace epointda {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

// Appends little-endian fields to a byte buffer.
class ByteWriter {
 public:
  void Bytes(std::string_view bytes) { buffer_.append(bytes); }
  void U8(uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
  void U16(uint16_t v) { Raw(&v, sizeof(v)); }
  void U32(uint32_t v) { Raw(&v, sizeof(v)); }
  void F32(float v) { Raw(&v, sizeof(v)); }

  const std::string& buffer() const { return buffer_; }

 private:
  void Raw(const void* p, size_t n) {
    buffer_.append(static_cast<const char*>(p), n);
  }

  std::string buffer_;
};

// Reads little-endian fields, reporting truncation with the byte offset.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::string_view Bytes(size_t n, const char* what) {
    Require(n, what);
    std::string_view out = data_.substr(offset_, n);
    offset_ += n;
    return out;
  }
  uint8_t U8(const char* what) { return Fixed<uint8_t>(what); }
  uint16_t U16(const char* what) { return Fixed<uint16_t>(what); }
  uint32_t U32(const char* what) { return Fixed<uint32_t>(what); }
  float F32(const char* what) { return Fixed<float>(what); }

  uint64_t offset() const { return offset_; }
  size_t remaining() const { return data_.size() - offset_; }

 private:
  void Require(size_t n, const char* what) {
    if (data_.size() - offset_ < n) {
      throw FormatError(std::string("truncated ") + what, offset_);
    }
  }
  template <typename T>
  T Fixed(const char* what) {
    Require(sizeof(T), what);
    T v;
    std::memcpy(&v, data_.data() + offset_, sizeof(T));
    offset_ += sizeof(T);
    return v;
  }

  std::string_view data_;
  uint64_t offset_ = 0;
};

std::string ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, const std::string& bytes);

}  // namespace epointda

#endif  // EPOINTDA_BINARY_IO_H_
