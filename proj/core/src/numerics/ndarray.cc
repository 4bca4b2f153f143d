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

#include "epointda/numerics/ndarray.h"

#include <cmath>
#include <numeric>
#include <sstream>

namespace epointda {
namespace numerics {

std::string ShapeToString(const Shape& shape) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << ",";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

int64_t ShapeSize(const Shape& shape) {
  int64_t size = 1;
  for (const int64_t extent : shape) {
    if (extent < 0) {
      throw ContractError("negative extent in shape " + ShapeToString(shape));
    }
    size *= extent;
  }
  return size;
}

NdArray::NdArray(Shape shape, double fill)
    : shape_(std::move(shape)), data_(ShapeSize(shape_), fill) {}

NdArray::NdArray(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (ShapeSize(shape_) != static_cast<int64_t>(data_.size())) {
    throw ContractError("shape " + ShapeToString(shape_) + " holds " +
                        std::to_string(ShapeSize(shape_)) + " values, got " +
                        std::to_string(data_.size()));
  }
}

int64_t NdArray::dim(int axis) const {
  if (axis < 0) axis += rank();
  if (axis < 0 || axis >= rank()) {
    throw ContractError("axis " + std::to_string(axis) + " out of range for " +
                        ShapeToString(shape_));
  }
  return shape_[axis];
}

int64_t NdArray::Offset(std::initializer_list<int64_t> index) const {
  if (static_cast<int>(index.size()) != rank()) {
    throw ContractError("index rank mismatch for " + ShapeToString(shape_));
  }
  int64_t offset = 0;
  int axis = 0;
  for (const int64_t i : index) {
    if (i < 0 || i >= shape_[axis]) {
      throw ContractError("index out of range on axis " +
                          std::to_string(axis) + " of " +
                          ShapeToString(shape_));
    }
    offset = offset * shape_[axis] + i;
    ++axis;
  }
  return offset;
}

double NdArray::at(std::initializer_list<int64_t> index) const {
  return data_[Offset(index)];
}

double& NdArray::at(std::initializer_list<int64_t> index) {
  return data_[Offset(index)];
}

NdArray NdArray::Reshaped(Shape shape) const {
  return NdArray(std::move(shape), data_);
}

double NdArray::Sum() const {
  return std::accumulate(data_.begin(), data_.end(), 0.0);
}

bool NdArray::AllFinite() const {
  for (const double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Dot(const NdArray& a, const NdArray& b) {
  if (a.size() != b.size()) {
    throw ContractError("Dot: sizes differ " + ShapeToString(a.shape()) +
                        " vs " + ShapeToString(b.shape()));
  }
  double sum = 0.0;
  for (int64_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace numerics
}  // namespace epointda
