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

#ifndef EPOINTDA_NUMERICS_NDARRAY_H_
#define EPOINTDA_NUMERICS_NDARRAY_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "epointda/errors.h"

namespace epointda {
namespace numerics {

using Shape = std::vector<int64_t>;

std::string ShapeToString(const Shape& shape);
int64_t ShapeSize(const Shape& shape);

// Dense row-major array of doubles. Operations never mutate their inputs;
// the mutable accessors exist for building arrays before they are shared.
class NdArray {
 public:
  NdArray() = default;
  explicit NdArray(Shape shape, double fill = 0.0);
  NdArray(Shape shape, std::vector<double> data);

  static NdArray Scalar(double value) { return NdArray({}, {value}); }

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int axis) const;
  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double operator[](int64_t i) const { return data_[i]; }
  double& operator[](int64_t i) { return data_[i]; }

  // Multi-index access, bounds-checked.
  double at(std::initializer_list<int64_t> index) const;
  double& at(std::initializer_list<int64_t> index);

  // Same data viewed with another shape of equal size.
  NdArray Reshaped(Shape shape) const;

  double Sum() const;
  bool AllFinite() const;

 private:
  int64_t Offset(std::initializer_list<int64_t> index) const;

  Shape shape_;
  std::vector<double> data_;
};

double Dot(const NdArray& a, const NdArray& b);

}  // namespace numerics
}  // namespace epointda

#endif  // EPOINTDA_NUMERICS_NDARRAY_H_
