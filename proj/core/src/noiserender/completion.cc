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

#include "epointda/noiserender/completion.h"

#include <algorithm>

#include "epointda/geometry/tensor.h"

namespace epointda {
namespace noiserender {

const char* CompletionBackendName(CompletionBackend backend) {
  return backend == CompletionBackend::kInterp ? "interp" : "adversarial";
}

CompletionBackend ParseCompletionBackend(const std::string& name) {
  if (name == "interp") return CompletionBackend::kInterp;
  if (name == "adversarial") return CompletionBackend::kAdversarial;
  throw ContractError("unknown completion backend '" + name + "'");
}

void CompletionConfig::Validate() const {
  if (window < 3 || window % 2 == 0) {
    throw ContractError("CompletionConfig: window must be odd and >= 3");
  }
}

geometry::RangeImage CompleteImage(const geometry::RangeImage& image,
                                   const CompletionConfig& config,
                                   const GanBundle* bundle) {
  config.Validate();
  const auto& mask = image.mask();
  if (std::find(mask.begin(), mask.end(), uint8_t{1}) == mask.end()) {
    throw ContractError("complete_image: image has no valid pixel");
  }
  if (config.backend == CompletionBackend::kAdversarial) {
    if (bundle == nullptr) {
      throw ContractError("complete_image: adversarial backend needs a trained GanBundle");
    }
    const double scale = bundle->config().input_scale;
    const std::vector<const geometry::RangeImage*> batch{&image};
    const Variable out = bundle->GenerateSim(
        Variable::Constant(geometry::ImagesToTensor(batch, scale)),
        geometry::MasksToTensor(batch));
    return geometry::TensorToImage(out.value(), 0, scale, image.labels());
  }

  const int rows = image.rows();
  const int cols = image.cols();
  const int ch = image.channels();
  const int half = config.window / 2;
  std::vector<double> data = image.data();
  std::vector<uint8_t> valid = mask;
  std::vector<double> next;
  std::vector<uint8_t> next_valid;
  bool remaining = true;
  while (remaining) {
    remaining = false;
    next = data;
    next_valid = valid;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const size_t p = static_cast<size_t>(r) * cols + c;
        if (valid[p]) continue;
        double sum[8] = {0.0};
        int count = 0;
        for (int dr = -half; dr <= half; ++dr) {
          const int rr = r + dr;
          if (rr < 0 || rr >= rows) continue;
          for (int dc = -half; dc <= half; ++dc) {
            const int cc = c + dc;
            if (cc < 0 || cc >= cols) continue;
            const size_t q = static_cast<size_t>(rr) * cols + cc;
            if (!valid[q]) continue;
            ++count;
            for (int k = 0; k < ch && k < 8; ++k) sum[k] += data[q * ch + k];
          }
        }
        if (count == 0) {
          remaining = true;
          continue;
        }
        for (int k = 0; k < ch; ++k) next[p * ch + k] = sum[k] / count;
        next_valid[p] = 1;
      }
    }
    data.swap(next);
    valid.swap(next_valid);
  }
  geometry::RangeImage out(rows, cols, ch);
  out.Assign(std::move(data), image.labels());
  return out;
}

}  // namespace noiserender
}  // namespace epointda
