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

#ifndef EPOINTDA_NOISERENDER_COMPLETION_H_
#define EPOINTDA_NOISERENDER_COMPLETION_H_

#include <string>

#include "epointda/geometry/range_image.h"
#include "epointda/noiserender/gan.h"

namespace epointda {
namespace noiserender {

enum class CompletionBackend { kInterp, kAdversarial };

const char* CompletionBackendName(CompletionBackend backend);
CompletionBackend ParseCompletionBackend(const std::string& name);

struct CompletionConfig {
  CompletionBackend backend = CompletionBackend::kInterp;
  int window = 3;  // odd, >= 3

  void Validate() const;
};

// Fills dropped pixels. The interpolation backend repeatedly replaces every
// dropped pixel that has valid neighbors inside the window by their mean,
// treating pixels filled in earlier sweeps as valid, until none is left.
// The adversarial backend applies `bundle`'s real->sim generator. Labels
// are copied unchanged. Throws ContractError for an image without returns.
geometry::RangeImage CompleteImage(const geometry::RangeImage& image,
                                   const CompletionConfig& config,
                                   const GanBundle* bundle = nullptr);

}  // namespace noiserender
}  // namespace epointda

#endif  // EPOINTDA_NOISERENDER_COMPLETION_H_
