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

#ifndef EPOINTDA_NUMERICS_CHECKPOINT_H_
#define EPOINTDA_NUMERICS_CHECKPOINT_H_

#include <string>

#include "epointda/numerics/layers.h"

namespace epointda {
namespace numerics {

// Checkpoint layout, all integers little-endian:
//   "EPCK" u8 version=1 u32 entry_count
//   entry_count x { u16 name_length, name bytes, u8 rank, u32 dims[rank] }
//   then every entry's values as float32, in manifest order.
void SaveCheckpoint(const std::string& path, const ParameterList& params);

// Overwrites the values of `params` by name. Every listed entry must be
// present in the file with a matching shape.
void LoadCheckpoint(const std::string& path, const ParameterList& params);

}  // namespace numerics
}  // namespace epointda

#endif  // EPOINTDA_NUMERICS_CHECKPOINT_H_
