// Copyright 2026 The qmerge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMERGE_SRC_INTERNAL_H
#define QMERGE_SRC_INTERNAL_H

#include <vector>

#include "qmerge/state.h"

namespace qmerge::internal {

/// Dimensions before, of, and after one part in a layout.
struct Split {
    int64_t pre;
    int64_t dim;
    int64_t post;
};

Split split_dims(const Layout &layout, std::string_view label);

/// Treats each column of `data` as a (pre, dx, post) row-major tensor and
/// contracts `op` (dy x dx) into the middle index.
Matrix apply_left(const Matrix &data, int64_t pre, int64_t dx, int64_t post, const Matrix &op);

}  // namespace qmerge::internal

#endif  // QMERGE_SRC_INTERNAL_H
