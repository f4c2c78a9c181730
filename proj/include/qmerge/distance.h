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

#ifndef QMERGE_DISTANCE_H
#define QMERGE_DISTANCE_H

#include "qmerge/state.h"

namespace qmerge {

/// Squared Uhlmann fidelity (Tr |sqrt(rho) sqrt(sigma)|)^2, clamped to [0, 1].
double fidelity(const DensityOperator &rho, const DensityOperator &sigma);

/// Half the trace norm of rho - sigma.
double trace_distance(const DensityOperator &rho, const DensityOperator &sigma);

/// |<a|b>|^2 for states on the same layout.
double overlap_squared(const PureState &a, const PureState &b);

}  // namespace qmerge

#endif  // QMERGE_DISTANCE_H
