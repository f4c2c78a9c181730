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

#ifndef QMERGE_MEASURE_H
#define QMERGE_MEASURE_H

#include <vector>

#include "qmerge/random.h"
#include "qmerge/state.h"

namespace qmerge {

/// Branches with probability below this are never sampled.
inline constexpr double kMinBranchProbability = 1e-12;

struct BlockOutcome {
    int64_t outcome;
    double probability;
    /// Post-measurement state with the measured party replaced by an
    /// L-dimensional part (W restricted to block k).
    PureState post;
};

/// Coarse-grained measurement of one party in the basis given by the rows of
/// `unitary`. Outcome k projects onto W^dagger Pi_k W, where Pi_k spans the
/// computational indices [k L, (k+1) L).
///
/// Returns p_k for every k; throws if L does not divide the party dimension
/// or `unitary` has the wrong shape.
std::vector<double> block_probabilities(const PureState &psi, std::string_view party, const Matrix &unitary,
                                        int64_t block_size);

/// The branch for a specific outcome. Throws std::domain_error if its
/// probability is below kMinBranchProbability.
BlockOutcome block_branch(const PureState &psi, std::string_view party, const Matrix &unitary, int64_t block_size,
                          int64_t outcome, const std::string &new_label = "A1");

/// Samples an outcome by the Born rule, excluding zero-probability branches.
BlockOutcome block_measure(const PureState &psi, std::string_view party, const Matrix &unitary, int64_t block_size,
                           Rng &rng, const std::string &new_label = "A1");

}  // namespace qmerge

#endif  // QMERGE_MEASURE_H
