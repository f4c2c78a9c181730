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

#include "qmerge/measure.h"

#include <stdexcept>

#include "internal.h"

namespace qmerge {

namespace {

void check_measurement(const PureState &psi, std::string_view party, const Matrix &unitary, int64_t block_size) {
    const int64_t d = psi.layout().dim_of(party);
    if (unitary.rows() != d || unitary.cols() != d) {
        throw std::invalid_argument("measurement unitary must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    if (block_size < 1 || d % block_size != 0) {
        throw std::invalid_argument("block size " + std::to_string(block_size) + " does not divide dimension " +
                                    std::to_string(d));
    }
}

}  // namespace

std::vector<double> block_probabilities(const PureState &psi, std::string_view party, const Matrix &unitary,
                                        int64_t block_size) {
    check_measurement(psi, party, unitary, block_size);
    const internal::Split s = internal::split_dims(psi.layout(), party);
    const Matrix rotated = internal::apply_left(psi.amplitudes(), s.pre, s.dim, s.post, unitary);

    std::vector<double> probs(static_cast<size_t>(s.dim / block_size), 0.0);
    for (int64_t i = 0; i < s.pre; ++i) {
        for (int64_t x = 0; x < s.dim; ++x) {
            probs[static_cast<size_t>(x / block_size)] +=
                rotated.col(0).segment((i * s.dim + x) * s.post, s.post).squaredNorm();
        }
    }
    return probs;
}

BlockOutcome block_branch(const PureState &psi, std::string_view party, const Matrix &unitary, int64_t block_size,
                          int64_t outcome, const std::string &new_label) {
    check_measurement(psi, party, unitary, block_size);
    const int64_t count = psi.layout().dim_of(party) / block_size;
    if (outcome < 0 || outcome >= count) {
        throw std::invalid_argument("outcome index out of range");
    }
    if (new_label != party && psi.layout().contains(new_label)) {
        throw std::invalid_argument("label '" + new_label + "' already in layout");
    }
    Layout layout;
    Vector branch = apply_local(psi, party, unitary.middleRows(outcome * block_size, block_size), &layout, new_label);
    const double p = branch.squaredNorm();
    if (p < kMinBranchProbability) {
        throw std::domain_error("measurement branch " + std::to_string(outcome) + " has zero probability");
    }
    branch /= std::sqrt(p);
    return BlockOutcome{outcome, p, PureState(std::move(layout), std::move(branch), 1e-8)};
}

BlockOutcome block_measure(const PureState &psi, std::string_view party, const Matrix &unitary, int64_t block_size,
                           Rng &rng, const std::string &new_label) {
    std::vector<double> probs = block_probabilities(psi, party, unitary, block_size);
    double total = 0.0;
    for (double &p : probs) {
        if (p < kMinBranchProbability) p = 0.0;
        total += p;
    }
    const double u = rng.uniform() * total;
    double acc = 0.0;
    int64_t chosen = -1;
    for (size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] == 0.0) continue;
        chosen = static_cast<int64_t>(k);
        acc += probs[k];
        if (u < acc) break;
    }
    return block_branch(psi, party, unitary, block_size, chosen, new_label);
}

}  // namespace qmerge
