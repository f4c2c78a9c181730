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

#ifndef QMERGE_RANDOM_H
#define QMERGE_RANDOM_H

#include <cstdint>
#include <random>

#include "qmerge/state.h"

namespace qmerge {

/// Seeded generator with a splittable stream scheme.
///
/// Rng(seed, stream) seeds a 64-bit Mersenne twister from
/// splitmix64(splitmix64(seed) ^ stream), so independent tasks can derive
/// disjoint generators from one master seed without drawing from it.
class Rng {
   public:
    explicit Rng(uint64_t seed, uint64_t stream = 0);

    /// Child generator for `stream`; does not advance this generator.
    Rng split(uint64_t stream) const { return Rng(key_, stream); }

    uint64_t key() const { return key_; }
    double normal() { return normal_(engine_); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    Complex complex_normal();

    std::mt19937_64 &engine() { return engine_; }

   private:
    uint64_t key_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

uint64_t splitmix64(uint64_t x);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the column
/// phases fixed so that R has a positive real diagonal.
Matrix haar_unitary(int64_t dim, Rng &rng);

/// Haar-random pure state (normalized complex Gaussian vector).
PureState random_pure_state(const Layout &layout, Rng &rng);

/// Random mixed state from the induced measure: partial trace of a Haar
/// pure state on layout (x) an environment of dimension `env_dim`.
DensityOperator random_density(const Layout &layout, int64_t env_dim, Rng &rng);

}  // namespace qmerge

#endif  // QMERGE_RANDOM_H
