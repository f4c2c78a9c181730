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

#include "qmerge/random.h"

#include <cmath>

namespace qmerge {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(uint64_t seed, uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ stream)), engine_(key_) {}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

Matrix haar_unitary(int64_t dim, Rng &rng) {
    if (dim < 1) throw std::invalid_argument("unitary dimension must be >= 1");
    Matrix z(dim, dim);
    for (int64_t j = 0; j < dim; ++j) {
        for (int64_t i = 0; i < dim; ++i) {
            z(i, j) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix &r = qr.matrixQR();
    for (int64_t j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(j) *= d / mag;
    }
    return q;
}

PureState random_pure_state(const Layout &layout, Rng &rng) {
    Vector v(layout.total_dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = rng.complex_normal();
    }
    return PureState::normalized(layout, std::move(v));
}

DensityOperator random_density(const Layout &layout, int64_t env_dim, Rng &rng) {
    std::string env = "#env";
    while (layout.contains(env)) env += '_';
    PureState psi = random_pure_state(layout.concat(Layout::single(env, env_dim)), rng);
    return partial_trace(psi, layout.labels());
}

}  // namespace qmerge
