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

#include "qmerge/distance.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qmerge {

namespace {

void check_same_layout(const Layout &a, const Layout &b) {
    if (!(a == b)) {
        throw std::invalid_argument("layout mismatch: " + a.to_string() + " vs " + b.to_string());
    }
}

// X with m = X X^dagger, keeping eigenvalues above rounding noise.
Matrix psd_factor(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const Eigen::VectorXd &ev = es.eigenvalues();
    const double floor = 1e-14 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > floor) kept.push_back(i);
    }
    Matrix x(m.rows(), static_cast<Eigen::Index>(kept.size()));
    for (size_t k = 0; k < kept.size(); ++k) {
        x.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(kept[k]) * std::sqrt(ev(kept[k]));
    }
    return x;
}

}  // namespace

double fidelity(const DensityOperator &rho, const DensityOperator &sigma) {
    check_same_layout(rho.layout(), sigma.layout());
    const Matrix product = psd_factor(rho.matrix()).adjoint() * psd_factor(sigma.matrix());
    Eigen::BDCSVD<Matrix> svd(product);
    const double root = svd.singularValues().sum();
    return std::clamp(root * root, 0.0, 1.0);
}

double trace_distance(const DensityOperator &rho, const DensityOperator &sigma) {
    check_same_layout(rho.layout(), sigma.layout());
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() - sigma.matrix(), Eigen::EigenvaluesOnly);
    return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

double overlap_squared(const PureState &a, const PureState &b) {
    check_same_layout(a.layout(), b.layout());
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace qmerge
