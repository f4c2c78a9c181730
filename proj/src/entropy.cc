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

#include "qmerge/entropy.h"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qmerge {

double entropy_of_spectrum(const Eigen::VectorXd &eigenvalues) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double p = eigenvalues(i);
        if (p > 0.0) s -= p * std::log2(p);
    }
    return s;
}

double von_neumann_entropy(const DensityOperator &rho) { return entropy_of_spectrum(rho.spectrum()); }

double entropy(const DensityOperator &rho, const Labels &subset) {
    if (subset.empty()) return 0.0;
    return von_neumann_entropy(partial_trace(rho, subset));
}

namespace {

void require_disjoint(const Layout &layout, const Labels &a, const Labels &b) {
    const uint64_t ma = layout.mask_of(a);
    const uint64_t mb = layout.mask_of(b);
    if (ma & mb) {
        throw std::invalid_argument("label sets overlap");
    }
    if (a.empty()) {
        throw std::invalid_argument("first label set is empty");
    }
}

Labels join(const Labels &a, const Labels &b) {
    Labels out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

double conditional_entropy(const DensityOperator &rho, const Labels &a, const Labels &b) {
    require_disjoint(rho.layout(), a, b);
    return entropy(rho, join(a, b)) - entropy(rho, b);
}

double mutual_information(const DensityOperator &rho, const Labels &a, const Labels &b) {
    require_disjoint(rho.layout(), a, b);
    return entropy(rho, a) + entropy(rho, b) - entropy(rho, join(a, b));
}

double coherent_information(const DensityOperator &rho, const Labels &a, const Labels &b, CoherentForm form) {
    const double value = -conditional_entropy(rho, a, b);
    return form == CoherentForm::kLegacy ? std::max(value, 0.0) : value;
}

double ssa_margin(const DensityOperator &rho, const Labels &a, const Labels &b, const Labels &c) {
    require_disjoint(rho.layout(), a, join(b, c));
    if (rho.layout().mask_of(b) & rho.layout().mask_of(c)) {
        throw std::invalid_argument("label sets overlap");
    }
    return conditional_entropy(rho, a, b) - conditional_entropy(rho, a, join(b, c));
}

// --- EntropyReport ----------------------------------------------------------

EntropyReport::EntropyReport(DensityOperator rho) : state_(std::move(rho)) {}
EntropyReport::EntropyReport(PureState psi) : state_(std::move(psi)) {}

const Layout &EntropyReport::layout() const {
    return std::visit([](const auto &s) -> const Layout & { return s.layout(); }, state_);
}

double EntropyReport::entropy_of_mask(uint64_t mask) const {
    if (mask == 0) return 0.0;
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(mask); it != cache_.end()) return it->second;
    }
    const Layout &lay = layout();
    double value;
    if (const auto *psi = std::get_if<PureState>(&state_)) {
        const uint64_t full = lay.size() == 64 ? ~uint64_t{0} : (uint64_t{1} << lay.size()) - 1;
        const uint64_t rest = full & ~mask;
        if (rest == 0) {
            value = 0.0;
        } else {
            const uint64_t smaller = lay.dim_of(lay.labels_of(rest)) < lay.dim_of(lay.labels_of(mask)) ? rest : mask;
            value = von_neumann_entropy(partial_trace(*psi, lay.labels_of(smaller)));
        }
    } else {
        value = von_neumann_entropy(partial_trace(std::get<DensityOperator>(state_), lay.labels_of(mask)));
    }
    std::lock_guard lock(mutex_);
    cache_.emplace(mask, value);
    return value;
}

double EntropyReport::entropy(const Labels &subset) const { return entropy_of_mask(layout().mask_of(subset)); }

void EntropyReport::check_disjoint(const Labels &a, const Labels &b) const { require_disjoint(layout(), a, b); }

double EntropyReport::conditional_entropy(const Labels &a, const Labels &b) const {
    check_disjoint(a, b);
    return entropy(join(a, b)) - entropy(b);
}

double EntropyReport::mutual_information(const Labels &a, const Labels &b) const {
    check_disjoint(a, b);
    return entropy(a) + entropy(b) - entropy(join(a, b));
}

double EntropyReport::coherent_information(const Labels &a, const Labels &b, CoherentForm form) const {
    const double value = -conditional_entropy(a, b);
    return form == CoherentForm::kLegacy ? std::max(value, 0.0) : value;
}

std::vector<std::pair<Labels, double>> EntropyReport::entries() const {
    std::lock_guard lock(mutex_);
    std::vector<std::pair<Labels, double>> out;
    out.reserve(cache_.size());
    for (const auto &[mask, value] : cache_) {
        out.emplace_back(layout().labels_of(mask), value);
    }
    return out;
}

}  // namespace qmerge
