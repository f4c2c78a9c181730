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

#ifndef QMERGE_ENTROPY_H
#define QMERGE_ENTROPY_H

#include <map>
#include <mutex>
#include <variant>
#include <vector>

#include "qmerge/state.h"

namespace qmerge {

// All quantities are in bits.

/// -sum lambda log2 lambda over the clamped spectrum, with 0 log 0 = 0.
double von_neumann_entropy(const DensityOperator &rho);
double entropy_of_spectrum(const Eigen::VectorXd &eigenvalues);

/// S(subset) of the reduced state; 0 for an empty subset.
double entropy(const DensityOperator &rho, const Labels &subset);

/// S(a|b) = S(ab) - S(b). Signed.
double conditional_entropy(const DensityOperator &rho, const Labels &a, const Labels &b);
/// I(a:b) = S(a) + S(b) - S(ab).
double mutual_information(const DensityOperator &rho, const Labels &a, const Labels &b);

enum class CoherentForm {
    kSigned,  ///< I(a>b) = -S(a|b)
    kLegacy,  ///< max{S(b) - S(ab), 0}
};

double coherent_information(const DensityOperator &rho, const Labels &a, const Labels &b,
                            CoherentForm form = CoherentForm::kSigned);

/// S(a|b) - S(a|bc); nonnegative for every state by strong subadditivity.
double ssa_margin(const DensityOperator &rho, const Labels &a, const Labels &b, const Labels &c);

/// Memoized subset entropies of one state.
///
/// Subsets are keyed by their canonical (layout-ordered) form. For a pure
/// global state S(T) is evaluated on whichever of T or its complement is
/// smaller. Safe to share between threads.
class EntropyReport {
   public:
    explicit EntropyReport(DensityOperator rho);
    explicit EntropyReport(PureState psi);

    const Layout &layout() const;
    bool is_pure() const { return std::holds_alternative<PureState>(state_); }

    double entropy(const Labels &subset) const;
    double conditional_entropy(const Labels &a, const Labels &b) const;
    double mutual_information(const Labels &a, const Labels &b) const;
    double coherent_information(const Labels &a, const Labels &b,
                                CoherentForm form = CoherentForm::kSigned) const;

    /// Every subset evaluated so far, in increasing bitmask order.
    std::vector<std::pair<Labels, double>> entries() const;

   private:
    double entropy_of_mask(uint64_t mask) const;
    void check_disjoint(const Labels &a, const Labels &b) const;

    std::variant<PureState, DensityOperator> state_;
    mutable std::mutex mutex_;
    mutable std::map<uint64_t, double> cache_;
};

}  // namespace qmerge

#endif  // QMERGE_ENTROPY_H
