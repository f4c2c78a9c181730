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

#ifndef QMERGE_MERGING_H
#define QMERGE_MERGING_H

#include <memory>
#include <optional>
#include <vector>

#include "qmerge/random.h"
#include "qmerge/state.h"

namespace qmerge {

/// Which labels of a tripartite pure state belong to Alice, Bob and the
/// reference. The reference may be empty (a pure AB state).
struct MergeRoles {
    Labels alice;
    Labels bob;
    Labels reference;

    /// Alice and Bob as given; the reference is every other label.
    static MergeRoles resolve(const Layout &layout, Labels alice = {"A"}, Labels bob = {"B"});
};

struct MergePlan {
    int copies = 1;
    /// Alice's residual dimension L after the coarse-grained measurement.
    int64_t block_size = 1;
    /// Number of outcomes N = D / L.
    int64_t outcomes = 1;
    /// Alice's composite dimension D over all copies and boost pairs.
    int64_t alice_dim = 1;
    /// EPR pairs invested up front.
    int k_boost = 0;
    /// Per-copy S(A|B) of the input.
    double conditional_entropy = 0.0;
    double slack_bits = 0.0;
    double predicted_epr_bits = 0.0;
    double predicted_cbits = 0.0;
    /// -n S(A|B).
    double target_rate = 0.0;
    /// Set when no L >= 1 meets the entropy budget; L = 1 is used anyway.
    bool warning = false;
};

struct MergeOutcome {
    int64_t outcome_index = 0;
    double probability = 0.0;
    /// Trace distance between sigma_{A1 R} and I/L (x) rho_R^{(x)n}.
    double decoupling_error = 0.0;
    /// F(sigma_{A1 R}, I/L (x) rho_R^{(x)n}).
    double uhlmann_fidelity = 0.0;
    /// Fidelity of Bob's reconstruction with the target state.
    double achieved_fidelity = 0.0;
    double epr_net_bits = 0.0;
    double cbits = 0.0;

    bool operator==(const MergeOutcome &) const = default;
};

struct MergeOptions {
    /// Replaces the Haar draw with a fixed measurement basis (rows of W).
    std::optional<Matrix> alice_unitary;
    /// Largest pure-state dimension any intermediate may have.
    int64_t dim_cap = int64_t{1} << 20;
    /// Largest outcome count for exhaustive enumeration.
    int64_t exhaustive_cap = 256;
    /// Largest outcome count for ensemble_reference_check.
    int64_t ensemble_cap = 4096;
};

/// Labels of the j-th pre-shared EPR pair.
std::string boost_label_alice(int j);
std::string boost_label_bob(int j);

/// psi (x) Phi+^{(x)k}; the halves are labeled A0.j / B0.j and, if `roles`
/// is given, appended to its Alice and Bob groups.
PureState epr_boost(const PureState &psi, int k, MergeRoles *roles = nullptr);

/// Chooses the EPR boost and block size for n copies of psi. If S(A|B) > 0
/// the boost is ceil(n S) + ceil(slack). L is the largest power of the
/// smallest prime factor of Alice's local dimension that divides D with
/// log2 L <= k - n S - slack.
MergePlan plan_merge(const PureState &psi, int copies, double slack_bits, const MergeRoles &roles);

/// Result of the Uhlmann step: the isometry Bob applies to his share of the
/// post-measurement state.
struct Recovery {
    /// target_bob dim x post_bob dim.
    Matrix isometry;
    Labels shared;
    Labels post_bob;
    Labels target_bob;
    /// Trace norm of the cross-overlap operator; its square is the best
    /// achievable fidelity.
    double trace_norm = 0.0;
};

/// Bob's isometry maximizing |<target| (I (x) V) |post>|, from the polar
/// decomposition of the overlap operator contracted over `shared`. Bob's
/// parts are everything outside `shared` in each state.
Recovery recovery_isometry(const PureState &post, const PureState &target, const Labels &shared);

/// (I (x) V)|post>, returned on the target's layout.
PureState apply_recovery(const PureState &post, const Recovery &recovery, const Layout &target_layout);

/// Precomputed state for repeated merging runs of one input and plan.
class MergeSimulator {
   public:
    MergeSimulator(const PureState &psi, const MergePlan &plan, const MergeRoles &roles,
                   const MergeOptions &options = {});
    ~MergeSimulator();
    MergeSimulator(MergeSimulator &&) noexcept;

    const MergePlan &plan() const;
    /// Target: |Phi_L>_{A1 B1} (x) psi^{(x)n} with Alice's parts relabeled X'.
    const PureState &target() const;
    /// Labels in the post-measurement state: A1 followed by the reference.
    const Labels &shared_labels() const;

    /// Measurement basis for one run: the fixed override or a Haar draw.
    Matrix draw_unitary(Rng &rng) const;
    MergeOutcome outcome(const Matrix &unitary, int64_t k) const;
    /// One run: draws W, samples an outcome, recovers.
    MergeOutcome run(Rng &rng) const;
    /// Every outcome with nonzero probability for a fixed W.
    std::vector<MergeOutcome> all_outcomes(const Matrix &unitary) const;
    /// Trace distance of sum_k p_k sigma_R^(k) to rho_R^{(x)n}.
    double ensemble_reference_distance(const Matrix &unitary) const;

   private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

MergeOutcome run_merge(const PureState &psi, const MergePlan &plan, Rng &rng, const MergeRoles &roles,
                       const MergeOptions &options = {});

double ensemble_reference_check(const PureState &psi, const MergePlan &plan, const Matrix &unitary,
                                const MergeRoles &roles, const MergeOptions &options = {});

struct CurveRow {
    int copies = 0;
    MergePlan plan;
    int trials = 0;
    bool skipped = false;
    double decoupling_mean = 0.0;
    double decoupling_median = 0.0;
    double decoupling_min = 0.0;
    double decoupling_max = 0.0;
    double fidelity_mean = 0.0;
    double fidelity_median = 0.0;
    double fidelity_min = 0.0;
    /// max |achieved_fidelity - uhlmann_fidelity| over the trials.
    double max_uhlmann_gap = 0.0;
    double epr_net_bits = 0.0;
    double cbits = 0.0;
};

struct MonteCarloOptions {
    MergeOptions merge;
    /// 0 selects std::thread::hardware_concurrency().
    unsigned workers = 0;
};

/// Seed of trial `trial` at `copies` copies under `master_seed`.
Rng trial_rng(uint64_t master_seed, int copies, int trial);

/// Runs `trials` independent merges for each n. Trial t at n copies uses
/// trial_rng(master_seed, n, t); results do not depend on the worker count.
/// Values of n whose dimension exceeds the cap are reported as skipped.
std::vector<CurveRow> monte_carlo_merge(const PureState &psi, const std::vector<int> &copies, int trials,
                                        double slack_bits, uint64_t master_seed, const MergeRoles &roles,
                                        const MonteCarloOptions &options = {});

/// Median of a non-empty sample (mean of the two middle values for even size).
double median(std::vector<double> values);

}  // namespace qmerge

#endif  // QMERGE_MERGING_H
