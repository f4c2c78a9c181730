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

#include "qmerge/merging.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "qmerge/distance.h"
#include "qmerge/entropy.h"
#include "qmerge/measure.h"

namespace qmerge {

namespace {

std::string unused_label(const Layout &layout, std::string base) {
    while (layout.contains(base)) base += '_';
    return base;
}

std::string unused_label(const Layout &a, const Layout &b, std::string base) {
    while (a.contains(base) || b.contains(base)) base += '_';
    return base;
}

Labels join(Labels a, const Labels &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

void check_roles(const Layout &layout, const MergeRoles &roles) {
    if (roles.alice.empty() || roles.bob.empty()) {
        throw std::invalid_argument("merging needs non-empty Alice and Bob groups");
    }
    const uint64_t a = layout.mask_of(roles.alice);
    const uint64_t b = layout.mask_of(roles.bob);
    const uint64_t r = layout.mask_of(roles.reference);
    if ((a & b) || (a & r) || (b & r)) {
        throw std::invalid_argument("Alice, Bob and reference groups overlap");
    }
    const uint64_t full = (layout.size() == 64) ? ~uint64_t{0} : (uint64_t{1} << layout.size()) - 1;
    if ((a | b | r) != full) {
        throw std::invalid_argument("Alice, Bob and reference groups do not cover " + layout.to_string());
    }
}

int64_t smallest_prime_factor(int64_t n) {
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) return p;
    }
    return n;
}

PureState max_entangled(const std::string &a, const std::string &b, int64_t dim) {
    Vector v = Vector::Zero(dim * dim);
    for (int64_t i = 0; i < dim; ++i) v(i * dim + i) = 1.0 / std::sqrt(static_cast<double>(dim));
    return PureState(Layout({Part{a, dim}, Part{b, dim}}), std::move(v), 1e-8);
}

/// Rows of `psi` permuted so that `first` come first, as a (rest x first)
/// column-major matrix: column x holds the amplitudes of shared index x.
Matrix shared_major(const PureState &psi, const Labels &first, Labels *rest_labels) {
    const Layout rest = psi.layout().complement(first);
    *rest_labels = rest.labels();
    PureState permuted = permute_subsystems(psi, join(first, *rest_labels));
    return Eigen::Map<const Matrix>(permuted.amplitudes().data(), rest.total_dim(),
                                    psi.layout().dim_of(first));
}

}  // namespace

MergeRoles MergeRoles::resolve(const Layout &layout, Labels alice, Labels bob) {
    MergeRoles roles{std::move(alice), std::move(bob), {}};
    const uint64_t used = layout.mask_of(roles.alice) | layout.mask_of(roles.bob);
    for (size_t i = 0; i < layout.size(); ++i) {
        if (!(used & (uint64_t{1} << i))) roles.reference.push_back(layout[i].label);
    }
    check_roles(layout, roles);
    return roles;
}

std::string boost_label_alice(int j) { return "A0." + std::to_string(j); }
std::string boost_label_bob(int j) { return "B0." + std::to_string(j); }

PureState epr_boost(const PureState &psi, int k, MergeRoles *roles) {
    if (k < 0) throw std::invalid_argument("EPR boost count must be >= 0");
    PureState out = psi;
    for (int j = 0; j < k; ++j) {
        out = tensor(out, max_entangled(boost_label_alice(j), boost_label_bob(j), 2));
        if (roles) {
            roles->alice.push_back(boost_label_alice(j));
            roles->bob.push_back(boost_label_bob(j));
        }
    }
    return out;
}

MergePlan plan_merge(const PureState &psi, int copies, double slack_bits, const MergeRoles &roles) {
    if (copies < 1) throw std::invalid_argument("copies must be >= 1");
    if (!(slack_bits >= 0.0)) throw std::invalid_argument("slack must be >= 0");
    check_roles(psi.layout(), roles);

    MergePlan plan;
    plan.copies = copies;
    plan.slack_bits = slack_bits;
    plan.conditional_entropy = EntropyReport(psi).conditional_entropy(roles.alice, roles.bob);
    const double total = copies * plan.conditional_entropy;
    plan.target_rate = total == 0.0 ? 0.0 : -total;
    if (plan.conditional_entropy > 1e-12) {
        plan.k_boost = static_cast<int>(std::ceil(total - 1e-9) + std::ceil(slack_bits - 1e-12));
    }

    const int64_t local = psi.layout().dim_of(roles.alice);
    double alice_dim = std::pow(static_cast<double>(local), copies) * std::pow(2.0, plan.k_boost);
    if (alice_dim > 9.0e15) throw CapExceeded("Alice dimension overflows");
    plan.alice_dim = static_cast<int64_t>(std::llround(alice_dim));

    const double budget = plan.k_boost - total - slack_bits;
    plan.warning = budget < -1e-9;
    const int64_t base = local > 1 ? smallest_prime_factor(local) : 2;
    int64_t block = 1;
    while (plan.alice_dim % (block * base) == 0 && std::log2(static_cast<double>(block * base)) <= budget + 1e-9) {
        block *= base;
    }
    plan.block_size = block;
    plan.outcomes = plan.alice_dim / block;
    plan.predicted_epr_bits = std::log2(static_cast<double>(block));
    plan.predicted_cbits = std::log2(static_cast<double>(plan.outcomes));
    return plan;
}

// --- Uhlmann recovery -------------------------------------------------------

Recovery recovery_isometry(const PureState &post, const PureState &target, const Labels &shared) {
    for (const auto &l : shared) {
        if (post.layout().dim_of(l) != target.layout().dim_of(l)) {
            throw std::invalid_argument("shared part '" + l + "' differs in dimension");
        }
    }
    Recovery rec;
    rec.shared = shared;
    const Matrix post_t = shared_major(post, shared, &rec.post_bob);
    const Matrix target_t = shared_major(target, shared, &rec.target_bob);
    if (target_t.rows() < post_t.rows()) {
        throw std::invalid_argument("target Bob dimension " + std::to_string(target_t.rows()) +
                                    " is smaller than the post-measurement Bob dimension " +
                                    std::to_string(post_t.rows()));
    }
    // overlap(V) = Tr(V K) with K = S^T conj(T), S and T the shared x Bob
    // amplitude matrices.
    const Matrix cross = post_t * target_t.adjoint();
    Eigen::BDCSVD<Matrix> svd(cross, Eigen::ComputeThinU | Eigen::ComputeThinV);
    rec.isometry = svd.matrixV() * svd.matrixU().adjoint();
    rec.trace_norm = svd.singularValues().sum();
    return rec;
}

PureState apply_recovery(const PureState &post, const Recovery &recovery, const Layout &target_layout) {
    Labels post_bob;
    const Matrix post_t = shared_major(post, recovery.shared, &post_bob);
    if (post_bob != recovery.post_bob || recovery.isometry.cols() != post_t.rows()) {
        throw std::invalid_argument("recovery does not match the post-measurement state");
    }
    const Matrix out_t = recovery.isometry * post_t;
    Vector amplitudes = Eigen::Map<const Vector>(out_t.data(), out_t.size());
    const Labels order = join(recovery.shared, recovery.target_bob);
    PureState grouped(target_layout.reordered(order), std::move(amplitudes), 1e-8);
    return permute_subsystems(grouped, target_layout.labels());
}

// --- simulator --------------------------------------------------------------

struct MergeSimulator::Impl {
    MergePlan plan;
    MergeOptions options;
    MergeRoles roles;  // after copies and boost
    std::string fused_label;
    PureState fused;
    PureState target;
    Labels shared;
    Labels reference;
    DensityOperator ideal;                        // I/L (x) rho_R^{(x)n}
    std::optional<DensityOperator> reference_state;  // rho_R^{(x)n}

    Impl(const PureState &psi, const MergePlan &p, const MergeRoles &input_roles, const MergeOptions &opts);
};

namespace {

PureState build_fused(const PureState &copies, int k_boost, MergeRoles *roles, std::string *fused_label) {
    PureState boosted = epr_boost(copies, k_boost, roles);
    *fused_label = unused_label(boosted.layout(), "A*");
    return merge_subsystems(boosted, roles->alice, *fused_label);
}

}  // namespace

MergeSimulator::Impl::Impl(const PureState &psi, const MergePlan &p, const MergeRoles &input_roles,
                           const MergeOptions &opts)
    : plan(p),
      options(opts),
      fused(PureState::basis(Layout::single("x", 1), {0})),
      target(fused),
      ideal(DensityOperator::maximally_mixed(Layout::single("x", 1))) {
    check_roles(psi.layout(), input_roles);
    const int n = plan.copies;
    const double log_dim = n * std::log2(static_cast<double>(psi.dim())) + 2.0 * plan.k_boost;
    if (log_dim > std::log2(static_cast<double>(options.dim_cap)) + 1e-9) {
        throw CapExceeded("merging state of 2^" + std::to_string(log_dim) + " amplitudes exceeds the cap of " +
                          std::to_string(options.dim_cap));
    }

    PureState copies = tensor_power(psi, n);
    for (int i = 0; i < n; ++i) {
        for (const auto &l : input_roles.alice) roles.alice.push_back(copy_label(l, i));
        for (const auto &l : input_roles.bob) roles.bob.push_back(copy_label(l, i));
        for (const auto &l : input_roles.reference) roles.reference.push_back(copy_label(l, i));
    }
    roles.alice = copies.layout().canonical(roles.alice);
    roles.bob = copies.layout().canonical(roles.bob);
    roles.reference = copies.layout().canonical(roles.reference);
    const Labels alice_copies = roles.alice;

    fused = build_fused(copies, plan.k_boost, &roles, &fused_label);
    const int64_t alice_dim = fused.layout().dim_of(fused_label);
    if (alice_dim != plan.alice_dim || plan.block_size * plan.outcomes != alice_dim || plan.block_size < 1) {
        throw std::invalid_argument("merge plan is inconsistent with the input state");
    }

    const int64_t L = plan.block_size;
    const std::string a1 = unused_label(fused.layout(), "A1");
    reference = roles.reference;
    shared = join({a1}, reference);

    std::map<std::string, std::string> renames;
    for (const auto &l : alice_copies) renames[l] = l + "'";
    PureState moved = relabel(copies, renames);
    const std::string b1 = unused_label(moved.layout(), fused.layout(), "B1");
    target = tensor(max_entangled(a1, b1, L), moved);

    const int64_t post_bob = fused.layout().dim_of(roles.bob);
    const int64_t target_bob = target.layout().complement(shared).total_dim();
    if (target_bob < post_bob) {
        const int64_t pad = (post_bob + target_bob - 1) / target_bob;
        const std::string junk = unused_label(target.layout(), fused.layout(), "J");
        target = tensor(target, PureState::basis(Layout::single(junk, pad), {0}));
    }
    if (target.dim() > options.dim_cap) {
        throw CapExceeded("merging target of " + std::to_string(target.dim()) + " amplitudes exceeds the cap");
    }

    DensityOperator mixed = DensityOperator::maximally_mixed(Layout::single(a1, L));
    if (reference.empty()) {
        ideal = mixed;
    } else {
        reference_state = partial_trace(copies, reference);
        ideal = tensor(mixed, *reference_state);
    }
}

MergeSimulator::MergeSimulator(const PureState &psi, const MergePlan &plan, const MergeRoles &roles,
                               const MergeOptions &options)
    : impl_(std::make_unique<Impl>(psi, plan, roles, options)) {}

MergeSimulator::~MergeSimulator() = default;
MergeSimulator::MergeSimulator(MergeSimulator &&) noexcept = default;

const MergePlan &MergeSimulator::plan() const { return impl_->plan; }
const PureState &MergeSimulator::target() const { return impl_->target; }
const Labels &MergeSimulator::shared_labels() const { return impl_->shared; }

Matrix MergeSimulator::draw_unitary(Rng &rng) const {
    if (impl_->options.alice_unitary) {
        const Matrix &w = *impl_->options.alice_unitary;
        if (w.rows() != impl_->plan.alice_dim || w.cols() != impl_->plan.alice_dim) {
            throw std::invalid_argument("fixed measurement basis must be " + std::to_string(impl_->plan.alice_dim) +
                                        "-dimensional");
        }
        return w;
    }
    return haar_unitary(impl_->plan.alice_dim, rng);
}

MergeOutcome MergeSimulator::outcome(const Matrix &unitary, int64_t k) const {
    const Impl &s = *impl_;
    BlockOutcome branch = block_branch(s.fused, s.fused_label, unitary, s.plan.block_size, k, s.shared.front());
    const DensityOperator sigma = partial_trace(branch.post, s.shared);

    MergeOutcome out;
    out.outcome_index = k;
    out.probability = branch.probability;
    out.decoupling_error = trace_distance(sigma, s.ideal);
    out.uhlmann_fidelity = fidelity(sigma, s.ideal);

    const Recovery rec = recovery_isometry(branch.post, s.target, s.shared);
    const PureState rebuilt = apply_recovery(branch.post, rec, s.target.layout());
    out.achieved_fidelity = std::clamp(overlap_squared(s.target, rebuilt), 0.0, 1.0);

    out.epr_net_bits = s.plan.predicted_epr_bits - s.plan.k_boost;
    out.cbits = s.plan.predicted_cbits;
    return out;
}

MergeOutcome MergeSimulator::run(Rng &rng) const {
    const Matrix w = draw_unitary(rng);
    const BlockOutcome sampled = block_measure(impl_->fused, impl_->fused_label, w, impl_->plan.block_size, rng,
                                               impl_->shared.front());
    return outcome(w, sampled.outcome);
}

std::vector<MergeOutcome> MergeSimulator::all_outcomes(const Matrix &unitary) const {
    const Impl &s = *impl_;
    if (s.plan.outcomes > s.options.exhaustive_cap) {
        throw CapExceeded(std::to_string(s.plan.outcomes) + " outcomes exceed the exhaustive cap of " +
                          std::to_string(s.options.exhaustive_cap));
    }
    const auto probs = block_probabilities(s.fused, s.fused_label, unitary, s.plan.block_size);
    std::vector<MergeOutcome> out;
    for (size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] >= kMinBranchProbability) out.push_back(outcome(unitary, static_cast<int64_t>(k)));
    }
    return out;
}

double MergeSimulator::ensemble_reference_distance(const Matrix &unitary) const {
    const Impl &s = *impl_;
    if (s.plan.outcomes > s.options.ensemble_cap) {
        throw CapExceeded(std::to_string(s.plan.outcomes) + " outcomes exceed the ensemble cap of " +
                          std::to_string(s.options.ensemble_cap));
    }
    if (!s.reference_state) return 0.0;
    const auto probs = block_probabilities(s.fused, s.fused_label, unitary, s.plan.block_size);
    Matrix average = Matrix::Zero(s.reference_state->dim(), s.reference_state->dim());
    for (size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] < kMinBranchProbability) continue;
        BlockOutcome branch = block_branch(s.fused, s.fused_label, unitary, s.plan.block_size,
                                           static_cast<int64_t>(k), s.shared.front());
        average += branch.probability * partial_trace(branch.post, s.reference).matrix();
    }
    return trace_distance(DensityOperator::unchecked(s.reference_state->layout(), std::move(average)),
                          *s.reference_state);
}

MergeOutcome run_merge(const PureState &psi, const MergePlan &plan, Rng &rng, const MergeRoles &roles,
                       const MergeOptions &options) {
    return MergeSimulator(psi, plan, roles, options).run(rng);
}

double ensemble_reference_check(const PureState &psi, const MergePlan &plan, const Matrix &unitary,
                                const MergeRoles &roles, const MergeOptions &options) {
    return MergeSimulator(psi, plan, roles, options).ensemble_reference_distance(unitary);
}

// --- Monte Carlo curves -----------------------------------------------------

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty sample");
    std::sort(values.begin(), values.end());
    const size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

Rng trial_rng(uint64_t master_seed, int copies, int trial) {
    return Rng(master_seed, (static_cast<uint64_t>(copies) << 32) | static_cast<uint32_t>(trial));
}

std::vector<CurveRow> monte_carlo_merge(const PureState &psi, const std::vector<int> &copies, int trials,
                                        double slack_bits, uint64_t master_seed, const MergeRoles &roles,
                                        const MonteCarloOptions &options) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<CurveRow> rows;
    for (int n : copies) {
        CurveRow row;
        row.copies = n;
        row.trials = trials;
        row.plan = plan_merge(psi, n, slack_bits, roles);
        row.epr_net_bits = row.plan.predicted_epr_bits - row.plan.k_boost;
        row.cbits = row.plan.predicted_cbits;

        std::optional<MergeSimulator> sim;
        try {
            sim.emplace(psi, row.plan, roles, options.merge);
        } catch (const CapExceeded &) {
            row.skipped = true;
            rows.push_back(row);
            continue;
        }

        std::vector<MergeOutcome> results(static_cast<size_t>(trials));
        unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
        workers = std::min<unsigned>(workers, static_cast<unsigned>(trials));
        std::vector<std::exception_ptr> errors(workers);
        auto work = [&](unsigned w) {
            try {
                for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(workers)) {
                    Rng rng = trial_rng(master_seed, n, t);
                    results[static_cast<size_t>(t)] = sim->run(rng);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto &t : pool) t.join();
        }
        for (const auto &e : errors) {
            if (e) std::rethrow_exception(e);
        }

        std::vector<double> dec, fid;
        for (const auto &r : results) {
            dec.push_back(r.decoupling_error);
            fid.push_back(r.achieved_fidelity);
            row.max_uhlmann_gap = std::max(row.max_uhlmann_gap, std::abs(r.achieved_fidelity - r.uhlmann_fidelity));
        }
        auto mean = [](const std::vector<double> &v) {
            double s = 0.0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };
        row.decoupling_mean = mean(dec);
        row.decoupling_median = median(dec);
        row.decoupling_min = *std::min_element(dec.begin(), dec.end());
        row.decoupling_max = *std::max_element(dec.begin(), dec.end());
        row.fidelity_mean = mean(fid);
        row.fidelity_median = median(fid);
        row.fidelity_min = *std::min_element(fid.begin(), fid.end());
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qmerge
