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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.h"
#include "qmerge/distance.h"
#include "qmerge/entropy.h"
#include "qmerge/io.h"

using namespace qmerge;

namespace {

PureState pure_preset(const char *name) {
    AnyState s = parse_state(name);
    if (auto *p = std::get_if<PureState>(&s)) return *p;
    return purify(std::get<DensityOperator>(s), "R");
}

Matrix hadamard_power(int n) {
    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) {
        Matrix next(out.rows() * 2, out.cols() * 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) next.block(r * out.rows(), c * out.cols(), out.rows(), out.cols()) = h(r, c) * out;
        out = next;
    }
    return out;
}

Matrix sqrtm(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd v = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

// Trace-norm based fidelity, computed without the library.
double fidelity_oracle(const Matrix &a, const Matrix &b) {
    Matrix sa = sqrtm(a);
    Matrix inner = sqrtm(sa * b * sa);
    const double f = inner.trace().real();
    return f * f;
}

// Decoupling errors of `trials` runs of the L = 1 protocol on n copies of a
// qubit (A, B, R) state: measure all of Alice's qubits in a Haar basis and
// compare the reference's post-measurement state with rho_R^{(x)n}.
std::vector<double> decoupling_oracle(const oracle::Vector &psi, int n, int trials, uint64_t seed) {
    const long da = 1L << n, db = 1L << n, dr = 1L << n;
    // Amplitude tensor T[a][b][r] with a, b, r collecting the copies.
    oracle::Vector big = oracle::Vector::Zero(da * db * dr);
    for (long idx = 0; idx < da * db * dr; ++idx) {
        const long a = idx / (db * dr), b = (idx / dr) % db, r = idx % dr;
        oracle::Complex amp = 1.0;
        for (int c = 0; c < n; ++c) {
            const int shift = n - 1 - c;
            const long ac = (a >> shift) & 1, bc = (b >> shift) & 1, rc = (r >> shift) & 1;
            amp *= psi(ac * 4 + bc * 2 + rc);
        }
        big(idx) = amp;
    }
    oracle::Matrix rho_r = oracle::Matrix::Zero(dr, dr);
    for (long a = 0; a < da; ++a)
        for (long b = 0; b < db; ++b) {
            oracle::Vector v = big.segment((a * db + b) * dr, dr);
            rho_r += v * v.adjoint();
        }
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> errors;
    for (int t = 0; t < trials; ++t) {
        oracle::Matrix w = oracle::haar(static_cast<int>(da), gen);
        std::vector<oracle::Matrix> branches;
        std::vector<double> probs;
        for (long k = 0; k < da; ++k) {
            oracle::Matrix sigma = oracle::Matrix::Zero(dr, dr);
            for (long b = 0; b < db; ++b) {
                oracle::Vector v = oracle::Vector::Zero(dr);
                for (long a = 0; a < da; ++a) v += std::conj(w(a, k)) * big.segment((a * db + b) * dr, dr);
                sigma += v * v.adjoint();
            }
            probs.push_back(sigma.trace().real());
            branches.push_back(sigma);
        }
        double u = uni(gen), acc = 0.0;
        long pick = da - 1;
        for (long k = 0; k < da; ++k) {
            acc += probs[static_cast<size_t>(k)];
            if (u < acc) {
                pick = k;
                break;
            }
        }
        oracle::Matrix sigma = branches[static_cast<size_t>(pick)] / probs[static_cast<size_t>(pick)];
        errors.push_back(oracle::trace_norm_half(sigma - rho_r));
    }
    return errors;
}

}  // namespace

TEST(EprBoost, Examples) {
    auto epr = pure_preset("epr");
    EXPECT_EQ(epr_boost(epr, 0).amplitudes(), epr.amplitudes());

    auto ex1 = pure_preset("example1");
    MergeRoles roles = MergeRoles::resolve(ex1.layout());
    auto boosted = epr_boost(ex1, 1, &roles);
    EXPECT_EQ(roles.alice, (Labels{"A", boost_label_alice(0)}));
    EXPECT_EQ(roles.bob, (Labels{"B", boost_label_bob(0)}));
    EXPECT_NEAR(EntropyReport(boosted).conditional_entropy(roles.alice, roles.bob), 0.0, 1e-9);

    auto cc = pure_preset("cc-pure");
    MergeRoles cc_roles = MergeRoles::resolve(cc.layout());
    auto cc2 = epr_boost(cc, 2, &cc_roles);
    EXPECT_NEAR(EntropyReport(cc2).conditional_entropy(cc_roles.alice, cc_roles.bob), -2.0, 1e-9);
}

TEST(PlanMerge, Examples) {
    auto epr = pure_preset("epr");
    auto p = plan_merge(epr, 3, 0.0, MergeRoles::resolve(epr.layout()));
    EXPECT_EQ(p.k_boost, 0);
    EXPECT_EQ(p.block_size, 8);
    EXPECT_EQ(p.outcomes, 1);
    EXPECT_EQ(p.predicted_cbits, 0.0);
    EXPECT_NEAR(p.target_rate, 3.0, 1e-12);

    auto cc = pure_preset("cc-pure");
    p = plan_merge(cc, 2, 0.0, MergeRoles::resolve(cc.layout()));
    EXPECT_EQ(p.block_size, 1);
    EXPECT_EQ(p.outcomes, 4);
    EXPECT_EQ(p.predicted_cbits, 2.0);

    auto ex1 = pure_preset("example1");
    p = plan_merge(ex1, 1, 0.0, MergeRoles::resolve(ex1.layout()));
    EXPECT_EQ(p.k_boost, 1);
    EXPECT_EQ(p.alice_dim, 4);
    EXPECT_EQ(p.block_size, 1);
    EXPECT_EQ(p.outcomes, 4);
    EXPECT_FALSE(p.warning);
}

TEST(PlanMerge, RejectsBadInput) {
    auto epr = pure_preset("epr");
    EXPECT_THROW(plan_merge(epr, 0, 0.0, MergeRoles::resolve(epr.layout())), std::invalid_argument);
    EXPECT_THROW(plan_merge(epr, 1, -1.0, MergeRoles::resolve(epr.layout())), std::invalid_argument);
    EXPECT_THROW(MergeRoles::resolve(epr.layout(), {"A"}, {"A"}), std::invalid_argument);
}

TEST(RunMerge, SharedPairIsKept) {
    auto epr = pure_preset("epr");
    auto roles = MergeRoles::resolve(epr.layout());
    auto plan = plan_merge(epr, 1, 0.0, roles);
    ASSERT_EQ(plan.block_size, 2);
    Rng rng(1);
    auto out = run_merge(epr, plan, rng, roles);
    EXPECT_EQ(out.outcome_index, 0);
    EXPECT_NEAR(out.decoupling_error, 0.0, 1e-12);
    EXPECT_NEAR(out.achieved_fidelity, 1.0, 1e-12);
    EXPECT_EQ(out.epr_net_bits, 1.0);
    EXPECT_EQ(out.cbits, 0.0);
}

TEST(RunMerge, HadamardBasisOnCorrelatedState) {
    auto cc = pure_preset("cc-pure");
    auto roles = MergeRoles::resolve(cc.layout());
    for (int n : {1, 2}) {
        auto plan = plan_merge(cc, n, 0.0, roles);
        MergeOptions opt;
        opt.alice_unitary = hadamard_power(n);
        MergeSimulator sim(cc, plan, roles, opt);
        auto outs = sim.all_outcomes(hadamard_power(n));
        ASSERT_EQ(static_cast<int64_t>(outs.size()), int64_t{1} << n);
        for (const auto &o : outs) {
            EXPECT_NEAR(o.achieved_fidelity, 1.0, 1e-9);
            EXPECT_EQ(o.cbits, static_cast<double>(n));
            EXPECT_EQ(o.epr_net_bits, 0.0);
        }
        EXPECT_LE(sim.ensemble_reference_distance(hadamard_power(n)), 1e-10);
    }
}

TEST(RunMerge, TargetLayoutAndSharedLabels) {
    auto cc = pure_preset("cc-pure");
    auto roles = MergeRoles::resolve(cc.layout());
    MergeSimulator sim(cc, plan_merge(cc, 1, 0.0, roles), roles);
    EXPECT_EQ(sim.shared_labels().front(), "A1");
    EXPECT_TRUE(sim.target().layout().contains("B1"));
    EXPECT_NEAR(sim.target().amplitudes().norm(), 1.0, 1e-12);
}

TEST(Recovery, IdenticalStatesGiveIdentity) {
    Rng rng(2);
    auto psi = random_pure_state(Layout({{"S", 3}, {"B", 2}}), rng);
    auto rec = recovery_isometry(psi, psi, {"S"});
    EXPECT_LE(max_abs(rec.isometry - Matrix::Identity(2, 2)), 1e-10);
    EXPECT_NEAR(rec.trace_norm, 1.0, 1e-12);
    auto out = apply_recovery(psi, rec, psi.layout());
    EXPECT_NEAR(overlap_squared(out, psi), 1.0, 1e-12);
}

TEST(Recovery, MatchesUhlmannOracle) {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const int64_t ds = 2 + i % 3, dp = 1 + i % 4, dt = dp + i % 3;
        auto post = random_pure_state(Layout({{"S", ds}, {"P", dp}}), rng);
        auto target = random_pure_state(Layout({{"S", ds}, {"T", dt}}), rng);
        auto rec = recovery_isometry(post, target, {"S"});
        auto out = apply_recovery(post, rec, target.layout());
        const double expected = fidelity_oracle(partial_trace(post, {"S"}).matrix(),
                                                partial_trace(target, {"S"}).matrix());
        EXPECT_NEAR(overlap_squared(out, target), expected, 1e-6);
        EXPECT_NEAR(rec.trace_norm * rec.trace_norm, expected, 1e-6);
        EXPECT_LE(max_abs(rec.isometry.adjoint() * rec.isometry - Matrix::Identity(dp, dp)), 1e-10);
    }
}

TEST(Recovery, SmallerTargetThrows) {
    Rng rng(4);
    auto post = random_pure_state(Layout({{"S", 2}, {"P", 3}}), rng);
    auto target = random_pure_state(Layout({{"S", 2}, {"T", 2}}), rng);
    EXPECT_THROW(recovery_isometry(post, target, {"S"}), std::invalid_argument);
}

TEST(EnsembleReference, Examples) {
    auto epr = pure_preset("epr");
    auto roles = MergeRoles::resolve(epr.layout());
    auto plan = plan_merge(epr, 2, 0.0, roles);
    Rng rng(5);
    EXPECT_LE(ensemble_reference_check(epr, plan, haar_unitary(plan.alice_dim, rng), roles), 1e-12);

    auto cc = pure_preset("cc-pure");
    auto cc_roles = MergeRoles::resolve(cc.layout());
    EXPECT_LE(ensemble_reference_check(cc, plan_merge(cc, 1, 0.0, cc_roles), hadamard_power(1), cc_roles), 1e-10);
}

TEST(EnsembleReference, RandomConfigurations) {
    Rng rng(6);
    for (int i = 0; i < 50; ++i) {
        const int64_t db = 1 + i % 3, dr = 1 + (i / 3) % 3;
        auto psi = random_pure_state(Layout({{"A", 2}, {"B", db}, {"R", dr}}), rng);
        auto roles = MergeRoles::resolve(psi.layout());
        auto plan = plan_merge(psi, 1 + i % 2, static_cast<double>(i % 2), roles);
        MergeSimulator sim(psi, plan, roles);
        EXPECT_LE(sim.ensemble_reference_distance(sim.draw_unitary(rng)), 1e-9);
    }
}

TEST(Outcomes, LedgerAndSandwich) {
    Rng rng(7);
    for (int i = 0; i < 30; ++i) {
        auto psi = random_pure_state(Layout({{"A", 2}, {"B", 2}, {"R", 2}}), rng);
        auto roles = MergeRoles::resolve(psi.layout());
        auto plan = plan_merge(psi, 1 + i % 2, 1.0, roles);
        MergeSimulator sim(psi, plan, roles);
        for (const auto &o : sim.all_outcomes(sim.draw_unitary(rng))) {
            EXPECT_EQ(o.epr_net_bits, std::log2(static_cast<double>(plan.block_size)) - plan.k_boost);
            EXPECT_EQ(o.cbits, std::log2(static_cast<double>(plan.outcomes)));
            EXPECT_NEAR(o.achieved_fidelity, o.uhlmann_fidelity, 1e-6);
            EXPECT_LE(1.0 - std::sqrt(o.uhlmann_fidelity), o.decoupling_error + 1e-9);
            EXPECT_LE(o.decoupling_error, std::sqrt(1.0 - o.uhlmann_fidelity) + 1e-9);
        }
    }
}

TEST(Outcomes, ClassicalCostTracksReferenceCorrelation) {
    // A maximally mixed on a pair of orthogonal BR states, S(A|B) < 0.
    Rng rng(8);
    PureState psi = PureState::basis(Layout({{"A", 2}, {"B", 2}, {"R", 2}}), {0, 0, 0});
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Matrix u = haar_unitary(4, rng);
        Vector v = Vector::Zero(8);
        v.head(4) = u.col(0) / std::sqrt(2.0);
        v.tail(4) = u.col(1) / std::sqrt(2.0);
        psi = PureState(psi.layout(), v);
        if (EntropyReport(psi).conditional_entropy({"A"}, {"B"}) < -0.1) break;
    }
    EntropyReport report(psi);
    ASSERT_LT(report.conditional_entropy({"A"}, {"B"}), 0.0);
    ASSERT_NEAR(report.entropy({"A"}), 1.0, 1e-9);
    const double i_ar = report.mutual_information({"A"}, {"R"});
    const int n = 4;
    auto plan = plan_merge(psi, n, 1.0, MergeRoles::resolve(psi.layout()));
    EXPECT_LE(std::abs(plan.predicted_cbits / n - i_ar), 1.0);
}

TEST(MonteCarlo, SharedPairAlwaysPerfect) {
    auto epr = pure_preset("epr");
    auto rows = monte_carlo_merge(epr, {1, 2, 3}, 5, 0.0, 3, MergeRoles::resolve(epr.layout()));
    for (const auto &r : rows) {
        EXPECT_NEAR(r.fidelity_min, 1.0, 1e-9);
        EXPECT_NEAR(r.decoupling_max, 0.0, 1e-9);
        EXPECT_EQ(r.epr_net_bits, static_cast<double>(r.copies));
    }
}

TEST(MonteCarlo, CorrelatedStateWithHadamardBasis) {
    auto cc = pure_preset("cc-pure");
    auto roles = MergeRoles::resolve(cc.layout());
    for (int n : {1, 2}) {
        MonteCarloOptions opt;
        opt.merge.alice_unitary = hadamard_power(n);
        auto rows = monte_carlo_merge(cc, {n}, 20, 0.0, 4, roles, opt);
        EXPECT_NEAR(rows[0].fidelity_mean, 1.0, 1e-6);
    }
}

TEST(MonteCarlo, DeterministicAcrossWorkerCounts) {
    auto psi = merge_test_state(11);
    auto roles = MergeRoles::resolve(psi.layout());
    MonteCarloOptions one, three;
    one.workers = 1;
    three.workers = 3;
    auto a = monte_carlo_merge(psi, {1, 2}, 12, 1.0, 99, roles, one);
    auto b = monte_carlo_merge(psi, {1, 2}, 12, 1.0, 99, roles, three);
    for (size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].decoupling_mean, b[i].decoupling_mean);
        EXPECT_EQ(a[i].fidelity_median, b[i].fidelity_median);
    }
    // Extending the trial count leaves earlier trials untouched.
    Rng r1 = trial_rng(99, 2, 0), r2 = trial_rng(99, 2, 0);
    auto first = run_merge(psi, plan_merge(psi, 2, 1.0, roles), r1, roles);
    auto again = run_merge(psi, plan_merge(psi, 2, 1.0, roles), r2, roles);
    EXPECT_EQ(first, again);
}

TEST(MonteCarlo, DecouplingMatchesIndependentSimulation) {
    auto psi = merge_test_state(11);
    auto roles = MergeRoles::resolve(psi.layout());
    const int trials = 300;
    for (int n : {1, 2, 3}) {
        auto plan = plan_merge(psi, n, 1.0, roles);
        ASSERT_EQ(plan.block_size, 1);
        auto rows = monte_carlo_merge(psi, {n}, trials, 1.0, 11, roles);
        const double ref = median(decoupling_oracle(psi.amplitudes(), n, trials, 1234 + n));
        EXPECT_NEAR(rows[0].decoupling_median, ref, 0.03) << "n=" << n;
    }
}

TEST(MonteCarlo, FidelityTrendWithinBand) {
    auto psi = merge_test_state(11);
    ASSERT_LE(EntropyReport(psi).conditional_entropy({"A"}, {"B"}), -0.3);
    auto rows = monte_carlo_merge(psi, {2, 3, 4}, 50, 1.0, 11, MergeRoles::resolve(psi.layout()));
    for (size_t i = 1; i < rows.size(); ++i) {
        EXPECT_GE(rows[i].fidelity_median, rows[i - 1].fidelity_median - 0.02);
    }
    for (const auto &r : rows) EXPECT_LE(r.max_uhlmann_gap, 1e-6);
}

TEST(MonteCarlo, CapSkipsLargeCopies) {
    auto psi = merge_test_state(11);
    MonteCarloOptions opt;
    opt.merge.dim_cap = 64;
    auto rows = monte_carlo_merge(psi, {1, 4}, 2, 1.0, 1, MergeRoles::resolve(psi.layout()), opt);
    EXPECT_FALSE(rows[0].skipped);
    EXPECT_TRUE(rows[1].skipped);
}

TEST(Median, EvenAndOdd) {
    EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}
