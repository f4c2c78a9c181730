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

#include "qmerge/applications.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.h"
#include "qmerge/io.h"

using namespace qmerge;

namespace {

const double kHalf = 1.0 / std::sqrt(2.0);

PureState bell(const std::string &a, const std::string &b) {
    Vector v = Vector::Zero(4);
    v(0) = v(3) = kHalf;
    return PureState(Layout({{a, 2}, {b, 2}}), v);
}

PureState zero(const std::string &label) { return PureState::basis(Layout::single(label, 2), {0}); }

DensityOperator mixed(const std::string &label) { return DensityOperator::maximally_mixed(Layout::single(label, 2)); }

oracle::Dims dims_of(const Layout &l) {
    oracle::Dims d;
    for (auto x : l.dims()) d.push_back(static_cast<int>(x));
    return d;
}

const RateConstraint &find_constraint(const RateRegion &region, Labels parties) {
    std::sort(parties.begin(), parties.end());
    for (const auto &c : region.constraints) {
        Labels p = c.parties;
        std::sort(p.begin(), p.end());
        if (p == parties) return c;
    }
    throw std::logic_error("constraint not found");
}

}  // namespace

TEST(CompressionRegion, TwoPartyExamples) {
    auto cc = compression_region(as_density(parse_state("cc")));
    EXPECT_EQ(cc.kind, RegionKind::kCompression);
    ASSERT_EQ(cc.constraints.size(), 3u);
    EXPECT_NEAR(find_constraint(cc, {"A"}).bound, 0.0, 1e-9);
    EXPECT_NEAR(find_constraint(cc, {"B"}).bound, 0.0, 1e-9);
    EXPECT_NEAR(find_constraint(cc, {"A", "B"}).bound, 1.0, 1e-9);

    auto epr = compression_region(as_density(parse_state("epr")));
    EXPECT_NEAR(find_constraint(epr, {"A"}).bound, -1.0, 1e-9);
    EXPECT_NEAR(find_constraint(epr, {"B"}).bound, -1.0, 1e-9);
    EXPECT_NEAR(find_constraint(epr, {"A", "B"}).bound, 0.0, 1e-9);

    auto prod = compression_region(tensor(zero("A"), zero("B")).density());
    for (const auto &c : prod.constraints) EXPECT_NEAR(c.bound, 0.0, 1e-9);
}

TEST(CompressionRegion, Membership) {
    Rng rng(1);
    auto rho = random_density(Layout({{"A", 2}, {"B", 3}}), 3, rng);
    EntropyReport report(rho);
    auto region = compression_region(report, {"A", "B"});
    const double sa = report.entropy({"A"}), sb = report.entropy({"B"});
    const double b_given_a = report.conditional_entropy({"B"}, {"A"});
    const double a_given_b = report.conditional_entropy({"A"}, {"B"});

    std::vector<double> corner{sa, b_given_a};
    EXPECT_TRUE(region.contains(corner).contained);
    std::vector<double> below{a_given_b - 0.5, sb};
    auto m = region.contains(below);
    EXPECT_FALSE(m.contained);
    Labels first_violation = region.constraints[m.violated.at(0)].parties;
    EXPECT_EQ(first_violation, (Labels{"A"}));

    auto corners = region.corner_points();
    ASSERT_EQ(corners.size(), 2u);
    for (const auto &c : corners) EXPECT_TRUE(region.contains(c).contained);
    EXPECT_NEAR(corners[0][0], a_given_b, 1e-12);
    EXPECT_NEAR(corners[0][1], sb, 1e-12);

    auto epr = compression_region(as_density(parse_state("epr")));
    std::vector<double> pt{-1.0, 1.0};
    EXPECT_TRUE(epr.contains(pt).contained);
    std::vector<double> wrong{1.0};
    EXPECT_THROW(epr.contains(wrong), std::invalid_argument);
}

TEST(CompressionRegion, ThreePartySubsetOracle) {
    Rng rng(2);
    Layout l({{"A", 2}, {"B", 2}, {"C", 2}});
    const Labels names = l.labels();
    for (int trial = 0; trial < 20; ++trial) {
        auto rho = random_density(l, 1 + trial % 8, rng);
        auto region = compression_region(rho);
        ASSERT_EQ(region.constraints.size(), 7u);
        std::vector<std::vector<int>> subsets;
        oracle::subsets(3, subsets);
        const double total = oracle::entropy(rho.matrix());
        for (const auto &t : subsets) {
            if (t.empty()) continue;
            std::vector<int> rest;
            Labels parties;
            for (int i = 0; i < 3; ++i) {
                if (std::find(t.begin(), t.end(), i) == t.end()) rest.push_back(i);
                else parties.push_back(names[static_cast<size_t>(i)]);
            }
            const double expected = total - oracle::entropy_of(rho.matrix(), dims_of(l), rest);
            EXPECT_NEAR(find_constraint(region, parties).bound, expected, 1e-9);
        }
    }
}

TEST(CompressionRegion, TwoRoutesAgreeAndSumIsNonNegative) {
    Rng rng(3);
    Layout l({{"A", 2}, {"B", 3}, {"C", 2}});
    for (int trial = 0; trial < 30; ++trial) {
        auto rho = random_density(l, 1 + trial % 5, rng);
        auto region = compression_region(rho);
        for (const auto &c : region.constraints) {
            const Labels rest = l.complement(c.parties).labels();
            EXPECT_NEAR(c.bound, conditional_entropy(rho, c.parties, rest), 1e-9);
        }
        EXPECT_GE(find_constraint(region, {"A", "B", "C"}).bound, -1e-9);
    }
}

TEST(MacRegion, Examples) {
    auto two = tensor(bell("A", "C"), bell("B", "D"));
    EntropyReport r1(two);
    auto m1 = mac_region(r1, {{"A"}, {"B"}, {"C", "D"}});
    EXPECT_EQ(m1.kind, RegionKind::kMultipleAccess);
    EXPECT_NEAR(m1.constraints[0].bound, 1.0, 1e-9);
    EXPECT_NEAR(m1.constraints[1].bound, 1.0, 1e-9);
    EXPECT_NEAR(m1.constraints[2].bound, 2.0, 1e-9);

    EntropyReport r2(tensor(bell("A", "C").density(), mixed("B")));
    auto m2 = mac_region(r2);
    EXPECT_NEAR(m2.constraints[0].bound, 1.0, 1e-9);
    EXPECT_NEAR(m2.constraints[1].bound, -1.0, 1e-9);
    EXPECT_NEAR(m2.constraints[2].bound, 0.0, 1e-9);

    EntropyReport r3(tensor(tensor(mixed("A"), mixed("B")), mixed("C")));
    auto m3 = mac_region(r3);
    EXPECT_NEAR(m3.constraints[0].bound, -1.0, 1e-9);
    EXPECT_NEAR(m3.constraints[1].bound, -1.0, 1e-9);
    EXPECT_NEAR(m3.constraints[2].bound, -2.0, 1e-9);

    EntropyReport missing(bell("A", "B"));
    EXPECT_THROW(mac_region(missing), std::invalid_argument);
}

TEST(MacRegion, ChainRule) {
    Rng rng(4);
    Layout l({{"A", 2}, {"B", 2}, {"C", 2}});
    for (int i = 0; i < 100; ++i) {
        auto rho = random_density(l, 1 + i % 8, rng);
        EntropyReport report(rho);
        auto m = mac_region(report);
        const double a_to_c = report.coherent_information({"A"}, {"C"});
        EXPECT_NEAR(a_to_c + m.constraints[1].bound, m.constraints[2].bound, 1e-9);
    }
}

TEST(EntanglementOfAssistance, GhzFour) {
    auto ghz = std::get<PureState>(parse_state("ghz:4"));
    const auto labels = ghz.layout().labels();
    auto res = entanglement_of_assistance(ghz, {"A"}, {"B"});
    EXPECT_NEAR(res.value, 1.0, 1e-9);
    ASSERT_EQ(res.cuts.size(), 4u);
    for (const auto &c : res.cuts) EXPECT_NEAR(c.value, 1.0, 1e-9);
    EXPECT_TRUE(res.argmin.empty());
    (void)labels;
}

TEST(EntanglementOfAssistance, SimpleCases) {
    auto res = entanglement_of_assistance(tensor(bell("A", "B"), zero("C1")), {"A"}, {"B"});
    EXPECT_NEAR(res.value, 1.0, 1e-9);
    res = entanglement_of_assistance(tensor(zero("A"), bell("B", "C1")), {"A"}, {"B"});
    EXPECT_NEAR(res.value, 0.0, 1e-9);
    EXPECT_TRUE(res.argmin.empty());
}

TEST(EntanglementOfAssistance, MatchesBruteForce) {
    Rng rng(5);
    for (int m = 2; m <= 5; ++m) {
        std::vector<Part> parts{{"A", 2}, {"B", 2}};
        for (int h = 1; h <= m - 2; ++h) parts.push_back({"C" + std::to_string(h), 2});
        Layout l(parts);
        for (int trial = 0; trial < 5; ++trial) {
            auto psi = random_pure_state(l, rng);
            auto res = entanglement_of_assistance(psi, {"A"}, {"B"});
            EXPECT_NEAR(res.value, oracle::eoa(psi.density().matrix(), dims_of(l), 0, 1), 1e-9);
            for (const auto &c : res.cuts) {
                EXPECT_LE(res.value, c.alice_side + 1e-12);
                EXPECT_NEAR(c.value, std::min(c.alice_side, c.bob_side), 1e-15);
            }
        }
    }
}

TEST(EntanglementOfAssistance, ProductAliceAndCap) {
    Rng rng(6);
    auto rest = random_pure_state(Layout({{"B", 2}, {"C1", 2}, {"C2", 2}}), rng);
    EXPECT_NEAR(entanglement_of_assistance(tensor(zero("A"), rest), {"A"}, {"B"}).value, 0.0, 1e-9);

    std::vector<Part> parts{{"A", 2}, {"B", 2}};
    for (int h = 1; h <= kMaxHelpers + 1; ++h) parts.push_back({"C" + std::to_string(h), 2});
    Layout l(parts);
    auto big = PureState::basis(l, std::vector<int64_t>(parts.size(), 0));
    EXPECT_THROW(entanglement_of_assistance(big, {"A"}, {"B"}), CapExceeded);
}

TEST(Purification, TrivialSubsystemGivesEntropyOfA) {
    Rng rng(7);
    auto rho_a = random_density(Layout::single("A", 3), 3, rng);
    auto rho = tensor(rho_a, PureState::basis(Layout::single("U", 1), {0}).density());
    auto est = entanglement_of_purification(rho, {"A"}, "U", {}, rng);
    EXPECT_NEAR(est.value, von_neumann_entropy(rho_a), 1e-6);
}

TEST(Purification, NeverExceedsJointEntropy) {
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        auto rho = random_density(Layout({{"A", 2}, {"U", 2}}), 1 + i % 4, rng);
        EpOptions opt;
        opt.restarts = 2;
        opt.max_iterations = 300;
        auto est = entanglement_of_purification(rho, {"A"}, "U", opt, rng);
        EXPECT_LE(est.value, entropy(rho, {"A", "U"}) + 1e-9);
        EXPECT_LE(est.value, entropy(rho, {"A"}) + 1e-9);
        EXPECT_NEAR(channel_output_entropy(rho, {"A"}, est.channel), est.value, 1e-9);
    }
}

TEST(Purification, NonIncreasingInRestarts) {
    Rng base(9);
    auto rho = random_density(Layout({{"A", 2}, {"U", 2}}), 2, base);
    double previous = 1e300;
    for (int r = 1; r <= 4; ++r) {
        EpOptions opt;
        opt.restarts = r;
        opt.max_iterations = 400;
        Rng rng(77);
        auto est = entanglement_of_purification(rho, {"A"}, "U", opt, rng);
        EXPECT_LE(est.value, previous + 1e-12);
        EXPECT_EQ(est.restarts_used, r);
        previous = est.value;
    }
}

TEST(Purification, MaximallyEntangledPairAgainstGrid) {
    auto rho = bell("A", "U").density();
    Rng rng(10);
    EpOptions opt;
    opt.out_cap = 2;
    opt.env_cap = 2;
    auto est = entanglement_of_purification(rho, {"A"}, "U", opt, rng);
    const double grid = oracle::ep_grid(rho.matrix(), 2, 6);
    EXPECT_LE(est.value, 1.0 + 1e-6);
    EXPECT_NEAR(est.value, grid, 1e-3);
    EXPECT_NEAR(channel_output_entropy(rho, {"A"}, ChannelSpec::full_trace("U", "V", 2)), 1.0, 1e-12);
}

TEST(Purification, RandomStatesNoWorseThanGrid) {
    Rng rng(11);
    for (int i = 0; i < 3; ++i) {
        auto rho = random_density(Layout({{"A", 2}, {"U", 2}}), 2, rng);
        EpOptions opt;
        opt.out_cap = 2;
        opt.env_cap = 2;
        opt.restarts = 6;
        auto est = entanglement_of_purification(rho, {"A"}, "U", opt, rng);
        EXPECT_LE(est.value, oracle::ep_grid(rho.matrix(), 2, 6) + 1e-3);
    }
}

TEST(Purification, ChannelParameterizationIsIsometric) {
    Rng rng(12);
    Eigen::VectorXd params(36);
    for (auto &x : params) x = rng.normal();
    auto ch = channel_from_parameters("U", 2, 3, 2, params);
    EXPECT_EQ(ch.out_dim(), 3);
    EXPECT_EQ(ch.env_dim(), 2);
    EXPECT_LE(max_abs(ch.isometry().adjoint() * ch.isometry() - Matrix::Identity(2, 2)), 1e-10);
}

TEST(SideInfo, IdentityAndTraceChannels) {
    Rng rng(13);
    auto cc = std::get<PureState>(parse_state("cc-pure"));
    auto r1 = side_info_rates(cc, {"A"}, ChannelSpec::identity("B", "U", 2), {}, rng);
    EXPECT_NEAR(r1.rate_a, 0.0, 1e-9);

    auto ex1 = purify(std::get<DensityOperator>(parse_state("example1")), "R");
    auto r2 = side_info_rates(ex1, {"A"}, ChannelSpec::full_trace("B", "U", 2), {}, rng);
    EXPECT_NEAR(r2.rate_a, 1.0, 1e-9);

    auto epr = std::get<PureState>(parse_state("epr"));
    auto r3 = side_info_rates(epr, {"A"}, ChannelSpec::identity("B", "U", 2), {}, rng);
    EXPECT_NEAR(r3.rate_a, -1.0, 1e-9);
    EXPECT_LE(r3.rate_b, 1.0 + 1e-6);
    EXPECT_GE(r3.rate_a + r3.rate_b, -1e-9);
    EXPECT_NEAR(r3.rate_b, r3.ep.value - r3.rate_a, 1e-12);

    EXPECT_THROW(side_info_rates(epr, {"A"}, ChannelSpec::identity("X", "U", 2), {}, rng), std::invalid_argument);
}
