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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.h"
#include "qmerge/io.h"
#include "qmerge/random.h"

using namespace qmerge;

namespace {

DensityOperator preset(const char *name) { return as_density(parse_state(name)); }

double binary_entropy(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

oracle::Dims dims_of(const Layout &l) {
    oracle::Dims d;
    for (auto x : l.dims()) d.push_back(static_cast<int>(x));
    return d;
}

}  // namespace

TEST(Entropy, Spectra) {
    EXPECT_NEAR(von_neumann_entropy(DensityOperator::maximally_mixed(Layout::single("A", 2))), 1.0, 1e-12);
    Rng rng(1);
    auto psi = random_pure_state(Layout({{"A", 3}, {"B", 2}}), rng);
    EXPECT_NEAR(von_neumann_entropy(psi.density()), 0.0, 1e-9);
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.25;
    m(1, 1) = 0.75;
    EXPECT_NEAR(von_neumann_entropy(DensityOperator(Layout::single("A", 2), m)), binary_entropy(0.25), 1e-12);
}

TEST(Entropy, MatchesGeneralEigensolver) {
    Rng rng(2);
    Layout l({{"A", 2}, {"B", 3}, {"C", 2}});
    for (int i = 0; i < 20; ++i) {
        auto rho = random_density(l, 1 + i % 6, rng);
        EXPECT_NEAR(entropy(rho, {"A", "C"}), oracle::entropy_of(rho.matrix(), dims_of(l), {0, 2}), 1e-10);
        EXPECT_NEAR(entropy(rho, {"B"}), oracle::entropy_of(rho.matrix(), dims_of(l), {1}), 1e-10);
    }
}

TEST(ConditionalEntropy, PresetStates) {
    EXPECT_NEAR(conditional_entropy(preset("example1"), {"A"}, {"B"}), 1.0, 1e-9);
    EXPECT_NEAR(conditional_entropy(preset("cc"), {"A"}, {"B"}), 0.0, 1e-9);
    EXPECT_NEAR(conditional_entropy(preset("epr"), {"A"}, {"B"}), -1.0, 1e-9);
    EXPECT_NEAR(conditional_entropy(preset("epr"), {"A"}, {}), 1.0, 1e-9);
    EXPECT_THROW(conditional_entropy(preset("epr"), {"A"}, {"A"}), std::invalid_argument);
    EXPECT_THROW(conditional_entropy(preset("epr"), {}, {"A"}), std::invalid_argument);
}

TEST(MutualInformation, Examples) {
    Rng rng(3);
    auto prod = tensor(random_density(Layout::single("A", 2), 2, rng), random_density(Layout::single("B", 3), 3, rng));
    EXPECT_NEAR(mutual_information(prod, {"A"}, {"B"}), 0.0, 1e-9);
    EXPECT_NEAR(mutual_information(preset("epr"), {"A"}, {"B"}), 2.0, 1e-9);
    EXPECT_NEAR(mutual_information(preset("cc"), {"A"}, {"B"}), 1.0, 1e-9);
}

TEST(CoherentInformation, SignedAndLegacy) {
    EXPECT_NEAR(coherent_information(preset("epr"), {"A"}, {"B"}), 1.0, 1e-9);
    EXPECT_NEAR(coherent_information(preset("example1"), {"A"}, {"B"}), -1.0, 1e-9);
    EXPECT_NEAR(coherent_information(preset("example1"), {"A"}, {"B"}, CoherentForm::kLegacy), 0.0, 1e-9);
    EXPECT_NEAR(coherent_information(preset("cc"), {"A"}, {"B"}), 0.0, 1e-9);
}

TEST(StrongSubadditivity, ProductAndGhz) {
    Rng rng(4);
    auto prod = tensor(tensor(random_density(Layout::single("A", 2), 2, rng),
                              random_density(Layout::single("B", 2), 2, rng)),
                       random_density(Layout::single("C", 2), 2, rng));
    EXPECT_NEAR(ssa_margin(prod, {"A"}, {"B"}, {"C"}), 0.0, 1e-9);
    auto ghz = preset("ghz:3");
    const Labels c{ghz.layout()[2].label};
    EXPECT_GE(ssa_margin(ghz, {"A"}, {"B"}, c), -1e-9);
}

TEST(StrongSubadditivity, RandomSweep) {
    Rng rng(5);
    Layout l({{"A", 2}, {"B", 2}, {"C", 2}});
    for (int i = 0; i < 500; ++i) {
        auto rho = random_density(l, 1 + i % 8, rng);
        EXPECT_GE(ssa_margin(rho, {"A"}, {"B"}, {"C"}), -1e-9);
    }
}

TEST(Identities, PurificationDualityAndClassicalCost) {
    Rng rng(6);
    Layout l({{"A", 2}, {"B", 3}, {"R", 2}});
    for (int i = 0; i < 100; ++i) {
        auto psi = random_pure_state(l, rng);
        auto rho = psi.density();
        EXPECT_NEAR(entropy(rho, {"R"}), entropy(rho, {"A", "B"}), 1e-9);
        EXPECT_NEAR(entropy(rho, {"A", "R"}), entropy(rho, {"B"}), 1e-9);
        EXPECT_NEAR(mutual_information(rho, {"A"}, {"R"}),
                    entropy(rho, {"A"}) + entropy(rho, {"A", "B"}) - entropy(rho, {"B"}), 1e-9);
    }
}

TEST(Identities, ArakiLiebAndSubadditivity) {
    Rng rng(7);
    Layout l({{"A", 3}, {"B", 2}});
    for (int i = 0; i < 200; ++i) {
        auto rho = random_density(l, 1 + i % 6, rng);
        const double a = entropy(rho, {"A"}), b = entropy(rho, {"B"}), ab = entropy(rho, {"A", "B"});
        EXPECT_LE(std::abs(a - b) - 1e-9, ab);
        EXPECT_LE(ab, a + b + 1e-9);
    }
}

TEST(Identities, ChainRule) {
    Rng rng(8);
    Layout l({{"A", 2}, {"B", 2}, {"C", 2}});
    for (int i = 0; i < 100; ++i) {
        auto rho = random_density(l, 1 + i % 8, rng);
        const double lhs = conditional_entropy(rho, {"A"}, {"C"}) + conditional_entropy(rho, {"B"}, {"A", "C"});
        EXPECT_NEAR(lhs, conditional_entropy(rho, {"A", "B"}, {"C"}), 1e-9);
        const double coh = coherent_information(rho, {"A"}, {"C"}) + coherent_information(rho, {"B"}, {"A", "C"});
        EXPECT_NEAR(coh, coherent_information(rho, {"A", "B"}, {"C"}), 1e-9);
    }
}

TEST(Invariance, PermutationAndLocalUnitary) {
    Rng rng(9);
    Layout l({{"A", 2}, {"B", 3}, {"C", 2}});
    for (int i = 0; i < 30; ++i) {
        auto rho = random_density(l, 3, rng);
        auto perm = permute_subsystems(rho, {"C", "A", "B"});
        auto rot = apply_unitary(rho, "B", haar_unitary(3, rng));
        for (const auto &[x, y] : std::vector<std::pair<Labels, Labels>>{
                 {{"A"}, {"B"}}, {{"A", "C"}, {"B"}}, {{"B"}, {"C"}}, {{"C"}, {"A", "B"}}}) {
            const double base = conditional_entropy(rho, x, y);
            EXPECT_NEAR(conditional_entropy(perm, x, y), base, 1e-9);
            EXPECT_NEAR(conditional_entropy(rot, x, y), base, 1e-9);
        }
    }
}

TEST(EntropyReport, AgreesWithDirectEvaluation) {
    Rng rng(10);
    Layout l({{"A", 2}, {"B", 2}, {"R", 3}});
    auto psi = random_pure_state(l, rng);
    EntropyReport pure(psi);
    EntropyReport mixed(psi.density());
    EXPECT_TRUE(pure.is_pure());
    for (const Labels &s : {Labels{"A"}, Labels{"B"}, Labels{"R"}, Labels{"A", "B"}, Labels{"A", "R"},
                            Labels{"A", "B", "R"}}) {
        EXPECT_NEAR(pure.entropy(s), entropy(psi.density(), s), 1e-10);
        EXPECT_NEAR(mixed.entropy(s), entropy(psi.density(), s), 1e-10);
    }
    EXPECT_NEAR(pure.conditional_entropy({"A"}, {"B"}), conditional_entropy(psi.density(), {"A"}, {"B"}), 1e-10);
    EXPECT_EQ(pure.entries().size(), 6u);
}
