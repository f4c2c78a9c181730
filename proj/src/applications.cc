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

#include <algorithm>
#include <stdexcept>

namespace qmerge {

namespace {

Labels join(Labels a, const Labels &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string group_name(const Labels &group) {
    std::string name;
    for (const auto &l : group) name += l;
    return name;
}

}  // namespace

Membership RateRegion::contains(std::span<const double> rates, double tolerance) const {
    if (rates.size() != parties.size()) {
        throw std::invalid_argument("rate vector has " + std::to_string(rates.size()) + " entries, region has " +
                                    std::to_string(parties.size()) + " parties");
    }
    Membership m;
    for (size_t i = 0; i < constraints.size(); ++i) {
        double sum = 0.0;
        for (const auto &p : constraints[i].parties) {
            const auto it = std::find(parties.begin(), parties.end(), p);
            sum += rates[static_cast<size_t>(it - parties.begin())];
        }
        const bool ok = kind == RegionKind::kCompression ? sum >= constraints[i].bound - tolerance
                                                         : sum <= constraints[i].bound + tolerance;
        if (!ok) {
            m.contained = false;
            m.violated.push_back(i);
        }
    }
    return m;
}

std::vector<std::vector<double>> RateRegion::corner_points() const {
    if (kind != RegionKind::kCompression || parties.size() != 2 || constraints.size() != 3) {
        throw std::invalid_argument("corner points are defined for two-party compression regions");
    }
    // Constraints in binary-counting order: {A}, {B}, {A, B}.
    const double a_given_b = constraints[0].bound;
    const double b_given_a = constraints[1].bound;
    const double total = constraints[2].bound;
    return {{a_given_b, total - a_given_b}, {total - b_given_a, b_given_a}};
}

RateRegion compression_region(const EntropyReport &report, const Labels &parties) {
    const size_t m = parties.size();
    if (m < 2) throw std::invalid_argument("a compression region needs at least two parties");
    if (m > 20) throw CapExceeded("too many parties for subset enumeration");
    report.layout().mask_of(parties);

    RateRegion region;
    region.parties = parties;
    region.kind = RegionKind::kCompression;
    const double total = report.entropy(parties);
    for (uint64_t mask = 1; mask < (uint64_t{1} << m); ++mask) {
        Labels subset, complement;
        for (size_t i = 0; i < m; ++i) {
            ((mask >> i) & 1 ? subset : complement).push_back(parties[i]);
        }
        region.constraints.push_back({subset, total - report.entropy(complement)});
    }
    return region;
}

RateRegion compression_region(const DensityOperator &rho) {
    EntropyReport report(rho);
    return compression_region(report, rho.layout().labels());
}

RateRegion mac_region(const EntropyReport &report, const MacGroups &g) {
    const Layout &layout = report.layout();
    const uint64_t a = layout.mask_of(g.a), b = layout.mask_of(g.b), c = layout.mask_of(g.c);
    if (g.a.empty() || g.b.empty() || g.c.empty() || (a & b) || (a & c) || (b & c)) {
        throw std::invalid_argument("MAC groups must be non-empty and disjoint");
    }
    const std::string na = group_name(g.a), nb = group_name(g.b);
    RateRegion region;
    region.parties = {na, nb};
    region.kind = RegionKind::kMultipleAccess;
    region.constraints = {
        {{na}, report.coherent_information(g.a, join(g.c, g.b))},
        {{nb}, report.coherent_information(g.b, join(g.c, g.a))},
        {{na, nb}, report.coherent_information(join(g.a, g.b), g.c)},
    };
    return region;
}

EoAResult entanglement_of_assistance(const PureState &psi, const Labels &alice, const Labels &bob) {
    const Layout &layout = psi.layout();
    const uint64_t ma = layout.mask_of(alice), mb = layout.mask_of(bob);
    if (alice.empty() || bob.empty() || (ma & mb)) {
        throw std::invalid_argument("Alice and Bob must be non-empty and disjoint");
    }
    const Labels helpers = layout.labels_of(~(ma | mb) & ((layout.size() == 64) ? ~uint64_t{0}
                                                                                : (uint64_t{1} << layout.size()) - 1));
    if (helpers.size() > static_cast<size_t>(kMaxHelpers)) {
        throw CapExceeded("entanglement of assistance supports at most " + std::to_string(kMaxHelpers) + " helpers");
    }

    EntropyReport report(psi);
    EoAResult result;
    bool first = true;
    for (uint64_t mask = 0; mask < (uint64_t{1} << helpers.size()); ++mask) {
        CutValue cut;
        Labels with_bob;
        for (size_t i = 0; i < helpers.size(); ++i) {
            ((mask >> i) & 1 ? cut.with_alice : with_bob).push_back(helpers[i]);
        }
        cut.alice_side = report.entropy(join(alice, cut.with_alice));
        cut.bob_side = report.entropy(join(bob, with_bob));
        cut.value = std::min(cut.alice_side, cut.bob_side);
        if (first || cut.value < result.value) {
            result.value = cut.value;
            result.argmin = cut.with_alice;
            first = false;
        }
        result.cuts.push_back(std::move(cut));
    }
    return result;
}

}  // namespace qmerge
