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

#ifndef QMERGE_APPLICATIONS_H
#define QMERGE_APPLICATIONS_H

#include <span>
#include <vector>

#include "qmerge/entropy.h"
#include "qmerge/random.h"
#include "qmerge/state.h"

namespace qmerge {

// --- rate regions -----------------------------------------------------------

enum class RegionKind {
    kCompression,     ///< R_T >= bound for every subset T
    kMultipleAccess,  ///< R_T <= bound for every subset T
};

struct RateConstraint {
    /// Parties whose rates are summed.
    Labels parties;
    double bound = 0.0;
};

struct Membership {
    bool contained = true;
    /// Indices into RateRegion::constraints.
    std::vector<size_t> violated;
};

/// Half-space description of a rate region, one constraint per non-empty
/// subset of parties in binary-counting order (bit i = party i).
struct RateRegion {
    Labels parties;
    RegionKind kind = RegionKind::kCompression;
    std::vector<RateConstraint> constraints;

    Membership contains(std::span<const double> rates, double tolerance = 1e-9) const;
    /// The two corners (S(A|B), S(B)) and (S(A), S(B|A)) of a two-party
    /// compression region.
    std::vector<std::vector<double>> corner_points() const;
};

/// R_T >= S(T|T^c) = S(all) - S(T^c) for every non-empty subset T of
/// `parties` (labels of the report's state; other labels are traced out).
RateRegion compression_region(const EntropyReport &report, const Labels &parties);
RateRegion compression_region(const DensityOperator &rho);

/// Sender groups A and B and decoder group C of a multiple-access channel.
struct MacGroups {
    Labels a{"A"};
    Labels b{"B"};
    Labels c{"C"};
};

/// R_A <= I(A>CB), R_B <= I(B>CA), R_A + R_B <= I(AB>C), signed.
RateRegion mac_region(const EntropyReport &report, const MacGroups &groups = {});

// --- entanglement of assistance --------------------------------------------

struct CutValue {
    /// Helpers grouped with Alice; the rest go with Bob.
    Labels with_alice;
    double alice_side = 0.0;  ///< S(A T)
    double bob_side = 0.0;    ///< S(B T^c)
    double value = 0.0;       ///< min of the two
};

struct EoAResult {
    double value = 0.0;
    Labels argmin;
    std::vector<CutValue> cuts;
};

inline constexpr int kMaxHelpers = 12;

/// min over helper subsets T of min{S(A T), S(B T^c)}; every label outside
/// `alice` and `bob` is a helper. Ties keep the first subset in
/// binary-counting order.
EoAResult entanglement_of_assistance(const PureState &psi, const Labels &alice, const Labels &bob);

// --- entanglement of purification ------------------------------------------

struct EpOptions {
    /// 0 means dim(U).
    int64_t out_cap = 0;
    /// 0 means dim(U).
    int64_t env_cap = 0;
    int restarts = 4;
    int max_iterations = 3000;
    double tolerance = 1e-7;
    int window = 50;
};

struct EpEstimate {
    /// Best S(A Lambda(U)) found; an upper bound on the minimum.
    double value = 0.0;
    ChannelSpec channel = ChannelSpec::identity("U", "U", 1);
    int restarts_used = 0;
    /// Every restart stopped by the improvement criterion rather than the
    /// iteration limit.
    bool converged = false;
};

/// Isometry of a channel on U generated by exp(iH), H the Hermitian matrix
/// whose diagonal and upper-triangle real/imaginary parts are `params`
/// (size (out*env)^2). Keeps the first dim(U) columns.
ChannelSpec channel_from_parameters(const std::string &input, int64_t in_dim, int64_t out_dim, int64_t env_dim,
                                    const Eigen::VectorXd &params);

/// S(A, Lambda(U)) of rho over A and U.
double channel_output_entropy(const DensityOperator &rho, const Labels &a, const ChannelSpec &channel);

/// Derivative-free minimization of S(A Lambda(U)) over channels on U with
/// output dimension <= out_cap and environment <= env_cap, with random
/// restarts. The identity and full-trace channels are always evaluated.
EpEstimate entanglement_of_purification(const DensityOperator &rho, const Labels &a, const std::string &u,
                                        const EpOptions &options, Rng &rng);

struct SideInfoRates {
    double rate_a = 0.0;  ///< S(A|U)
    double rate_b = 0.0;  ///< E_p(AU:R) - S(A|U)
    EpEstimate ep;
};

/// Applies `channel` to Bob's part to produce U and returns the achievable
/// side-information corner for that U.
SideInfoRates side_info_rates(const PureState &psi, const Labels &alice, const ChannelSpec &channel,
                              const EpOptions &options, Rng &rng);

}  // namespace qmerge

#endif  // QMERGE_APPLICATIONS_H
