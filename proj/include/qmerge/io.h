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

#ifndef QMERGE_IO_H
#define QMERGE_IO_H

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qmerge/applications.h"
#include "qmerge/entropy.h"
#include "qmerge/merging.h"
#include "qmerge/state.h"

namespace qmerge {

using AnyState = std::variant<PureState, DensityOperator>;
using Json = nlohmann::ordered_json;

/// Malformed state or channel description. Line and column are 1-based and
/// 0 when unknown.
class ParseError : public std::invalid_argument {
   public:
    ParseError(const std::string &what, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

   private:
    int line_;
    int column_;
};

/// Files may be off by this much in norm or trace; they are renormalized.
inline constexpr double kFileTolerance = 1e-6;

/// A preset name or the path of a state file.
///
/// Presets: "epr", "cc", "cc-pure", "example1", "ghz:M",
/// "random-pure:D1xD2x...:SEED" and "merge-test:SEED". Random presets with
/// three parts are labeled A, B, R; with k != 3 parts A, B, C1, ...
AnyState parse_state(std::string_view spec);

/// Throws std::invalid_argument for unknown names.
AnyState preset_state(std::string_view name);
bool is_preset(std::string_view name);

/// The JSON state format: {"labels", "dims", "kind": "pure"|"mixed", "re",
/// "im"} with amplitudes (or the row-major matrix) under the layout index
/// convention.
AnyState parse_state_json(std::string_view text);
std::string state_to_json(const AnyState &state);

/// The JSON channel format: {"input", "output", "out_dim", "env_dim", "re",
/// "im"} with the isometry in column-major order.
ChannelSpec parse_channel_json(std::string_view text);
/// A channel file, or "identity:L", "trace:L", "dephase:L" acting on label L
/// of `state` with output label "U".
ChannelSpec parse_channel(std::string_view spec, const Layout &layout);

/// First Haar-random 2x2x2 pure state on A, B, R drawn from `seed` with
/// S(A|B) <= max_conditional_entropy.
PureState merge_test_state(uint64_t seed, double max_conditional_entropy = -0.3);

DensityOperator as_density(const AnyState &state);
const Layout &layout_of(const AnyState &state);

/// Comma-separated labels.
Labels split_labels(std::string_view text);

// --- result serialization ---------------------------------------------------

/// Signed fixed-point with 12 digits after the point, e.g. "-1.000000000000".
std::string format_bits(double value);
/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

Json to_json(const MergePlan &plan);
Json to_json(const MergeOutcome &outcome);
Json to_json(const CurveRow &row);
Json to_json(const RateRegion &region);
Json to_json(const Membership &membership, const RateRegion &region);
Json to_json(const EoAResult &result);
Json to_json(const EpEstimate &estimate);
Json to_json(const SideInfoRates &rates);
Json to_json(const ChannelSpec &channel);

MergeOutcome merge_outcome_from_json(const Json &j);

/// All subset entropies up to `max_size` labels, plus S(X|Y), I(X:Y) and
/// I(X>Y) for every ordered pair of single labels.
Json entropy_report_json(const EntropyReport &report, size_t max_size);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table &table);
Table outcomes_table(const std::vector<MergeOutcome> &outcomes);
Table curve_table(const std::vector<CurveRow> &rows);
Table region_table(const RateRegion &region);
Table cuts_table(const EoAResult &result);

}  // namespace qmerge

#endif  // QMERGE_IO_H
