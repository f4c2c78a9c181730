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

#ifndef QMERGE_STATE_H
#define QMERGE_STATE_H

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>

#include "qmerge/layout.h"

namespace qmerge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tolerance for norm, trace, Hermiticity and isometry checks.
inline constexpr double kStateTolerance = 1e-10;
/// Eigenvalues in [kEigenFloor, 0] are treated as numerical zeros.
inline constexpr double kEigenFloor = -1e-9;
/// Eigenvalues above this count towards the rank.
inline constexpr double kRankCutoff = 1e-12;

class DensityOperator;

/// A normalized state vector over a layout.
class PureState {
   public:
    /// Throws std::invalid_argument unless the vector has the layout's
    /// dimension and unit norm within `tolerance`.
    PureState(Layout layout, Vector amplitudes, double tolerance = kStateTolerance);

    /// Computational basis state with one digit per part.
    static PureState basis(Layout layout, const std::vector<int64_t> &digits);
    /// Normalizes `amplitudes`; throws if the vector is zero.
    static PureState normalized(Layout layout, Vector amplitudes);

    const Layout &layout() const { return layout_; }
    const Vector &amplitudes() const { return amplitudes_; }
    int64_t dim() const { return layout_.total_dim(); }

    DensityOperator density() const;

   private:
    Layout layout_;
    Vector amplitudes_;
};

/// A Hermitian, positive semidefinite, unit-trace operator over a layout.
class DensityOperator {
   public:
    /// Validates Hermiticity and trace within `tolerance` and the minimum
    /// eigenvalue against kEigenFloor.
    DensityOperator(Layout layout, Matrix matrix, double tolerance = kStateTolerance);

    /// Wraps a matrix already known to be a density operator (results of
    /// partial traces, channels, ...). Only the shape is checked.
    static DensityOperator unchecked(Layout layout, Matrix matrix);
    static DensityOperator maximally_mixed(Layout layout);

    const Layout &layout() const { return layout_; }
    const Matrix &matrix() const { return matrix_; }
    int64_t dim() const { return layout_.total_dim(); }

    /// Eigenvalues in ascending order with values in [kEigenFloor, 0] clamped.
    Eigen::VectorXd spectrum() const;

   private:
    DensityOperator() = default;

    Layout layout_;
    Matrix matrix_;
};

/// A channel given by its Stinespring isometry. The isometry maps the input
/// system into output (x) environment, output index most significant; the
/// environment is discarded.
class ChannelSpec {
   public:
    ChannelSpec(std::string input, std::string output, int64_t out_dim, int64_t env_dim, Matrix isometry,
                double tolerance = kStateTolerance);

    static ChannelSpec identity(std::string input, std::string output, int64_t dim);
    /// Traces the input out; the output is one-dimensional.
    static ChannelSpec full_trace(std::string input, std::string output, int64_t dim);
    /// |i> -> |i>_out |i>_env.
    static ChannelSpec dephasing(std::string input, std::string output, int64_t dim);

    const std::string &input() const { return input_; }
    const std::string &output() const { return output_; }
    int64_t in_dim() const { return isometry_.cols(); }
    int64_t out_dim() const { return out_dim_; }
    int64_t env_dim() const { return env_dim_; }
    const Matrix &isometry() const { return isometry_; }

   private:
    std::string input_;
    std::string output_;
    int64_t out_dim_;
    int64_t env_dim_;
    Matrix isometry_;
};

// Composition and reordering.

/// Kronecker product; `a`'s parts come first. Labels must be disjoint.
PureState tensor(const PureState &a, const PureState &b);
DensityOperator tensor(const DensityOperator &a, const DensityOperator &b);

PureState permute_subsystems(const PureState &psi, const Labels &order);
DensityOperator permute_subsystems(const DensityOperator &rho, const Labels &order);

/// Renames parts; labels not in `renames` are kept.
PureState relabel(const PureState &psi, const std::map<std::string, std::string> &renames);
DensityOperator relabel(const DensityOperator &rho, const std::map<std::string, std::string> &renames);

/// n-fold tensor power; part X of copy i is labeled "X.i".
PureState tensor_power(const PureState &psi, int n);
DensityOperator tensor_power(const DensityOperator &rho, int n);
/// Label of part `label` in copy `copy` of a tensor power.
std::string copy_label(std::string_view label, int copy);

/// Fuses `labels` (in the given order) into one part named `new_label`,
/// placed first; remaining parts keep their relative order.
PureState merge_subsystems(const PureState &psi, const Labels &labels, std::string new_label);

// Reduction and purification.

/// Reduced operator on `keep`, parts in their original order.
DensityOperator partial_trace(const DensityOperator &rho, const Labels &keep);
DensityOperator partial_trace(const PureState &psi, const Labels &keep);

/// Canonical purification. The purifier dimension is the rank of rho
/// (at least 1); eigenvectors are ordered by descending eigenvalue and
/// phased so their first nonzero component is real positive.
PureState purify(const DensityOperator &rho, const std::string &new_label);

// Local operations.

/// Applies `op` (new_dim x dim(label)) to one part and renames it. The
/// result is not renormalized.
Vector apply_local(const PureState &psi, std::string_view label, const Matrix &op, Layout *out_layout,
                   std::string new_label = {});
PureState apply_unitary(const PureState &psi, std::string_view label, const Matrix &unitary);
DensityOperator apply_unitary(const DensityOperator &rho, std::string_view label, const Matrix &unitary);

/// Applies the channel to its input part; the output part takes the input's
/// position under the channel's output label.
DensityOperator apply_channel(const DensityOperator &rho, const ChannelSpec &channel);

/// max_ij |m_ij|.
double max_abs(const Matrix &m);

}  // namespace qmerge

#endif  // QMERGE_STATE_H
