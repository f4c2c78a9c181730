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

#include "qmerge/state.h"

#include <cmath>
#include <stdexcept>

#include "internal.h"

namespace qmerge {

namespace {

void check_disjoint(const Layout &a, const Layout &b) {
    for (const auto &p : b.parts()) {
        if (a.contains(p.label)) {
            throw std::invalid_argument("duplicate subsystem label '" + p.label + "' in tensor product");
        }
    }
}

std::string unused_label(const Layout &layout, std::string base) {
    while (layout.contains(base)) {
        base += '_';
    }
    return base;
}

}  // namespace

namespace internal {

Matrix apply_left(const Matrix &data, int64_t pre, int64_t dx, int64_t post, const Matrix &op) {
    const int64_t dy = op.rows();
    Matrix out(pre * dy * post, data.cols());
    const Matrix op_t = op.transpose();
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        for (int64_t i = 0; i < pre; ++i) {
            Eigen::Map<const Matrix> in_block(data.col(c).data() + i * dx * post, post, dx);
            Eigen::Map<Matrix> out_block(out.col(c).data() + i * dy * post, post, dy);
            out_block.noalias() = in_block * op_t;
        }
    }
    return out;
}

Split split_dims(const Layout &layout, std::string_view label) {
    const size_t pos = layout.position(label);
    Split s{1, layout[pos].dim, 1};
    for (size_t i = 0; i < layout.size(); ++i) {
        if (i < pos) s.pre *= layout[i].dim;
        if (i > pos) s.post *= layout[i].dim;
    }
    return s;
}

}  // namespace internal

double max_abs(const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// --- PureState --------------------------------------------------------------

PureState::PureState(Layout layout, Vector amplitudes, double tolerance)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != layout_.total_dim()) {
        throw std::invalid_argument("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                                    ", layout " + layout_.to_string() + " needs " +
                                    std::to_string(layout_.total_dim()));
    }
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > tolerance) {
        throw std::invalid_argument("state vector norm " + std::to_string(norm) + " is not 1");
    }
}

PureState PureState::basis(Layout layout, const std::vector<int64_t> &digits) {
    if (digits.size() != layout.size()) {
        throw std::invalid_argument("basis state needs one digit per subsystem");
    }
    int64_t index = 0;
    for (size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= layout[i].dim) {
            throw std::invalid_argument("basis digit out of range for '" + layout[i].label + "'");
        }
        index = index * layout[i].dim + digits[i];
    }
    Vector v = Vector::Zero(layout.total_dim());
    v(index) = 1.0;
    return PureState(std::move(layout), std::move(v));
}

PureState PureState::normalized(Layout layout, Vector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("cannot normalize a zero or non-finite vector");
    }
    amplitudes /= norm;
    return PureState(std::move(layout), std::move(amplitudes));
}

DensityOperator PureState::density() const {
    return DensityOperator::unchecked(layout_, amplitudes_ * amplitudes_.adjoint());
}

// --- DensityOperator --------------------------------------------------------

DensityOperator::DensityOperator(Layout layout, Matrix matrix, double tolerance)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    const int64_t d = layout_.total_dim();
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw std::invalid_argument("density matrix must be " + std::to_string(d) + "x" + std::to_string(d) +
                                    " for layout " + layout_.to_string());
    }
    if (max_abs(matrix_ - matrix_.adjoint()) > tolerance) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - 1.0) > tolerance) {
        throw std::invalid_argument("density matrix trace " + std::to_string(tr.real()) + " is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < kEigenFloor) {
        throw std::invalid_argument("density matrix has negative eigenvalue " +
                                    std::to_string(es.eigenvalues()(0)));
    }
}

DensityOperator DensityOperator::unchecked(Layout layout, Matrix matrix) {
    const int64_t d = layout.total_dim();
    if (matrix.rows() != d || matrix.cols() != d) {
        throw std::invalid_argument("density matrix shape does not match layout " + layout.to_string());
    }
    DensityOperator rho;
    rho.layout_ = std::move(layout);
    rho.matrix_ = std::move(matrix);
    return rho;
}

DensityOperator DensityOperator::maximally_mixed(Layout layout) {
    const int64_t d = layout.total_dim();
    Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
    return unchecked(std::move(layout), std::move(m));
}

Eigen::VectorXd DensityOperator::spectrum() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < 0.0 && ev(i) >= kEigenFloor) ev(i) = 0.0;
    }
    return ev;
}

// --- ChannelSpec ------------------------------------------------------------

ChannelSpec::ChannelSpec(std::string input, std::string output, int64_t out_dim, int64_t env_dim,
                         Matrix isometry, double tolerance)
    : input_(std::move(input)),
      output_(std::move(output)),
      out_dim_(out_dim),
      env_dim_(env_dim),
      isometry_(std::move(isometry)) {
    if (input_.empty() || output_.empty()) {
        throw std::invalid_argument("channel labels must be non-empty");
    }
    if (out_dim_ < 1 || env_dim_ < 1) {
        throw std::invalid_argument("channel output and environment dimensions must be >= 1");
    }
    if (isometry_.rows() != out_dim_ * env_dim_ || isometry_.cols() < 1) {
        throw std::invalid_argument("isometry must have out_dim*env_dim = " +
                                    std::to_string(out_dim_ * env_dim_) + " rows");
    }
    const Matrix gram = isometry_.adjoint() * isometry_;
    if (max_abs(gram - Matrix::Identity(gram.rows(), gram.cols())) > tolerance) {
        throw std::invalid_argument("channel matrix columns are not orthonormal");
    }
}

ChannelSpec ChannelSpec::identity(std::string input, std::string output, int64_t dim) {
    return ChannelSpec(std::move(input), std::move(output), dim, 1, Matrix::Identity(dim, dim));
}

ChannelSpec ChannelSpec::full_trace(std::string input, std::string output, int64_t dim) {
    return ChannelSpec(std::move(input), std::move(output), 1, dim, Matrix::Identity(dim, dim));
}

ChannelSpec ChannelSpec::dephasing(std::string input, std::string output, int64_t dim) {
    Matrix v = Matrix::Zero(dim * dim, dim);
    for (int64_t i = 0; i < dim; ++i) {
        v(i * dim + i, i) = 1.0;
    }
    return ChannelSpec(std::move(input), std::move(output), dim, dim, std::move(v));
}

// --- composition ------------------------------------------------------------

PureState tensor(const PureState &a, const PureState &b) {
    check_disjoint(a.layout(), b.layout());
    const Vector &x = a.amplitudes();
    const Vector &y = b.amplitudes();
    Vector out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out.segment(i * y.size(), y.size()) = x(i) * y;
    }
    return PureState(a.layout().concat(b.layout()), std::move(out), 1e-8);
}

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
    check_disjoint(a.layout(), b.layout());
    const Matrix &x = a.matrix();
    const Matrix &y = b.matrix();
    const Eigen::Index db = y.rows();
    Matrix out(x.rows() * db, x.cols() * db);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * db, j * db, db, db) = x(i, j) * y;
        }
    }
    return DensityOperator::unchecked(a.layout().concat(b.layout()), std::move(out));
}

PureState permute_subsystems(const PureState &psi, const Labels &order) {
    const auto map = permutation_index_map(psi.layout(), order);
    Vector out(psi.amplitudes().size());
    for (size_t n = 0; n < map.size(); ++n) {
        out(static_cast<Eigen::Index>(n)) = psi.amplitudes()(map[n]);
    }
    return PureState(psi.layout().reordered(order), std::move(out), 1e-8);
}

DensityOperator permute_subsystems(const DensityOperator &rho, const Labels &order) {
    const auto map = permutation_index_map(rho.layout(), order);
    const auto d = static_cast<Eigen::Index>(map.size());
    Matrix out(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            out(i, j) = rho.matrix()(map[i], map[j]);
        }
    }
    return DensityOperator::unchecked(rho.layout().reordered(order), std::move(out));
}

namespace {

Layout renamed(const Layout &layout, const std::map<std::string, std::string> &renames) {
    std::vector<Part> parts = layout.parts();
    for (auto &p : parts) {
        if (auto it = renames.find(p.label); it != renames.end()) {
            p.label = it->second;
        }
    }
    return Layout(std::move(parts));
}

}  // namespace

PureState relabel(const PureState &psi, const std::map<std::string, std::string> &renames) {
    return PureState(renamed(psi.layout(), renames), psi.amplitudes(), 1e-8);
}

DensityOperator relabel(const DensityOperator &rho, const std::map<std::string, std::string> &renames) {
    return DensityOperator::unchecked(renamed(rho.layout(), renames), rho.matrix());
}

std::string copy_label(std::string_view label, int copy) {
    return std::string(label) + "." + std::to_string(copy);
}

namespace {

std::map<std::string, std::string> copy_renames(const Layout &layout, int copy) {
    std::map<std::string, std::string> r;
    for (const auto &p : layout.parts()) {
        r[p.label] = copy_label(p.label, copy);
    }
    return r;
}

}  // namespace

PureState tensor_power(const PureState &psi, int n) {
    if (n < 1) throw std::invalid_argument("tensor power needs n >= 1");
    PureState out = relabel(psi, copy_renames(psi.layout(), 0));
    for (int i = 1; i < n; ++i) {
        out = tensor(out, relabel(psi, copy_renames(psi.layout(), i)));
    }
    return out;
}

DensityOperator tensor_power(const DensityOperator &rho, int n) {
    if (n < 1) throw std::invalid_argument("tensor power needs n >= 1");
    DensityOperator out = relabel(rho, copy_renames(rho.layout(), 0));
    for (int i = 1; i < n; ++i) {
        out = tensor(out, relabel(rho, copy_renames(rho.layout(), i)));
    }
    return out;
}

PureState merge_subsystems(const PureState &psi, const Labels &labels, std::string new_label) {
    if (labels.empty()) throw std::invalid_argument("nothing to merge");
    const Layout &layout = psi.layout();
    Labels order = labels;
    const Layout rest = layout.complement(labels);
    for (const auto &p : rest.parts()) order.push_back(p.label);
    PureState permuted = permute_subsystems(psi, order);

    std::vector<Part> parts{Part{std::move(new_label), layout.dim_of(labels)}};
    parts.insert(parts.end(), rest.parts().begin(), rest.parts().end());
    return PureState(Layout(std::move(parts)), permuted.amplitudes(), 1e-8);
}

// --- reduction --------------------------------------------------------------

namespace {

/// Index map into (keep..., rest...) order together with the two dimensions.
struct KeepRest {
    std::vector<int64_t> map;
    int64_t keep_dim;
    int64_t rest_dim;
    Layout keep_layout;
};

KeepRest keep_rest(const Layout &layout, const Labels &keep) {
    if (keep.empty()) throw std::invalid_argument("partial trace needs a non-empty keep set");
    Labels keep_sorted = layout.canonical(keep);
    Layout rest = layout.complement(keep_sorted);
    Labels order = keep_sorted;
    for (const auto &p : rest.parts()) order.push_back(p.label);
    Layout kept = layout.select(keep_sorted);
    return KeepRest{permutation_index_map(layout, order), kept.total_dim(), rest.total_dim(), kept};
}

}  // namespace

DensityOperator partial_trace(const DensityOperator &rho, const Labels &keep) {
    KeepRest kr = keep_rest(rho.layout(), keep);
    const Matrix &m = rho.matrix();
    Matrix out = Matrix::Zero(kr.keep_dim, kr.keep_dim);
    for (int64_t j = 0; j < kr.keep_dim; ++j) {
        for (int64_t i = 0; i < kr.keep_dim; ++i) {
            Complex acc = 0.0;
            for (int64_t r = 0; r < kr.rest_dim; ++r) {
                acc += m(kr.map[i * kr.rest_dim + r], kr.map[j * kr.rest_dim + r]);
            }
            out(i, j) = acc;
        }
    }
    return DensityOperator::unchecked(std::move(kr.keep_layout), std::move(out));
}

DensityOperator partial_trace(const PureState &psi, const Labels &keep) {
    KeepRest kr = keep_rest(psi.layout(), keep);
    Matrix amp(kr.keep_dim, kr.rest_dim);
    for (int64_t i = 0; i < kr.keep_dim; ++i) {
        for (int64_t r = 0; r < kr.rest_dim; ++r) {
            amp(i, r) = psi.amplitudes()(kr.map[i * kr.rest_dim + r]);
        }
    }
    Matrix out = amp * amp.adjoint();
    return DensityOperator::unchecked(std::move(kr.keep_layout), std::move(out));
}

PureState purify(const DensityOperator &rho, const std::string &new_label) {
    if (rho.layout().contains(new_label)) {
        throw std::invalid_argument("purifier label '" + new_label + "' already in layout");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    const Eigen::VectorXd &ev = es.eigenvalues();
    const Eigen::Index d = ev.size();

    // Descending clusters of equal eigenvalues, solver order within a cluster.
    std::vector<Eigen::Index> kept;
    for (Eigen::Index end = d; end > 0;) {
        Eigen::Index begin = end - 1;
        while (begin > 0 && ev(end - 1) - ev(begin - 1) <= kRankCutoff) --begin;
        for (Eigen::Index i = begin; i < end; ++i) {
            if (ev(i) > kRankCutoff) kept.push_back(i);
        }
        end = begin;
    }
    if (kept.empty()) kept.push_back(d - 1);
    const auto rank = static_cast<Eigen::Index>(kept.size());

    Vector out = Vector::Zero(d * rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
        Vector v = es.eigenvectors().col(kept[k]);
        for (Eigen::Index x = 0; x < d; ++x) {
            if (std::abs(v(x)) > kRankCutoff) {
                v *= std::conj(v(x)) / std::abs(v(x));
                break;
            }
        }
        const double weight = std::sqrt(std::max(ev(kept[k]), 0.0));
        for (Eigen::Index x = 0; x < d; ++x) {
            out(x * rank + k) = weight * v(x);
        }
    }
    Layout layout = rho.layout().concat(Layout::single(new_label, rank));
    return PureState::normalized(std::move(layout), std::move(out));
}

// --- local operations -------------------------------------------------------

Vector apply_local(const PureState &psi, std::string_view label, const Matrix &op, Layout *out_layout,
                   std::string new_label) {
    const internal::Split s = internal::split_dims(psi.layout(), label);
    if (op.cols() != s.dim) {
        throw std::invalid_argument("operator width does not match dimension of '" + std::string(label) + "'");
    }
    if (out_layout) {
        *out_layout = psi.layout().replaced(label, new_label.empty() ? std::string(label) : std::move(new_label),
                                            op.rows());
    }
    return internal::apply_left(psi.amplitudes(), s.pre, s.dim, s.post, op);
}

PureState apply_unitary(const PureState &psi, std::string_view label, const Matrix &unitary) {
    Layout layout;
    Vector v = apply_local(psi, label, unitary, &layout);
    return PureState(std::move(layout), std::move(v), 1e-8);
}

DensityOperator apply_unitary(const DensityOperator &rho, std::string_view label, const Matrix &unitary) {
    const internal::Split s = internal::split_dims(rho.layout(), label);
    if (unitary.rows() != s.dim || unitary.cols() != s.dim) {
        throw std::invalid_argument("unitary does not match dimension of '" + std::string(label) + "'");
    }
    Matrix half = internal::apply_left(rho.matrix(), s.pre, s.dim, s.post, unitary);
    Matrix full = internal::apply_left(half.adjoint(), s.pre, s.dim, s.post, unitary).adjoint();
    return DensityOperator::unchecked(rho.layout(), std::move(full));
}

DensityOperator apply_channel(const DensityOperator &rho, const ChannelSpec &channel) {
    const Layout &layout = rho.layout();
    const size_t pos = layout.position(channel.input());
    if (layout[pos].dim != channel.in_dim()) {
        throw std::invalid_argument("channel input dimension " + std::to_string(channel.in_dim()) +
                                    " does not match '" + channel.input() + "'");
    }
    if (channel.output() != channel.input() && layout.contains(channel.output())) {
        throw std::invalid_argument("channel output label '" + channel.output() + "' already in layout");
    }
    const internal::Split s = internal::split_dims(layout, channel.input());
    const Matrix &v = channel.isometry();
    Matrix half = internal::apply_left(rho.matrix(), s.pre, s.dim, s.post, v);
    Matrix full = internal::apply_left(half.adjoint(), s.pre, s.dim, s.post, v).adjoint();

    const std::string env = unused_label(layout, "#env");
    std::vector<Part> parts;
    for (size_t i = 0; i < layout.size(); ++i) {
        if (i == pos) {
            parts.push_back(Part{channel.output(), channel.out_dim()});
            parts.push_back(Part{env, channel.env_dim()});
        } else {
            parts.push_back(layout[i]);
        }
    }
    Layout widened(std::move(parts));
    Labels keep = widened.labels();
    std::erase(keep, env);
    return partial_trace(DensityOperator::unchecked(std::move(widened), std::move(full)), keep);
}

}  // namespace qmerge
