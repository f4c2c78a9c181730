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

// Upper-bound search for min over channels of S(A Lambda(U)).

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qmerge/applications.h"

namespace qmerge {

ChannelSpec channel_from_parameters(const std::string &input, int64_t in_dim, int64_t out_dim, int64_t env_dim,
                                    const Eigen::VectorXd &params) {
    const int64_t d = out_dim * env_dim;
    if (d < in_dim) throw std::invalid_argument("out_dim * env_dim must be >= the input dimension");
    if (params.size() != d * d) throw std::invalid_argument("expected (out*env)^2 parameters");

    Matrix h = Matrix::Zero(d, d);
    Eigen::Index p = 0;
    for (int64_t j = 0; j < d; ++j) h(j, j) = params(p++);
    for (int64_t j = 0; j < d; ++j) {
        for (int64_t l = j + 1; l < d; ++l) {
            h(j, l) = Complex(params(p), params(p + 1));
            h(l, j) = std::conj(h(j, l));
            p += 2;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(d);
    for (int64_t j = 0; j < d; ++j) phases(j) = std::polar(1.0, es.eigenvalues()(j));
    const Matrix g = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return ChannelSpec(input, input, out_dim, env_dim, g.leftCols(in_dim), 1e-8);
}

double channel_output_entropy(const DensityOperator &rho, const Labels &a, const ChannelSpec &channel) {
    DensityOperator out = apply_channel(rho, channel);
    Labels keep = a;
    keep.push_back(channel.output());
    return entropy(out, keep);
}

EpEstimate entanglement_of_purification(const DensityOperator &rho, const Labels &a, const std::string &u,
                                        const EpOptions &options, Rng &rng) {
    if (options.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (options.out_cap < 0 || options.env_cap < 0) throw std::invalid_argument("caps must be >= 1");
    if (a.empty()) throw std::invalid_argument("A must be non-empty");
    Labels au = a;
    au.push_back(u);
    const DensityOperator reduced = partial_trace(rho, au);
    const int64_t du = reduced.layout().dim_of(u);

    EpEstimate best;
    best.channel = ChannelSpec::identity(u, u, du);
    best.value = channel_output_entropy(reduced, a, best.channel);
    {
        ChannelSpec trace = ChannelSpec::full_trace(u, u, du);
        const double v = channel_output_entropy(reduced, a, trace);
        if (v < best.value) {
            best.value = v;
            best.channel = trace;
        }
    }
    best.restarts_used = options.restarts;
    best.converged = true;
    if (du == 1) return best;

    const int64_t out_dim = options.out_cap ? options.out_cap : du;
    int64_t env_dim = options.env_cap ? options.env_cap : du;
    if (out_dim * env_dim < du) env_dim = (du + out_dim - 1) / out_dim;
    const int64_t d = out_dim * env_dim;
    const Eigen::Index n_params = d * d;

    auto objective = [&](const Eigen::VectorXd &theta) {
        return channel_output_entropy(reduced, a, channel_from_parameters(u, du, out_dim, env_dim, theta));
    };

    for (int r = 0; r < options.restarts; ++r) {
        Rng local = rng.split(static_cast<uint64_t>(r));
        Eigen::VectorXd theta = Eigen::VectorXd::Zero(n_params);
        if (r > 0) {
            for (Eigen::Index i = 0; i < n_params; ++i) theta(i) = local.normal();
        }
        double value = objective(theta);
        double step = 0.3;
        std::vector<double> history{value};
        bool converged = false;
        for (int it = 1; it <= options.max_iterations; ++it) {
            Eigen::VectorXd candidate = theta;
            for (Eigen::Index i = 0; i < n_params; ++i) candidate(i) += step * local.normal();
            const double v = objective(candidate);
            if (v < value) {
                theta = std::move(candidate);
                value = v;
                step = std::min(step * 1.5, 2.0);
            } else {
                step = std::max(step * 0.93, 1e-9);
            }
            history.push_back(value);
            if (it >= options.window &&
                history[static_cast<size_t>(it - options.window)] - value < options.tolerance) {
                converged = true;
                break;
            }
        }
        best.converged = best.converged && converged;
        if (value < best.value) {
            best.value = value;
            best.channel = channel_from_parameters(u, du, out_dim, env_dim, theta);
        }
    }
    return best;
}

SideInfoRates side_info_rates(const PureState &psi, const Labels &alice, const ChannelSpec &channel,
                              const EpOptions &options, Rng &rng) {
    const Layout &layout = psi.layout();
    if (!layout.contains(channel.input())) {
        throw std::invalid_argument("channel input '" + channel.input() + "' is not in the state");
    }
    if (layout.mask_of(alice) & layout.mask_of({channel.input()})) {
        throw std::invalid_argument("channel input overlaps Alice's labels");
    }
    Labels keep = alice;
    keep.push_back(channel.input());
    const DensityOperator with_u = apply_channel(partial_trace(psi, keep), channel);

    SideInfoRates rates;
    rates.rate_a = conditional_entropy(with_u, alice, {channel.output()});
    rates.ep = entanglement_of_purification(with_u, alice, channel.output(), options, rng);
    rates.rate_b = rates.ep.value - rates.rate_a;
    return rates;
}

}  // namespace qmerge
