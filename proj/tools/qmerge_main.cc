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

// qmerge: entropies, state merging simulation and rate regions from the
// command line. Results go to stdout, diagnostics to stderr.
//
// Exit codes: 0 success, 1 internal failure, 2 usage error, 3 dimension cap
// exceeded.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qmerge/io.h"
#include "qmerge/merging.h"

namespace {

using namespace qmerge;

constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct Common {
    std::string state;
    std::string format = "auto";
    int64_t dim_cap = int64_t{1} << 20;
    int64_t dm_cap = int64_t{1} << 12;
};

class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

void check_caps(const AnyState &state, const Common &c) {
    const int64_t d = layout_of(state).total_dim();
    if (std::holds_alternative<PureState>(state) && d > c.dim_cap) {
        throw CapExceeded("state has " + std::to_string(d) + " amplitudes, cap is " + std::to_string(c.dim_cap));
    }
    if (std::holds_alternative<DensityOperator>(state) && d > c.dm_cap) {
        throw CapExceeded("density matrix side " + std::to_string(d) + " exceeds cap " + std::to_string(c.dm_cap));
    }
}

AnyState load(const Common &c) {
    AnyState s = parse_state(c.state);
    check_caps(s, c);
    return s;
}

std::string resolved_format(const Common &c, const std::string &fallback) {
    const std::string f = c.format == "auto" ? fallback : c.format;
    if (f != "json" && f != "csv" && f != "text") throw UsageError("unknown format '" + f + "'");
    return f;
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

PureState as_pure(const AnyState &state) {
    if (const auto *psi = std::get_if<PureState>(&state)) return *psi;
    const auto &rho = std::get<DensityOperator>(state);
    std::string label = "R";
    while (rho.layout().contains(label)) label += '_';
    return purify(rho, label);
}

Matrix hadamard_basis(int64_t dim) {
    if (dim < 1 || (dim & (dim - 1)) != 0) throw UsageError("hadamard basis needs a power-of-two dimension");
    Matrix h(1, 1);
    h(0, 0) = 1.0;
    Matrix h2(2, 2);
    h2 << M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2;
    while (h.rows() < dim) {
        Matrix next(h.rows() * 2, h.cols() * 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) next.block(i * h.rows(), j * h.cols(), h.rows(), h.cols()) = h2(i, j) * h;
        h = std::move(next);
    }
    return h;
}

Matrix fourier_basis(int64_t dim) {
    Matrix f(dim, dim);
    for (int64_t j = 0; j < dim; ++j)
        for (int64_t k = 0; k < dim; ++k)
            f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)), 2.0 * M_PI * double(j * k % dim) / dim);
    return f;
}

std::optional<Matrix> fixed_basis(const std::string &basis, int64_t dim) {
    if (basis == "haar") return std::nullopt;
    if (basis == "hadamard") return hadamard_basis(dim);
    if (basis == "fourier") return fourier_basis(dim);
    if (basis == "computational") return Matrix::Identity(dim, dim);
    throw UsageError("unknown basis '" + basis + "'");
}

std::vector<int> parse_range(const std::string &text) {
    const size_t dots = text.find("..");
    if (dots == std::string::npos) throw UsageError("--curve expects n1..n2");
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw UsageError("--curve range must satisfy 1 <= n1 <= n2");
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
}

std::vector<double> parse_point(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw UsageError("bad rate '" + item + "'");
    }
    return out;
}

// --- subcommands ------------------------------------------------------------

struct EntropyArgs {
    std::string of;
    std::string given;
    bool coherent = false;
    bool legacy = false;
};

std::string run_entropy(const Common &c, const EntropyArgs &a) {
    const AnyState state = load(c);
    const Labels of = split_labels(a.of);
    const Labels given = split_labels(a.given);
    EntropyReport report = std::holds_alternative<PureState>(state)
                               ? EntropyReport(std::get<PureState>(state))
                               : EntropyReport(std::get<DensityOperator>(state));
    if (of.empty()) throw UsageError("--of needs at least one label");
    double value;
    std::string quantity;
    if (a.coherent) {
        value = report.coherent_information(of, given, a.legacy ? CoherentForm::kLegacy : CoherentForm::kSigned);
        quantity = "coherent_information";
    } else {
        value = given.empty() ? report.entropy(of) : report.conditional_entropy(of, given);
        quantity = given.empty() ? "entropy" : "conditional_entropy";
    }
    const std::string fmt = resolved_format(c, "text");
    if (fmt == "text") return format_bits(value) + "\n";
    if (fmt == "csv") return to_csv({{"quantity", "of", "given", "bits"}, {{quantity, a.of, a.given, format_double(value)}}});
    Json j;
    j["quantity"] = quantity;
    j["of"] = of;
    j["given"] = given;
    j["bits"] = value;
    j["display"] = format_bits(value);
    return dump(j);
}

std::string run_report(const Common &c, size_t max_size) {
    const AnyState state = load(c);
    EntropyReport report = std::holds_alternative<PureState>(state)
                               ? EntropyReport(std::get<PureState>(state))
                               : EntropyReport(std::get<DensityOperator>(state));
    const Json j = entropy_report_json(report, max_size);
    const std::string fmt = resolved_format(c, "json");
    if (fmt == "csv") {
        Table t{{"subset", "entropy"}, {}};
        for (const auto &e : j["entropies"]) {
            std::string name;
            for (const auto &l : e["subset"]) name += (name.empty() ? "" : " ") + l.get<std::string>();
            t.rows.push_back({name, format_double(e["entropy"].get<double>())});
        }
        return to_csv(t);
    }
    return dump(j);
}

struct MergeArgs {
    int copies = 1;
    double slack = 1.0;
    int trials = 1;
    uint64_t seed = 0;
    std::string curve;
    bool exhaustive = false;
    std::string alice = "A";
    std::string bob = "B";
    std::string basis = "haar";
};

std::string run_merge_command(const Common &c, const MergeArgs &a) {
    const PureState psi = as_pure(load(c));
    const MergeRoles roles = MergeRoles::resolve(psi.layout(), split_labels(a.alice), split_labels(a.bob));
    if (a.trials < 1) throw UsageError("--trials must be >= 1");
    MergeOptions options;
    options.dim_cap = c.dim_cap;
    const std::string fmt = resolved_format(c, "json");
    if (fmt == "text") throw UsageError("merge supports json and csv output");

    if (!a.curve.empty()) {
        if (a.basis != "haar") throw UsageError("--basis is only supported without --curve");
        MonteCarloOptions mc;
        mc.merge = options;
        const auto rows = monte_carlo_merge(psi, parse_range(a.curve), a.trials, a.slack, a.seed, roles, mc);
        if (fmt == "csv") return to_csv(curve_table(rows));
        Json j;
        j["command"] = "merge";
        j["state"] = c.state;
        j["seed"] = a.seed;
        j["slack_bits"] = a.slack;
        Json arr = Json::array();
        for (const auto &r : rows) arr.push_back(to_json(r));
        j["curve"] = std::move(arr);
        return dump(j);
    }

    const MergePlan plan = plan_merge(psi, a.copies, a.slack, roles);
    if (plan.warning) std::cerr << "warning: no block size meets the entropy budget; using L = 1\n";
    options.alice_unitary = fixed_basis(a.basis, plan.alice_dim);
    const MergeSimulator sim(psi, plan, roles, options);

    std::vector<MergeOutcome> outcomes;
    std::optional<double> ensemble;
    if (a.exhaustive) {
        Rng rng = trial_rng(a.seed, a.copies, 0);
        const Matrix w = sim.draw_unitary(rng);
        outcomes = sim.all_outcomes(w);
        if (plan.outcomes <= options.ensemble_cap) ensemble = sim.ensemble_reference_distance(w);
    } else {
        for (int t = 0; t < a.trials; ++t) {
            Rng rng = trial_rng(a.seed, a.copies, t);
            outcomes.push_back(sim.run(rng));
        }
    }
    if (fmt == "csv") return to_csv(outcomes_table(outcomes));

    Json j;
    j["command"] = "merge";
    j["state"] = c.state;
    j["seed"] = a.seed;
    j["basis"] = a.basis;
    j["mode"] = a.exhaustive ? "exhaustive" : "sampled";
    j["plan"] = to_json(plan);
    Json arr = Json::array();
    double min_fid = 1.0, mean_fid = 0.0, weighted = 0.0;
    for (const auto &o : outcomes) {
        arr.push_back(to_json(o));
        min_fid = std::min(min_fid, o.achieved_fidelity);
        mean_fid += o.achieved_fidelity / static_cast<double>(outcomes.size());
        weighted += o.probability * o.achieved_fidelity;
    }
    j["outcomes"] = std::move(arr);
    Json summary;
    summary["min_achieved_fidelity"] = min_fid;
    summary["mean_achieved_fidelity"] = mean_fid;
    if (a.exhaustive) {
        summary["average_achieved_fidelity"] = weighted;
        if (ensemble) summary["ensemble_reference_distance"] = *ensemble;
    }
    j["summary"] = std::move(summary);
    return dump(j);
}

struct RegionArgs {
    bool mac = false;
    std::string parties;
    std::string point;
    std::string mac_a = "A";
    std::string mac_b = "B";
    std::string mac_c;
};

std::string run_region(const Common &c, const RegionArgs &a) {
    const AnyState state = load(c);
    const Layout &layout = layout_of(state);
    EntropyReport report = std::holds_alternative<PureState>(state)
                               ? EntropyReport(std::get<PureState>(state))
                               : EntropyReport(std::get<DensityOperator>(state));
    RateRegion region;
    if (a.mac) {
        MacGroups g{split_labels(a.mac_a), split_labels(a.mac_b), split_labels(a.mac_c)};
        if (g.c.empty()) {
            Labels ab = g.a;
            ab.insert(ab.end(), g.b.begin(), g.b.end());
            g.c = layout.complement(ab).labels();
        }
        region = mac_region(report, g);
    } else {
        const Labels parties = a.parties.empty() ? layout.labels() : split_labels(a.parties);
        region = compression_region(report, parties);
    }
    std::optional<Membership> membership;
    if (!a.point.empty()) membership = region.contains(parse_point(a.point));

    const std::string fmt = resolved_format(c, "json");
    if (fmt == "text") throw UsageError("region supports json and csv output");
    if (fmt == "csv") return to_csv(region_table(region));
    Json j;
    j["command"] = "region";
    j["state"] = c.state;
    j["region"] = to_json(region);
    if (region.kind == RegionKind::kCompression && region.parties.size() == 2) {
        j["corner_points"] = region.corner_points();
    }
    if (membership) {
        j["point"] = parse_point(a.point);
        j["membership"] = to_json(*membership, region);
    }
    return dump(j);
}

std::string run_eoa(const Common &c, const std::string &alice, const std::string &bob) {
    const AnyState state = load(c);
    const auto *psi = std::get_if<PureState>(&state);
    if (!psi) throw UsageError("eoa needs a pure state");
    const EoAResult r = entanglement_of_assistance(*psi, split_labels(alice), split_labels(bob));
    const std::string fmt = resolved_format(c, "json");
    if (fmt == "text") throw UsageError("eoa supports json and csv output");
    if (fmt == "csv") return to_csv(cuts_table(r));
    Json j;
    j["command"] = "eoa";
    j["state"] = c.state;
    j["result"] = to_json(r);
    return dump(j);
}

struct SideInfoArgs {
    std::string channel;
    std::string alice = "A";
    int restarts = 4;
    uint64_t seed = 0;
    int64_t out_cap = 0;
    int64_t env_cap = 0;
};

std::string run_sideinfo(const Common &c, const SideInfoArgs &a) {
    const PureState psi = as_pure(load(c));
    const ChannelSpec channel = parse_channel(a.channel, psi.layout());
    EpOptions options;
    options.restarts = a.restarts;
    options.out_cap = a.out_cap;
    options.env_cap = a.env_cap;
    Rng rng(a.seed);
    const SideInfoRates rates = side_info_rates(psi, split_labels(a.alice), channel, options, rng);
    const std::string fmt = resolved_format(c, "json");
    if (fmt == "text") throw UsageError("sideinfo supports json and csv output");
    if (fmt == "csv") {
        return to_csv({{"rate_a", "rate_b", "ep_value", "converged"},
                       {{format_double(rates.rate_a), format_double(rates.rate_b), format_double(rates.ep.value),
                         rates.ep.converged ? "true" : "false"}}});
    }
    Json j;
    j["command"] = "sideinfo";
    j["state"] = c.state;
    j["seed"] = a.seed;
    j["rates"] = to_json(rates);
    return dump(j);
}

void add_common(CLI::App *sub, Common &c) {
    sub->add_option("--state", c.state, "Preset name or state file")->required();
    sub->add_option("--format", c.format, "json, csv or text")->check(CLI::IsMember({"auto", "json", "csv", "text"}));
    sub->add_option("--dim-cap", c.dim_cap, "Maximum pure-state dimension")->envname("QMERGE_DIM_CAP");
    sub->add_option("--dm-cap", c.dm_cap, "Maximum density-matrix side");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Partial information and quantum state merging toolkit"};
    app.require_subcommand(1);

    Common common;

    EntropyArgs ea;
    auto *entropy_cmd = app.add_subcommand("entropy", "Entropy S(T) or conditional entropy S(T|T')");
    add_common(entropy_cmd, common);
    entropy_cmd->add_option("--of", ea.of, "Comma-separated labels")->required();
    entropy_cmd->add_option("--given", ea.given, "Comma-separated conditioning labels");
    entropy_cmd->add_flag("--coherent", ea.coherent, "Report I(T>T') = -S(T|T') instead");
    entropy_cmd->add_flag("--legacy", ea.legacy, "With --coherent, clamp at zero");

    size_t max_size = 64;
    auto *report_cmd = app.add_subcommand("report", "Entropies of all label subsets");
    add_common(report_cmd, common);
    report_cmd->add_option("--max-size", max_size, "Largest subset size reported");

    MergeArgs ma;
    auto *merge_cmd = app.add_subcommand("merge", "Simulate state merging");
    add_common(merge_cmd, common);
    merge_cmd->add_option("-n,--copies", ma.copies, "Number of copies")->check(CLI::PositiveNumber);
    merge_cmd->add_option("--slack", ma.slack, "Bits by which the block size backs off the rate")
        ->check(CLI::NonNegativeNumber);
    merge_cmd->add_option("--trials", ma.trials, "Independent runs");
    merge_cmd->add_option("--seed", ma.seed, "Master seed")->required();
    merge_cmd->add_option("--curve", ma.curve, "Aggregate over n1..n2 copies");
    merge_cmd->add_flag("--exhaustive", ma.exhaustive, "Enumerate every outcome of one measurement");
    merge_cmd->add_option("--alice", ma.alice, "Alice's labels");
    merge_cmd->add_option("--bob", ma.bob, "Bob's labels");
    merge_cmd->add_option("--basis", ma.basis, "haar, hadamard, fourier or computational");

    RegionArgs ra;
    auto *region_cmd = app.add_subcommand("region", "Distributed compression or multiple-access rate region");
    add_common(region_cmd, common);
    region_cmd->add_flag("--mac", ra.mac, "Multiple-access region instead of compression");
    region_cmd->add_option("--parties", ra.parties, "Compression parties (default: all labels)");
    region_cmd->add_option("--point", ra.point, "Check membership of r1,r2,...");
    region_cmd->add_option("--mac-a", ra.mac_a, "First sender's labels");
    region_cmd->add_option("--mac-b", ra.mac_b, "Second sender's labels");
    region_cmd->add_option("--mac-c", ra.mac_c, "Decoder labels (default: the rest)");

    std::string alice, bob;
    auto *eoa_cmd = app.add_subcommand("eoa", "Entanglement of assistance over all helper cuts");
    add_common(eoa_cmd, common);
    eoa_cmd->add_option("--alice", alice, "Alice's labels")->required();
    eoa_cmd->add_option("--bob", bob, "Bob's labels")->required();

    SideInfoArgs sa;
    auto *side_cmd = app.add_subcommand("sideinfo", "Side-information coding rates");
    add_common(side_cmd, common);
    side_cmd->add_option("--channel", sa.channel, "Channel file or identity:L, trace:L, dephase:L")->required();
    side_cmd->add_option("--alice", sa.alice, "Alice's labels");
    side_cmd->add_option("--restarts", sa.restarts, "Local-search restarts")->check(CLI::PositiveNumber);
    side_cmd->add_option("--seed", sa.seed, "Master seed")->required();
    side_cmd->add_option("--out-cap", sa.out_cap, "Largest channel output dimension");
    side_cmd->add_option("--env-cap", sa.env_cap, "Largest channel environment dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, std::cout, std::cerr);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        std::string out;
        if (*entropy_cmd) out = run_entropy(common, ea);
        else if (*report_cmd) out = run_report(common, max_size);
        else if (*merge_cmd) out = run_merge_command(common, ma);
        else if (*region_cmd) out = run_region(common, ra);
        else if (*eoa_cmd) out = run_eoa(common, alice, bob);
        else if (*side_cmd) out = run_sideinfo(common, sa);
        std::cout << out << std::flush;
        return 0;
    } catch (const CapExceeded &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
