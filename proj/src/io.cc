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

#include "qmerge/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmerge/random.h"

namespace qmerge {

ParseError::ParseError(const std::string &what, int line, int column)
    : std::invalid_argument(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                                           std::to_string(column) + ")"
                                     : what),
      line_(line),
      column_(column) {}

namespace {

std::pair<int, int> line_column(std::string_view text, size_t byte) {
    int line = 1, column = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

/// Parse failure positioned at the first occurrence of `"key"` in the text.
[[noreturn]] void fail_at(std::string_view text, const std::string &key, const std::string &what) {
    const size_t pos = key.empty() ? std::string_view::npos : text.find("\"" + key + "\"");
    if (pos == std::string_view::npos) throw ParseError(what, 1, 1);
    auto [line, column] = line_column(text, pos);
    throw ParseError(what, line, column);
}

Json parse_json_text(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(std::string("malformed JSON: ") + e.what(), line, column);
    }
}

template <typename T>
T field(std::string_view text, const Json &j, const std::string &key) {
    if (!j.is_object() || !j.contains(key)) fail_at(text, key, "missing field \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception &) {
        fail_at(text, key, "field \"" + key + "\" has the wrong type");
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Labels default_labels(size_t count) {
    if (count == 1) return {"A"};
    if (count == 2) return {"A", "B"};
    if (count == 3) return {"A", "B", "R"};
    Labels out{"A", "B"};
    for (size_t i = 1; i + 2 <= count; ++i) out.push_back("C" + std::to_string(i));
    return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

int64_t parse_int(std::string_view s, const std::string &what) {
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("invalid " + what + " '" + std::string(s) + "'");
    }
    return v;
}

PureState ghz(int64_t parties) {
    if (parties < 2 || parties > 24) throw std::invalid_argument("ghz preset needs 2..24 parties");
    std::vector<Part> parts;
    for (const auto &l : default_labels(static_cast<size_t>(parties))) parts.push_back({l, 2});
    if (parties == 3) parts[2].label = "C1";
    Layout layout(std::move(parts));
    Vector v = Vector::Zero(layout.total_dim());
    v(0) = M_SQRT1_2;
    v(v.size() - 1) = M_SQRT1_2;
    return PureState(std::move(layout), std::move(v));
}

}  // namespace

// --- states -----------------------------------------------------------------

PureState merge_test_state(uint64_t seed, double max_conditional_entropy) {
    Rng rng(seed);
    const Layout layout({{"A", 2}, {"B", 2}, {"R", 2}});
    for (int attempt = 0; attempt < 100000; ++attempt) {
        PureState psi = random_pure_state(layout, rng);
        if (EntropyReport(psi).conditional_entropy({"A"}, {"B"}) <= max_conditional_entropy) return psi;
    }
    throw std::invalid_argument("no state with the requested conditional entropy found");
}

bool is_preset(std::string_view name) {
    static const std::vector<std::string_view> fixed{"epr", "cc", "cc-pure", "example1"};
    if (std::find(fixed.begin(), fixed.end(), name) != fixed.end()) return true;
    return name.starts_with("ghz:") || name.starts_with("random-pure:") || name.starts_with("merge-test:");
}

AnyState preset_state(std::string_view name) {
    const Layout ab({{"A", 2}, {"B", 2}});
    if (name == "epr") {
        Vector v = Vector::Zero(4);
        v(0) = v(3) = M_SQRT1_2;
        return PureState(ab, std::move(v));
    }
    if (name == "cc") {
        Matrix m = Matrix::Zero(4, 4);
        m(0, 0) = m(3, 3) = 0.5;
        return DensityOperator(ab, std::move(m));
    }
    if (name == "cc-pure") {
        Vector v = Vector::Zero(8);
        v(0) = v(7) = M_SQRT1_2;
        return PureState(Layout({{"A", 2}, {"B", 2}, {"R", 2}}), std::move(v));
    }
    if (name == "example1") {
        Matrix m = Matrix::Zero(4, 4);
        m(0, 0) = m(2, 2) = 0.5;
        return DensityOperator(ab, std::move(m));
    }
    const auto pieces = split(name, ':');
    if (pieces[0] == "ghz" && pieces.size() == 2) {
        return ghz(parse_int(pieces[1], "party count"));
    }
    if (pieces[0] == "merge-test" && pieces.size() == 2) {
        return merge_test_state(static_cast<uint64_t>(parse_int(pieces[1], "seed")));
    }
    if (pieces[0] == "random-pure" && pieces.size() == 3) {
        const auto dims = split(pieces[1], 'x');
        const Labels labels = default_labels(dims.size());
        std::vector<Part> parts;
        double total = 1.0;
        for (size_t i = 0; i < dims.size(); ++i) {
            const int64_t d = parse_int(dims[i], "dimension");
            if (d < 1) throw std::invalid_argument("dimensions must be >= 1");
            total *= static_cast<double>(d);
            parts.push_back({labels[i], d});
        }
        if (total > double(int64_t{1} << 26)) throw CapExceeded("random preset dimension too large");
        Rng rng(static_cast<uint64_t>(parse_int(pieces[2], "seed")));
        return random_pure_state(Layout(std::move(parts)), rng);
    }
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

AnyState parse_state_json(std::string_view text) {
    const Json j = parse_json_text(text);
    if (!j.is_object()) throw ParseError("state description must be a JSON object", 1, 1);
    const auto labels = field<std::vector<std::string>>(text, j, "labels");
    const auto dims = field<std::vector<int64_t>>(text, j, "dims");
    const auto kind = field<std::string>(text, j, "kind");
    const auto re = field<std::vector<double>>(text, j, "re");
    const auto im = field<std::vector<double>>(text, j, "im");
    if (labels.size() != dims.size()) fail_at(text, "dims", "\"labels\" and \"dims\" differ in length");
    if (re.size() != im.size()) fail_at(text, "im", "\"re\" and \"im\" differ in length");

    std::vector<Part> parts;
    for (size_t i = 0; i < labels.size(); ++i) parts.push_back({labels[i], dims[i]});
    Layout layout;
    try {
        layout = Layout(std::move(parts));
    } catch (const std::invalid_argument &e) {
        fail_at(text, "labels", e.what());
    }
    const int64_t d = layout.total_dim();

    if (kind == "pure") {
        if (static_cast<int64_t>(re.size()) != d) {
            fail_at(text, "re", "expected " + std::to_string(d) + " amplitudes");
        }
        Vector v(d);
        for (int64_t i = 0; i < d; ++i) v(i) = Complex(re[i], im[i]);
        const double norm = v.norm();
        if (std::abs(norm - 1.0) > kFileTolerance) fail_at(text, "re", "state vector is not normalized");
        if (std::abs(norm - 1.0) > kStateTolerance) v /= norm;
        return PureState(std::move(layout), std::move(v));
    }
    if (kind == "mixed") {
        if (static_cast<int64_t>(re.size()) != d * d) {
            fail_at(text, "re", "expected " + std::to_string(d * d) + " matrix entries");
        }
        Matrix m(d, d);
        for (int64_t r = 0; r < d; ++r) {
            for (int64_t c = 0; c < d; ++c) m(r, c) = Complex(re[r * d + c], im[r * d + c]);
        }
        if (max_abs(m - m.adjoint()) > kFileTolerance) fail_at(text, "re", "density matrix is not Hermitian");
        const Complex tr = m.trace();
        if (std::abs(tr - 1.0) > kFileTolerance) fail_at(text, "re", "density matrix trace is not 1");
        if (max_abs(m - m.adjoint()) > 0.0 || std::abs(tr - 1.0) > kStateTolerance) {
            m = 0.5 * (m + m.adjoint()) / tr.real();
        }
        try {
            return DensityOperator(std::move(layout), std::move(m));
        } catch (const std::invalid_argument &e) {
            fail_at(text, "re", e.what());
        }
    }
    fail_at(text, "kind", "\"kind\" must be \"pure\" or \"mixed\"");
}

AnyState parse_state(std::string_view spec) {
    if (is_preset(spec)) return preset_state(spec);
    const std::string path(spec);
    if (!std::filesystem::exists(path)) {
        throw std::invalid_argument("'" + path + "' is neither a preset nor an existing file");
    }
    return parse_state_json(read_file(path));
}

std::string state_to_json(const AnyState &state) {
    Json j;
    const Layout &layout = layout_of(state);
    j["labels"] = layout.labels();
    j["dims"] = layout.dims();
    std::vector<double> re, im;
    if (const auto *psi = std::get_if<PureState>(&state)) {
        j["kind"] = "pure";
        for (Eigen::Index i = 0; i < psi->amplitudes().size(); ++i) {
            re.push_back(psi->amplitudes()(i).real());
            im.push_back(psi->amplitudes()(i).imag());
        }
    } else {
        j["kind"] = "mixed";
        const Matrix &m = std::get<DensityOperator>(state).matrix();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                re.push_back(m(r, c).real());
                im.push_back(m(r, c).imag());
            }
        }
    }
    j["re"] = re;
    j["im"] = im;
    return j.dump();
}

ChannelSpec parse_channel_json(std::string_view text) {
    const Json j = parse_json_text(text);
    if (!j.is_object()) throw ParseError("channel description must be a JSON object", 1, 1);
    const auto input = field<std::string>(text, j, "input");
    const auto output = field<std::string>(text, j, "output");
    const auto out_dim = field<int64_t>(text, j, "out_dim");
    const auto env_dim = field<int64_t>(text, j, "env_dim");
    const auto re = field<std::vector<double>>(text, j, "re");
    const auto im = field<std::vector<double>>(text, j, "im");
    if (re.size() != im.size()) fail_at(text, "im", "\"re\" and \"im\" differ in length");
    const int64_t rows = out_dim * env_dim;
    if (out_dim < 1 || env_dim < 1 || re.empty() || static_cast<int64_t>(re.size()) % rows != 0) {
        fail_at(text, "re", "isometry size is not a multiple of out_dim*env_dim");
    }
    const int64_t cols = static_cast<int64_t>(re.size()) / rows;
    Matrix v(rows, cols);
    for (int64_t c = 0; c < cols; ++c) {
        for (int64_t r = 0; r < rows; ++r) v(r, c) = Complex(re[c * rows + r], im[c * rows + r]);
    }
    try {
        return ChannelSpec(input, output, out_dim, env_dim, std::move(v), kFileTolerance);
    } catch (const std::invalid_argument &e) {
        fail_at(text, "re", e.what());
    }
}

ChannelSpec parse_channel(std::string_view spec, const Layout &layout) {
    const auto pieces = split(spec, ':');
    if (pieces.size() == 2 && (pieces[0] == "identity" || pieces[0] == "trace" || pieces[0] == "dephase")) {
        const int64_t d = layout.dim_of(pieces[1]);
        if (pieces[0] == "identity") return ChannelSpec::identity(pieces[1], "U", d);
        if (pieces[0] == "trace") return ChannelSpec::full_trace(pieces[1], "U", d);
        return ChannelSpec::dephasing(pieces[1], "U", d);
    }
    const std::string path(spec);
    if (!std::filesystem::exists(path)) {
        throw std::invalid_argument("'" + path + "' is neither a builtin channel nor an existing file");
    }
    return parse_channel_json(read_file(path));
}

DensityOperator as_density(const AnyState &state) {
    if (const auto *psi = std::get_if<PureState>(&state)) return psi->density();
    return std::get<DensityOperator>(state);
}

const Layout &layout_of(const AnyState &state) {
    return std::visit([](const auto &s) -> const Layout & { return s.layout(); }, state);
}

Labels split_labels(std::string_view text) {
    Labels out;
    if (text.empty()) return out;
    for (auto &l : split(text, ',')) {
        if (l.empty()) throw std::invalid_argument("empty label in '" + std::string(text) + "'");
        out.push_back(std::move(l));
    }
    return out;
}

// --- formatting -------------------------------------------------------------

std::string format_bits(double value) {
    if (std::abs(value) < 5e-13) value = 0.0;  // no "-0.000000000000"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.12f", value);
    return buf;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

Json to_json(const MergePlan &p) {
    Json j;
    j["copies"] = p.copies;
    j["block_size"] = p.block_size;
    j["outcomes"] = p.outcomes;
    j["alice_dim"] = p.alice_dim;
    j["k_boost"] = p.k_boost;
    j["conditional_entropy"] = p.conditional_entropy;
    j["slack_bits"] = p.slack_bits;
    j["predicted_epr_bits"] = p.predicted_epr_bits;
    j["predicted_cbits"] = p.predicted_cbits;
    j["target_rate"] = p.target_rate;
    j["warning"] = p.warning;
    return j;
}

Json to_json(const MergeOutcome &o) {
    Json j;
    j["outcome_index"] = o.outcome_index;
    j["probability"] = o.probability;
    j["decoupling_error"] = o.decoupling_error;
    j["uhlmann_fidelity"] = o.uhlmann_fidelity;
    j["achieved_fidelity"] = o.achieved_fidelity;
    j["epr_net_bits"] = o.epr_net_bits;
    j["cbits"] = o.cbits;
    return j;
}

MergeOutcome merge_outcome_from_json(const Json &j) {
    MergeOutcome o;
    o.outcome_index = j.at("outcome_index").get<int64_t>();
    o.probability = j.at("probability").get<double>();
    o.decoupling_error = j.at("decoupling_error").get<double>();
    o.uhlmann_fidelity = j.at("uhlmann_fidelity").get<double>();
    o.achieved_fidelity = j.at("achieved_fidelity").get<double>();
    o.epr_net_bits = j.at("epr_net_bits").get<double>();
    o.cbits = j.at("cbits").get<double>();
    return o;
}

Json to_json(const CurveRow &r) {
    Json j;
    j["copies"] = r.copies;
    j["trials"] = r.trials;
    j["skipped"] = r.skipped;
    j["block_size"] = r.plan.block_size;
    j["outcomes"] = r.plan.outcomes;
    j["k_boost"] = r.plan.k_boost;
    j["epr_net_bits"] = r.epr_net_bits;
    j["cbits"] = r.cbits;
    j["decoupling_mean"] = r.decoupling_mean;
    j["decoupling_median"] = r.decoupling_median;
    j["decoupling_min"] = r.decoupling_min;
    j["decoupling_max"] = r.decoupling_max;
    j["fidelity_mean"] = r.fidelity_mean;
    j["fidelity_median"] = r.fidelity_median;
    j["fidelity_min"] = r.fidelity_min;
    j["max_uhlmann_gap"] = r.max_uhlmann_gap;
    return j;
}

Json to_json(const RateRegion &region) {
    Json j;
    j["kind"] = region.kind == RegionKind::kCompression ? "compression" : "multiple-access";
    j["parties"] = region.parties;
    j["relation"] = region.kind == RegionKind::kCompression ? ">=" : "<=";
    Json cs = Json::array();
    for (const auto &c : region.constraints) {
        Json cj;
        cj["parties"] = c.parties;
        cj["bound"] = c.bound;
        cj["display"] = format_bits(c.bound);
        cs.push_back(std::move(cj));
    }
    j["constraints"] = std::move(cs);
    return j;
}

Json to_json(const Membership &m, const RateRegion &region) {
    Json j;
    j["contained"] = m.contained;
    Json v = Json::array();
    for (size_t i : m.violated) v.push_back(region.constraints[i].parties);
    j["violated"] = std::move(v);
    return j;
}

Json to_json(const EoAResult &r) {
    Json j;
    j["value"] = r.value;
    j["display"] = format_bits(r.value);
    j["argmin"] = r.argmin;
    Json cuts = Json::array();
    for (const auto &c : r.cuts) {
        Json cj;
        cj["with_alice"] = c.with_alice;
        cj["alice_side"] = c.alice_side;
        cj["bob_side"] = c.bob_side;
        cj["value"] = c.value;
        cuts.push_back(std::move(cj));
    }
    j["cuts"] = std::move(cuts);
    return j;
}

Json to_json(const ChannelSpec &ch) {
    Json j;
    j["input"] = ch.input();
    j["output"] = ch.output();
    j["out_dim"] = ch.out_dim();
    j["env_dim"] = ch.env_dim();
    std::vector<double> re, im;
    const Matrix &v = ch.isometry();
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            re.push_back(v(r, c).real());
            im.push_back(v(r, c).imag());
        }
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

Json to_json(const EpEstimate &e) {
    Json j;
    j["value"] = e.value;
    j["restarts_used"] = e.restarts_used;
    j["converged"] = e.converged;
    j["upper_bound"] = true;
    j["channel"] = to_json(e.channel);
    return j;
}

Json to_json(const SideInfoRates &r) {
    Json j;
    j["rate_a"] = r.rate_a;
    j["rate_b"] = r.rate_b;
    j["rate_a_display"] = format_bits(r.rate_a);
    j["rate_b_display"] = format_bits(r.rate_b);
    j["entanglement_of_purification"] = to_json(r.ep);
    return j;
}

Json entropy_report_json(const EntropyReport &report, size_t max_size) {
    const Layout &layout = report.layout();
    const size_t m = layout.size();
    if (m > 20) throw CapExceeded("too many subsystems for a full entropy report");
    Json j;
    j["layout"] = Json::array();
    for (const auto &p : layout.parts()) j["layout"].push_back({{"label", p.label}, {"dim", p.dim}});
    j["pure"] = report.is_pure();
    Json subsets = Json::array();
    for (uint64_t mask = 1; mask < (uint64_t{1} << m); ++mask) {
        if (static_cast<size_t>(std::popcount(mask)) > max_size) continue;
        const Labels subset = layout.labels_of(mask);
        const double s = report.entropy(subset);
        subsets.push_back({{"subset", subset}, {"entropy", s}, {"display", format_bits(s)}});
    }
    j["entropies"] = std::move(subsets);
    Json pairs = Json::array();
    for (size_t x = 0; x < m; ++x) {
        for (size_t y = 0; y < m; ++y) {
            if (x == y) continue;
            const Labels a{layout[x].label}, b{layout[y].label};
            const double ce = report.conditional_entropy(a, b);
            pairs.push_back({{"a", a[0]},
                             {"b", b[0]},
                             {"conditional_entropy", ce},
                             {"mutual_information", report.mutual_information(a, b)},
                             {"coherent_information", report.coherent_information(a, b)},
                             {"coherent_information_legacy",
                              report.coherent_information(a, b, CoherentForm::kLegacy)},
                             {"display", format_bits(ce)}});
        }
    }
    j["pairs"] = std::move(pairs);
    return j;
}

// --- CSV --------------------------------------------------------------------

std::string to_csv(const Table &table) {
    auto line = [](const std::vector<std::string> &cells) {
        std::string out;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
            if (quote) {
                out += '"';
                for (char c : cells[i]) {
                    if (c == '"') out += '"';
                    out += c;
                }
                out += '"';
            } else {
                out += cells[i];
            }
        }
        return out + '\n';
    };
    std::string out = line(table.header);
    for (const auto &r : table.rows) out += line(r);
    return out;
}

namespace {

std::string join_labels(const Labels &labels) {
    std::string out;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ' ';
        out += labels[i];
    }
    return out;
}

}  // namespace

Table outcomes_table(const std::vector<MergeOutcome> &outcomes) {
    Table t{{"outcome_index", "probability", "decoupling_error", "uhlmann_fidelity", "achieved_fidelity",
             "epr_net_bits", "cbits"},
            {}};
    for (const auto &o : outcomes) {
        t.rows.push_back({std::to_string(o.outcome_index), format_double(o.probability),
                          format_double(o.decoupling_error), format_double(o.uhlmann_fidelity),
                          format_double(o.achieved_fidelity), format_double(o.epr_net_bits),
                          format_double(o.cbits)});
    }
    return t;
}

Table curve_table(const std::vector<CurveRow> &rows) {
    Table t{{"copies", "trials", "skipped", "block_size", "outcomes", "k_boost", "epr_net_bits", "cbits",
             "decoupling_mean", "decoupling_median", "decoupling_min", "decoupling_max", "fidelity_mean",
             "fidelity_median", "fidelity_min", "max_uhlmann_gap"},
            {}};
    for (const auto &r : rows) {
        t.rows.push_back({std::to_string(r.copies), std::to_string(r.trials), r.skipped ? "true" : "false",
                          std::to_string(r.plan.block_size), std::to_string(r.plan.outcomes),
                          std::to_string(r.plan.k_boost), format_double(r.epr_net_bits), format_double(r.cbits),
                          format_double(r.decoupling_mean), format_double(r.decoupling_median),
                          format_double(r.decoupling_min), format_double(r.decoupling_max),
                          format_double(r.fidelity_mean), format_double(r.fidelity_median),
                          format_double(r.fidelity_min), format_double(r.max_uhlmann_gap)});
    }
    return t;
}

Table region_table(const RateRegion &region) {
    Table t{{"parties", "relation", "bound"}, {}};
    const char *rel = region.kind == RegionKind::kCompression ? ">=" : "<=";
    for (const auto &c : region.constraints) {
        t.rows.push_back({join_labels(c.parties), rel, format_double(c.bound)});
    }
    return t;
}

Table cuts_table(const EoAResult &result) {
    Table t{{"with_alice", "alice_side", "bob_side", "value"}, {}};
    for (const auto &c : result.cuts) {
        t.rows.push_back({join_labels(c.with_alice), format_double(c.alice_side), format_double(c.bob_side),
                          format_double(c.value)});
    }
    return t;
}

}  // namespace qmerge
