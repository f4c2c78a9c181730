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

#include "qmerge/layout.h"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace qmerge {

Layout::Layout(std::vector<Part> parts) : parts_(std::move(parts)) {
    if (parts_.size() > 64) {
        throw std::invalid_argument("layout supports at most 64 subsystems");
    }
    std::unordered_set<std::string> seen;
    for (const auto &p : parts_) {
        if (p.label.empty()) {
            throw std::invalid_argument("subsystem label must be non-empty");
        }
        if (p.dim < 1) {
            throw std::invalid_argument("subsystem '" + p.label + "' has dimension < 1");
        }
        if (!seen.insert(p.label).second) {
            throw std::invalid_argument("duplicate subsystem label '" + p.label + "'");
        }
    }
}

Layout Layout::single(std::string label, int64_t dim) {
    return Layout({Part{std::move(label), dim}});
}

int64_t Layout::total_dim() const {
    int64_t d = 1;
    for (const auto &p : parts_) {
        d *= p.dim;
    }
    return d;
}

std::vector<int64_t> Layout::dims() const {
    std::vector<int64_t> out;
    out.reserve(parts_.size());
    for (const auto &p : parts_) {
        out.push_back(p.dim);
    }
    return out;
}

Labels Layout::labels() const {
    Labels out;
    out.reserve(parts_.size());
    for (const auto &p : parts_) {
        out.push_back(p.label);
    }
    return out;
}

std::optional<size_t> Layout::find(std::string_view label) const {
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i].label == label) {
            return i;
        }
    }
    return std::nullopt;
}

size_t Layout::position(std::string_view label) const {
    auto pos = find(label);
    if (!pos) {
        throw std::invalid_argument("unknown subsystem label '" + std::string(label) + "' in layout " +
                                    to_string());
    }
    return *pos;
}

int64_t Layout::dim_of(const Labels &labels) const {
    int64_t d = 1;
    for (const auto &l : labels) {
        d *= dim_of(l);
    }
    return d;
}

uint64_t Layout::mask_of(const Labels &labels) const {
    uint64_t mask = 0;
    for (const auto &l : labels) {
        uint64_t bit = uint64_t{1} << position(l);
        if (mask & bit) {
            throw std::invalid_argument("label '" + l + "' listed twice");
        }
        mask |= bit;
    }
    return mask;
}

Labels Layout::labels_of(uint64_t mask) const {
    Labels out;
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (mask & (uint64_t{1} << i)) {
            out.push_back(parts_[i].label);
        }
    }
    return out;
}

Labels Layout::canonical(const Labels &labels) const { return labels_of(mask_of(labels)); }

Layout Layout::select(const Labels &labels) const {
    uint64_t mask = mask_of(labels);
    std::vector<Part> out;
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (mask & (uint64_t{1} << i)) {
            out.push_back(parts_[i]);
        }
    }
    return Layout(std::move(out));
}

Layout Layout::complement(const Labels &labels) const {
    uint64_t mask = mask_of(labels);
    std::vector<Part> out;
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (!(mask & (uint64_t{1} << i))) {
            out.push_back(parts_[i]);
        }
    }
    return Layout(std::move(out));
}

Layout Layout::concat(const Layout &other) const {
    std::vector<Part> out = parts_;
    out.insert(out.end(), other.parts_.begin(), other.parts_.end());
    return Layout(std::move(out));
}

Layout Layout::reordered(const Labels &order) const {
    if (order.size() != parts_.size()) {
        throw std::invalid_argument("new order is not a permutation of " + to_string());
    }
    mask_of(order);  // rejects unknown and repeated labels
    std::vector<Part> out;
    out.reserve(order.size());
    for (const auto &l : order) {
        out.push_back(parts_[position(l)]);
    }
    return Layout(std::move(out));
}

Layout Layout::replaced(std::string_view label, std::string new_label, int64_t new_dim) const {
    std::vector<Part> out = parts_;
    out[position(label)] = Part{std::move(new_label), new_dim};
    return Layout(std::move(out));
}

std::string Layout::to_string() const {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << ", ";
        os << parts_[i].label << ':' << parts_[i].dim;
    }
    os << ')';
    return os.str();
}

std::vector<int64_t> permutation_index_map(const Layout &layout, const Labels &order) {
    Layout target = layout.reordered(order);
    const size_t m = layout.size();

    std::vector<int64_t> old_stride(m);
    int64_t s = 1;
    for (size_t i = m; i-- > 0;) {
        old_stride[i] = s;
        s *= layout[i].dim;
    }
    // Stride in the old layout of each digit of the new layout.
    std::vector<int64_t> stride(m);
    for (size_t j = 0; j < m; ++j) {
        stride[j] = old_stride[layout.position(target[j].label)];
    }

    const int64_t total = layout.total_dim();
    std::vector<int64_t> map(static_cast<size_t>(total));
    std::vector<int64_t> digit(m, 0);
    int64_t old_index = 0;
    for (int64_t n = 0; n < total; ++n) {
        map[static_cast<size_t>(n)] = old_index;
        // Odometer increment over the new layout's digits.
        for (size_t j = m; j-- > 0;) {
            if (++digit[j] < target[j].dim) {
                old_index += stride[j];
                break;
            }
            old_index -= stride[j] * (target[j].dim - 1);
            digit[j] = 0;
        }
    }
    return map;
}

}  // namespace qmerge
