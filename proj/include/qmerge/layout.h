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

#ifndef QMERGE_LAYOUT_H
#define QMERGE_LAYOUT_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qmerge {

/// An ordered set of subsystem labels. Most operations accept labels in any
/// order and canonicalize to layout order where it matters.
using Labels = std::vector<std::string>;

/// Thrown when a state or intermediate result would exceed a configured
/// dimension cap.
class CapExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct Part {
    std::string label;
    int64_t dim;

    bool operator==(const Part &) const = default;
};

/// Ordered named subsystems with local dimensions.
///
/// Composite basis indices are lexicographic with the first listed part most
/// significant: for parts (A, dA), (B, dB) the basis state |a>|b> has index
/// a * dB + b.
class Layout {
   public:
    Layout() = default;
    explicit Layout(std::vector<Part> parts);

    static Layout single(std::string label, int64_t dim);

    size_t size() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }
    const Part &operator[](size_t i) const { return parts_[i]; }
    const std::vector<Part> &parts() const { return parts_; }

    /// Product of all local dimensions (1 for an empty layout).
    int64_t total_dim() const;
    std::vector<int64_t> dims() const;
    Labels labels() const;

    std::optional<size_t> find(std::string_view label) const;
    bool contains(std::string_view label) const { return find(label).has_value(); }
    /// Position of `label`; throws std::invalid_argument if absent.
    size_t position(std::string_view label) const;
    int64_t dim_of(std::string_view label) const { return parts_[position(label)].dim; }
    int64_t dim_of(const Labels &labels) const;

    /// Sub-layout of the given labels, kept in this layout's order.
    Layout select(const Labels &labels) const;
    /// Layout of every label not in `labels`, in this layout's order.
    Layout complement(const Labels &labels) const;
    /// Labels sorted into this layout's order; rejects duplicates and unknowns.
    Labels canonical(const Labels &labels) const;
    /// Bit i set iff part i is in `labels`.
    uint64_t mask_of(const Labels &labels) const;
    Labels labels_of(uint64_t mask) const;

    /// This layout followed by `other`; throws on duplicate labels.
    Layout concat(const Layout &other) const;
    /// Same parts in the order given by `order`, which must be a permutation.
    Layout reordered(const Labels &order) const;
    /// Copy with one part replaced by a new label/dim at the same position.
    Layout replaced(std::string_view label, std::string new_label, int64_t new_dim) const;

    std::string to_string() const;

    bool operator==(const Layout &) const = default;

   private:
    std::vector<Part> parts_;
};

/// For each composite index of `layout.reordered(order)`, the composite
/// index of the same basis state in `layout`.
std::vector<int64_t> permutation_index_map(const Layout &layout, const Labels &order);

}  // namespace qmerge

#endif  // QMERGE_LAYOUT_H
