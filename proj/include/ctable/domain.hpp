#pragma once

#include "ctable/sparse_set.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ctable {

/// Finite integer domain backed by a reversible sparse set.
///
/// The initial values are sorted and mapped to dense indices 0..n-1, so dense
/// order equals value order. Every propagator-facing operation works on dense
/// indices; `valueOf` / `indexOf` translate at the boundary.
class SparseSetDomain {
public:
    SparseSetDomain(Trail& trail, std::vector<int> values) : values_(std::move(values)), set_(trail, static_cast<int>(values_.size()))
    {
        if (values_.empty())
            throw std::invalid_argument("SparseSetDomain: empty initial domain");
        if (!std::is_sorted(values_.begin(), values_.end()) || std::adjacent_find(values_.begin(), values_.end()) != values_.end())
            throw std::invalid_argument("SparseSetDomain: initial values must be strictly increasing");
        contiguous_ = values_.back() - values_.front() + 1 == static_cast<long long>(values_.size());
    }

    [[nodiscard]] int initialSize() const noexcept { return set_.capacity(); }
    [[nodiscard]] int size() const noexcept { return set_.size(); }
    [[nodiscard]] bool empty() const noexcept { return set_.empty(); }
    [[nodiscard]] bool bound() const noexcept { return set_.size() == 1; }

    [[nodiscard]] bool contains(int dense) const noexcept { return set_.contains(dense); }

    [[nodiscard]] bool containsValue(int value) const noexcept
    {
        const auto idx = indexOf(value);
        return idx && set_.contains(*idx);
    }

    /// Removing an absent value is a no-op; returns whether something was removed.
    bool remove(int dense) { return set_.remove(dense); }

    /// Returns false, leaving the domain untouched, if `dense` is absent.
    bool assign(int dense) { return set_.assign(dense); }

    /// Values removed since the domain had `lastSize` elements, as a view over
    /// the permutation slots [size, lastSize).
    [[nodiscard]] std::span<const int> delta(int lastSize) const { return set_.removedSince(lastSize); }

    /// Current dense indices in slot order (unspecified order).
    [[nodiscard]] std::span<const int> members() const noexcept { return set_.members(); }

    [[nodiscard]] int at(int slot) const noexcept { return set_.at(slot); }

    [[nodiscard]] int minIndex() const noexcept
    {
        const auto m = set_.members();
        return *std::min_element(m.begin(), m.end());
    }

    [[nodiscard]] int valueOf(int dense) const noexcept { return values_[static_cast<std::size_t>(dense)]; }

    [[nodiscard]] std::optional<int> indexOf(int value) const noexcept
    {
        if (contiguous_) {
            const long long off = static_cast<long long>(value) - values_.front();
            if (off < 0 || off >= static_cast<long long>(values_.size()))
                return std::nullopt;
            return static_cast<int>(off);
        }
        const auto it = std::lower_bound(values_.begin(), values_.end(), value);
        if (it == values_.end() || *it != value)
            return std::nullopt;
        return static_cast<int>(it - values_.begin());
    }

    [[nodiscard]] const std::vector<int>& initialValues() const noexcept { return values_; }

    /// Current values, sorted.
    [[nodiscard]] std::vector<int> currentValues() const
    {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (int d : members())
            out.push_back(valueOf(d));
        std::sort(out.begin(), out.end());
        return out;
    }

    [[nodiscard]] const ReversibleSparseSet& sparseSet() const noexcept { return set_; }

private:
    std::vector<int> values_;
    ReversibleSparseSet set_;
    bool contiguous_ = false;
};

} // namespace ctable
