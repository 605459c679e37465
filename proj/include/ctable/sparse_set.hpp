#pragma once

#include "ctable/trail.hpp"

#include <cassert>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace ctable {

/// Reversible sparse set over 0..n-1.
///
/// `elements_` is a permutation; the first `size` slots hold the members.
/// Removal swaps the element behind the size bound, so restoring the size
/// brings the removed elements back. Only the size is trailed: swaps performed
/// below a level's size never move elements across that bound.
class ReversibleSparseSet {
public:
    ReversibleSparseSet(Trail& trail, int n) : trail_(&trail), elements_(static_cast<std::size_t>(n)), positions_(elements_.size()), size_(n)
    {
        if (n < 0)
            throw std::invalid_argument("ReversibleSparseSet: negative capacity");
        std::iota(elements_.begin(), elements_.end(), 0);
        std::iota(positions_.begin(), positions_.end(), 0);
    }

    [[nodiscard]] int capacity() const noexcept { return static_cast<int>(elements_.size()); }
    [[nodiscard]] int size() const noexcept { return static_cast<int>(size_.value()); }
    [[nodiscard]] bool empty() const noexcept { return size() == 0; }

    [[nodiscard]] bool contains(int e) const noexcept
    {
        assert(e >= 0 && e < capacity());
        return positions_[static_cast<std::size_t>(e)] < size();
    }

    /// Returns false if `e` was already absent.
    bool remove(int e)
    {
        if (!contains(e))
            return false;
        const int last = size() - 1;
        swapSlots(positions_[static_cast<std::size_t>(e)], last);
        size_.set(*trail_, last);
        return true;
    }

    /// Reduces the set to {e}; returns false if `e` was absent.
    bool assign(int e)
    {
        if (!contains(e))
            return false;
        swapSlots(positions_[static_cast<std::size_t>(e)], 0);
        if (size() != 1)
            size_.set(*trail_, 1);
        return true;
    }

    void clear()
    {
        if (size() != 0)
            size_.set(*trail_, 0);
    }

    /// Current members, in slot order.
    [[nodiscard]] std::span<const int> members() const noexcept { return {elements_.data(), static_cast<std::size_t>(size())}; }

    /// Elements at slots [size, lastSize): everything removed since the set had `lastSize` members.
    [[nodiscard]] std::span<const int> removedSince(int lastSize) const
    {
        if (lastSize < size() || lastSize > capacity())
            throw std::logic_error("ReversibleSparseSet::removedSince: size bound out of range");
        return {elements_.data() + size(), static_cast<std::size_t>(lastSize - size())};
    }

    [[nodiscard]] int at(int slot) const noexcept { return elements_[static_cast<std::size_t>(slot)]; }
    [[nodiscard]] int slotOf(int e) const noexcept { return positions_[static_cast<std::size_t>(e)]; }
    [[nodiscard]] std::span<const int> slots() const noexcept { return elements_; }

private:
    void swapSlots(int i, int j) noexcept
    {
        const int a = elements_[static_cast<std::size_t>(i)];
        const int b = elements_[static_cast<std::size_t>(j)];
        elements_[static_cast<std::size_t>(i)] = b;
        elements_[static_cast<std::size_t>(j)] = a;
        positions_[static_cast<std::size_t>(a)] = j;
        positions_[static_cast<std::size_t>(b)] = i;
    }

    Trail* trail_;
    std::vector<int> elements_;
    std::vector<int> positions_;
    Reversible<std::int64_t> size_;
};

} // namespace ctable
