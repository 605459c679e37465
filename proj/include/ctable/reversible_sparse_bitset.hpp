#pragma once

#include "ctable/trail.hpp"

#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace ctable {

/// Reversible bit-set over 0..n-1 stored in p = ceil(n/64) words, with a
/// sparse index of the non-zero words.
///
/// Element e lives in word e/64 at bit e%64 (bit 0 = least significant).
/// Class invariant:
///   - `index` is a permutation of 0..p-1;
///   - words[index[i]] != 0  <=>  i <= limit.
///
/// `words` and `limit` are trailed. `index` is not: a word that becomes zero is
/// swapped to slot `limit` before the limit is decremented, so restoring the
/// limit re-activates it in place. `mask` is scratch storage rebuilt on each
/// use; only the entries at active offsets are ever read or written.
class ReversibleSparseBitSet {
public:
    using Word = std::uint64_t;
    static constexpr int kBitsPerWord = 64;

    /// Builds the set with element i present iff `present(i)`.
    ReversibleSparseBitSet(Trail& trail, int nElements, const std::function<bool(int)>& present) : trail_(&trail)
    {
        if (nElements < 1)
            throw std::invalid_argument("ReversibleSparseBitSet: at least one element required");
        const auto p = static_cast<std::size_t>((nElements + kBitsPerWord - 1) / kBitsPerWord);
        words_.assign(p, 0);
        stamps_.assign(p, 0);
        mask_.assign(p, 0);
        index_.resize(p);
        for (int e = 0; e < nElements; ++e) {
            if (present(e))
                words_[static_cast<std::size_t>(e / kBitsPerWord)] |= Word{1} << (e % kBitsPerWord);
        }
        // Non-zero words first, keeping offset order within each group.
        int front = 0;
        for (std::size_t o = 0; o < p; ++o)
            if (words_[o] != 0)
                index_[static_cast<std::size_t>(front++)] = static_cast<int>(o);
        int back = front;
        for (std::size_t o = 0; o < p; ++o)
            if (words_[o] == 0)
                index_[static_cast<std::size_t>(back++)] = static_cast<int>(o);
        limit_ = ReversibleInt(front - 1);
    }

    /// All of 0..n-1 present.
    ReversibleSparseBitSet(Trail& trail, int nElements) : ReversibleSparseBitSet(trail, nElements, [](int) { return true; }) {}

    ReversibleSparseBitSet(const ReversibleSparseBitSet&) = delete;
    ReversibleSparseBitSet& operator=(const ReversibleSparseBitSet&) = delete;

    [[nodiscard]] bool isEmpty() const noexcept { return limit() == -1; }

    void clearMask() noexcept
    {
        for (int i = 0, l = limit(); i <= l; ++i)
            mask_[offsetAt(i)] = 0;
    }

    void reverseMask() noexcept
    {
        for (int i = 0, l = limit(); i <= l; ++i) {
            const auto o = offsetAt(i);
            mask_[o] = ~mask_[o];
        }
    }

    void addToMask(std::span<const Word> m)
    {
        checkLength(m);
        for (int i = 0, l = limit(); i <= l; ++i) {
            const auto o = offsetAt(i);
            mask_[o] |= m[o];
        }
    }

    void intersectWithMask()
    {
        int l = limit();
        // Descending, so the swap with slot `l` only touches slots already visited.
        for (int i = l; i >= 0; --i) {
            const auto o = offsetAt(i);
            const Word w = words_[o] & mask_[o];
            if (w == words_[o])
                continue;
            trail_->write(words_[o], stamps_[o], w);
            if (w == 0) {
                index_[static_cast<std::size_t>(i)] = index_[static_cast<std::size_t>(l)];
                index_[static_cast<std::size_t>(l)] = static_cast<int>(o);
                --l;
            }
        }
        if (l != limit())
            limit_.set(*trail_, l);
    }

    /// First active offset (in index order) whose word intersects `m`, or -1.
    [[nodiscard]] int intersectIndex(std::span<const Word> m) const
    {
        checkLength(m);
        for (int i = 0, l = limit(); i <= l; ++i) {
            const auto o = offsetAt(i);
            if ((words_[o] & m[o]) != 0)
                return static_cast<int>(o);
        }
        return -1;
    }

    [[nodiscard]] int wordCount() const noexcept { return static_cast<int>(words_.size()); }
    [[nodiscard]] int limit() const noexcept { return static_cast<int>(limit_.value()); }
    [[nodiscard]] Word word(int offset) const noexcept { return words_[static_cast<std::size_t>(offset)]; }
    [[nodiscard]] std::span<const Word> words() const noexcept { return words_; }
    [[nodiscard]] std::span<const int> index() const noexcept { return index_; }
    [[nodiscard]] std::span<const Word> mask() const noexcept { return mask_; }

    /// Direct access to the scratch mask; intended for tests that seed stale data.
    [[nodiscard]] std::span<Word> mutableMask() noexcept { return mask_; }

    [[nodiscard]] bool contains(int e) const noexcept
    {
        return (words_[static_cast<std::size_t>(e / kBitsPerWord)] >> (e % kBitsPerWord) & 1U) != 0;
    }

    /// True iff both class invariants hold.
    [[nodiscard]] bool invariantHolds() const
    {
        const std::size_t p = words_.size();
        std::vector<char> seen(p, 0);
        for (int o : index_) {
            if (o < 0 || static_cast<std::size_t>(o) >= p || seen[static_cast<std::size_t>(o)])
                return false;
            seen[static_cast<std::size_t>(o)] = 1;
        }
        for (std::size_t i = 0; i < p; ++i) {
            const bool nonZero = words_[static_cast<std::size_t>(index_[i])] != 0;
            if (nonZero != (static_cast<int>(i) <= limit()))
                return false;
        }
        return true;
    }

private:
    [[nodiscard]] std::size_t offsetAt(int i) const noexcept { return static_cast<std::size_t>(index_[static_cast<std::size_t>(i)]); }

    void checkLength(std::span<const Word> m) const
    {
        if (m.size() != words_.size())
            throw std::invalid_argument("ReversibleSparseBitSet: mask length differs from word count");
    }

    Trail* trail_;
    std::vector<Word> words_;
    std::vector<Trail::Word> stamps_;
    std::vector<int> index_;
    ReversibleInt limit_;
    std::vector<Word> mask_;
};

} // namespace ctable
