#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace ctable {

/// Undo log for reversible state.
///
/// Every reversible cell is a 64-bit slot paired with a 64-bit stamp. A write
/// through the trail saves (slot, value, stamp) at most once per search level:
/// a cell whose stamp equals the id of the current level has already been
/// saved since that level was opened. Restoring a level writes back both the
/// value and the stamp, so after backtracking into a parent level the parent's
/// own saves are still recognized and a cell is never saved twice per level.
///
/// Level ids come from a clock that only moves forward; sibling levels never
/// share an id. The root (no open level) has id 0 and is never undone, so
/// writes at the root are not recorded.
///
/// Cells are referenced by address: anything that owns reversible cells must
/// not be relocated while a level is open.
class Trail {
public:
    using Word = std::uint64_t;

    Trail() = default;
    Trail(const Trail&) = delete;
    Trail& operator=(const Trail&) = delete;

    void pushLevel()
    {
        ++clock_;
        marks_.push_back(entries_.size());
        levelIds_.push_back(clock_);
    }

    void restoreLevel()
    {
        if (marks_.empty())
            throw std::logic_error("Trail::restoreLevel: no open level");
        const std::size_t mark = marks_.back();
        while (entries_.size() > mark) {
            const Entry& e = entries_.back();
            *e.slot = e.savedValue;
            *e.stamp = e.savedStamp;
            entries_.pop_back();
        }
        marks_.pop_back();
        levelIds_.pop_back();
    }

    /// Records the current content of a cell before it is overwritten.
    void save(Word& slot, Word& stamp)
    {
        const Word now = currentStamp();
        if (stamp == now)
            return;
        entries_.push_back(Entry{&slot, &stamp, slot, stamp});
        stamp = now;
    }

    void write(Word& slot, Word& stamp, Word value)
    {
        save(slot, stamp);
        slot = value;
    }

    /// Monotone node counter: incremented by every pushLevel, never decreased.
    [[nodiscard]] Word time() const noexcept { return clock_; }
    /// Stamp that marks a cell as saved within the innermost open level.
    [[nodiscard]] Word currentStamp() const noexcept { return levelIds_.empty() ? 0 : levelIds_.back(); }
    [[nodiscard]] std::size_t depth() const noexcept { return marks_.size(); }
    [[nodiscard]] std::size_t entryCount() const noexcept { return entries_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& levelMarks() const noexcept { return marks_; }

    /// Number of entries recorded since the innermost level was opened.
    [[nodiscard]] std::size_t entriesInCurrentLevel() const noexcept
    {
        return marks_.empty() ? entries_.size() : entries_.size() - marks_.back();
    }

    /// Counts the entries of the innermost level that refer to `slot`.
    [[nodiscard]] std::size_t entriesFor(const Word& slot) const noexcept
    {
        const std::size_t from = marks_.empty() ? 0 : marks_.back();
        std::size_t n = 0;
        for (std::size_t i = from; i < entries_.size(); ++i)
            n += entries_[i].slot == &slot ? 1 : 0;
        return n;
    }

private:
    struct Entry {
        Word* slot;
        Word* stamp;
        Word savedValue;
        Word savedStamp;
    };

    std::vector<Entry> entries_;
    std::vector<std::size_t> marks_;
    std::vector<Word> levelIds_;
    Word clock_ = 0;
};

/// A single integral value stored in a trail slot.
template <typename T>
    requires(std::is_integral_v<T> && sizeof(T) <= sizeof(Trail::Word))
class Reversible {
public:
    constexpr explicit Reversible(T initial = T{}) noexcept : slot_(encode(initial)) {}

    [[nodiscard]] T value() const noexcept { return static_cast<T>(static_cast<std::make_signed_t<Trail::Word>>(slot_)); }
    [[nodiscard]] Trail::Word stamp() const noexcept { return stamp_; }

    void set(Trail& trail, T v) { trail.write(slot_, stamp_, encode(v)); }

    [[nodiscard]] const Trail::Word& slot() const noexcept { return slot_; }

private:
    static constexpr Trail::Word encode(T v) noexcept
    {
        if constexpr (std::is_signed_v<T>)
            return static_cast<Trail::Word>(static_cast<std::int64_t>(v));
        else
            return static_cast<Trail::Word>(v);
    }

    Trail::Word slot_;
    Trail::Word stamp_ = 0;
};

using ReversibleInt = Reversible<std::int64_t>;
using ReversibleWord = Reversible<std::uint64_t>;

} // namespace ctable
