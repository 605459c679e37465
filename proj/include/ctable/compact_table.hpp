#pragma once

#include "ctable/instance.hpp"
#include "ctable/propagator.hpp"
#include "ctable/reversible_sparse_bitset.hpp"
#include "ctable/sparse_set.hpp"
#include "ctable/store.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace ctable {

/// How the current table is updated from a modified variable.
enum class UpdateMode {
    Dynamic,     // removed values when fewer than the remaining ones, else remaining values
    Incremental, // always the removed values
    ResetOnly,   // always the remaining values
};

struct CompactTableOptions {
    UpdateMode mode = UpdateMode::Dynamic;
    bool useResidues = true;
    /// Skip support checks on the variable when it is the only one modified since the last call.
    bool skipLastModified = true;
    /// Only consider variables not yet known to be bound when collecting modified variables.
    bool skipBoundVariables = true;
};

struct CompactTableStats {
    std::uint64_t propagations = 0;
    std::uint64_t incrementalUpdates = 0;
    std::uint64_t resetUpdates = 0;
    std::uint64_t intersectIndexCalls = 0;
};

/// Compact-Table propagator enforcing GAC on a positive table constraint.
///
/// Tuples valid when the constraint is built are indexed 0..k-1 in input
/// order. `currTable` holds the indices of the tuples that are still valid;
/// supports[x, a] is the static bit-set of the indexed tuples with value a
/// for x. A value keeps a support iff its support bit-set meets currTable.
class CompactTable final : public Propagator {
public:
    using Word = ReversibleSparseBitSet::Word;

    CompactTable(Store& store, std::vector<int> scope, const TupleTable& table, CompactTableOptions options = {})
        : store_(&store), scope_(std::move(scope)), options_(options), unbound_(store.trail(), static_cast<int>(scope_.size()))
    {
        if (scope_.empty())
            throw std::invalid_argument("CompactTable: empty scope");
        if (table.arity() != arity())
            throw std::invalid_argument("CompactTable: table arity differs from scope size");

        rowStart_.resize(scope_.size() + 1, 0);
        for (std::size_t j = 0; j < scope_.size(); ++j)
            rowStart_[j + 1] = rowStart_[j] + domainOf(static_cast<int>(j)).initialSize();

        // Keep the tuples valid under the current domains, as dense indices.
        std::vector<int> dense(scope_.size());
        for (std::size_t i = 0; i < table.size(); ++i) {
            const auto t = table[i];
            bool valid = true;
            for (std::size_t j = 0; j < scope_.size() && valid; ++j) {
                const auto& d = domainOf(static_cast<int>(j));
                const auto idx = d.indexOf(t[j]);
                valid = idx && d.contains(*idx);
                if (valid)
                    dense[j] = *idx;
            }
            if (valid)
                tuples_.insert(tuples_.end(), dense.begin(), dense.end());
        }

        const int k = tupleCount();
        if (k == 0)
            return;
        currTable_.emplace(store.trail(), k);
        words_ = static_cast<std::size_t>(currTable_->wordCount());
        supports_.assign(static_cast<std::size_t>(rowStart_.back()) * words_, 0);
        for (int i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < scope_.size(); ++j) {
                const int row = rowStart_[j] + tuples_[static_cast<std::size_t>(i) * scope_.size() + j];
                supports_[static_cast<std::size_t>(row) * words_ + static_cast<std::size_t>(i / 64)] |= Word{1} << (i % 64);
            }
        }
        residues_.assign(static_cast<std::size_t>(rowStart_.back()), 0);
    }

    CompactTable(const CompactTable&) = delete;
    CompactTable& operator=(const CompactTable&) = delete;

    [[nodiscard]] std::span<const int> scope() const noexcept override { return scope_; }

    [[nodiscard]] std::string_view name() const noexcept override
    {
        switch (options_.mode) {
        case UpdateMode::Incremental: return "cti";
        case UpdateMode::ResetOnly: return "ctr";
        case UpdateMode::Dynamic: break;
        }
        return "ct";
    }

    /// Removes the values without any valid tuple and initializes residues,
    /// last sizes and the unbound-variable set.
    Outcome post() override
    {
        if (!currTable_)
            return Outcome::Failure;
        lastSizes_.clear();
        for (int j = 0; j < arity(); ++j) {
            const auto& dom = domainOf(j);
            for (int s = dom.size() - 1; s >= 0; --s) {
                const int a = dom.at(s);
                const int offset = currTable_->intersectIndex(supportRow(j, a));
                if (offset >= 0)
                    residues_[static_cast<std::size_t>(rowStart_[static_cast<std::size_t>(j)] + a)] = offset;
                else if (!store_->remove(scope_[static_cast<std::size_t>(j)], a))
                    return Outcome::Failure;
            }
            lastSizes_.emplace_back(domainOf(j).size());
        }
        for (int j = 0; j < arity(); ++j)
            if (domainOf(j).bound())
                unbound_.remove(j);
        deltaFrom_.assign(scope_.size(), 0);
        sval_.reserve(scope_.size());
        ssup_.reserve(scope_.size());
        return Outcome::Consistent;
    }

    Outcome propagate() override
    {
        ++stats_.propagations;
        Trail& trail = store_->trail();

        sval_.clear();
        ssup_.clear();
        const auto consider = [&](int j) {
            const int size = domainOf(j).size();
            const auto last = static_cast<int>(lastSizes_[static_cast<std::size_t>(j)].value());
            if (size != last) {
                sval_.push_back(j);
                deltaFrom_[static_cast<std::size_t>(j)] = last;
                lastSizes_[static_cast<std::size_t>(j)].set(trail, size);
            }
            if (size > 1)
                ssup_.push_back(j);
        };
        if (options_.skipBoundVariables) {
            for (int j : unbound_.members())
                consider(j);
        } else {
            for (int j = 0; j < arity(); ++j)
                consider(j);
        }
        if (sval_.empty())
            return Outcome::Consistent;
        if (options_.skipLastModified && sval_.size() == 1)
            std::erase(ssup_, sval_.front());

        updateTable();
        if (currTable_->isEmpty())
            return Outcome::Failure;
        if (filterDomains() == Outcome::Failure)
            return Outcome::Failure;

        if (options_.skipBoundVariables) {
            for (int s = unbound_.size() - 1; s >= 0; --s) {
                const int j = unbound_.at(s);
                if (domainOf(j).bound())
                    unbound_.remove(j);
            }
        }
        return Outcome::Consistent;
    }

    /// True iff tuple i is in currTable exactly when all its values are in the current domains.
    [[nodiscard]] bool tableMatchesDomains() const
    {
        if (!currTable_)
            return true;
        for (int i = 0; i < tupleCount(); ++i) {
            bool valid = true;
            for (int j = 0; j < arity() && valid; ++j)
                valid = domainOf(j).contains(tuples_[static_cast<std::size_t>(i * arity() + j)]);
            if (valid != currTable_->contains(i))
                return false;
        }
        return currTable_->invariantHolds();
    }

    [[nodiscard]] int arity() const noexcept { return static_cast<int>(scope_.size()); }
    [[nodiscard]] int tupleCount() const noexcept { return static_cast<int>(tuples_.size() / scope_.size()); }

    /// Dense values of the i-th indexed tuple.
    [[nodiscard]] std::span<const int> indexedTuple(int i) const noexcept
    {
        return {tuples_.data() + static_cast<std::size_t>(i) * scope_.size(), scope_.size()};
    }

    /// supports[x, a] for scope position `j` and dense value `a`.
    [[nodiscard]] std::span<const Word> supportRow(int j, int a) const noexcept
    {
        const auto row = static_cast<std::size_t>(rowStart_[static_cast<std::size_t>(j)] + a);
        return {supports_.data() + row * words_, words_};
    }

    [[nodiscard]] int residue(int j, int a) const noexcept { return residues_[static_cast<std::size_t>(rowStart_[static_cast<std::size_t>(j)] + a)]; }

    [[nodiscard]] const ReversibleSparseBitSet& currTable() const { return *currTable_; }
    [[nodiscard]] bool hasTable() const noexcept { return currTable_.has_value(); }
    [[nodiscard]] std::int64_t lastSize(int j) const noexcept { return lastSizes_[static_cast<std::size_t>(j)].value(); }
    [[nodiscard]] const CompactTableStats& stats() const noexcept { return stats_; }
    [[nodiscard]] const CompactTableOptions& options() const noexcept { return options_; }

private:
    [[nodiscard]] const SparseSetDomain& domainOf(int j) const { return store_->domain(scope_[static_cast<std::size_t>(j)]); }

    void updateTable()
    {
        auto& table = *currTable_;
        for (int j : sval_) {
            const auto& dom = domainOf(j);
            const int lastSize = deltaFrom_[static_cast<std::size_t>(j)];
            const int removed = lastSize - dom.size();
            bool incremental = false;
            switch (options_.mode) {
            case UpdateMode::Dynamic: incremental = removed < dom.size(); break;
            case UpdateMode::Incremental: incremental = true; break;
            case UpdateMode::ResetOnly: incremental = false; break;
            }

            table.clearMask();
            if (incremental) {
                ++stats_.incrementalUpdates;
                for (int a : dom.delta(lastSize))
                    table.addToMask(supportRow(j, a));
                table.reverseMask();
            } else {
                ++stats_.resetUpdates;
                for (int a : dom.members())
                    table.addToMask(supportRow(j, a));
            }
            table.intersectWithMask();
            if (table.isEmpty())
                break;
        }
    }

    Outcome filterDomains()
    {
        const auto& table = *currTable_;
        Trail& trail = store_->trail();
        for (int j : ssup_) {
            const int var = scope_[static_cast<std::size_t>(j)];
            const auto& dom = domainOf(j);
            // Descending slots: a removal swaps in an already visited value.
            for (int s = dom.size() - 1; s >= 0; --s) {
                const int a = dom.at(s);
                const auto row = supportRow(j, a);
                int& res = residues_[static_cast<std::size_t>(rowStart_[static_cast<std::size_t>(j)] + a)];
                if (options_.useResidues && (table.word(res) & row[static_cast<std::size_t>(res)]) != 0)
                    continue;
                ++stats_.intersectIndexCalls;
                const int offset = table.intersectIndex(row);
                if (offset >= 0)
                    res = offset;
                else if (!store_->remove(var, a))
                    return Outcome::Failure;
            }
            lastSizes_[static_cast<std::size_t>(j)].set(trail, dom.size());
        }
        return Outcome::Consistent;
    }

    Store* store_;
    std::vector<int> scope_;
    CompactTableOptions options_;
    std::vector<int> tuples_;
    std::vector<int> rowStart_;
    std::size_t words_ = 0;
    std::vector<Word> supports_;
    std::vector<int> residues_;
    std::optional<ReversibleSparseBitSet> currTable_;
    std::vector<ReversibleInt> lastSizes_;
    ReversibleSparseSet unbound_;
    std::vector<int> sval_;
    std::vector<int> ssup_;
    std::vector<int> deltaFrom_;
    CompactTableStats stats_;
};

} // namespace ctable
