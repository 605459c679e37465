#pragma once

#include "ctable/instance.hpp"
#include "ctable/propagator.hpp"
#include "ctable/sparse_set.hpp"
#include "ctable/store.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace ctable {

/// STR2 simple tabular reduction.
///
/// The indices of the valid tuples form the prefix of a reversible sparse set.
/// Each call scans that prefix once: tuples invalidated on a modified
/// variable (S^val) are swapped out, and the surviving tuples mark the values
/// they support for the variables still needing supports (S^sup).
class Str2Table final : public Propagator {
public:
    Str2Table(Store& store, std::vector<int> scope, const TupleTable& table) : store_(&store), scope_(std::move(scope))
    {
        if (scope_.empty())
            throw std::invalid_argument("Str2Table: empty scope");
        if (table.arity() != arity())
            throw std::invalid_argument("Str2Table: table arity differs from scope size");

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
        if (tupleCount() > 0)
            valid_.emplace(store.trail(), tupleCount());

        gacValues_.resize(scope_.size());
        for (int j = 0; j < arity(); ++j)
            gacValues_[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(domainOf(j).initialSize()), 0);
        gacCount_.assign(scope_.size(), 0);
        sval_.reserve(scope_.size());
        ssup_.reserve(scope_.size());
    }

    Str2Table(const Str2Table&) = delete;
    Str2Table& operator=(const Str2Table&) = delete;

    [[nodiscard]] std::span<const int> scope() const noexcept override { return scope_; }
    [[nodiscard]] std::string_view name() const noexcept override { return "str2"; }

    Outcome post() override
    {
        if (!valid_)
            return Outcome::Failure;
        // Tuples are already valid; one full pass prunes unsupported values.
        lastSizes_.clear();
        for (int j = 0; j < arity(); ++j)
            lastSizes_.emplace_back(domainOf(j).size());
        ssup_.clear();
        for (int j = 0; j < arity(); ++j)
            ssup_.push_back(j);
        sval_.clear();
        return reduce();
    }

    Outcome propagate() override
    {
        ++propagations_;
        Trail& trail = store_->trail();
        sval_.clear();
        ssup_.clear();
        for (int j = 0; j < arity(); ++j) {
            const int size = domainOf(j).size();
            if (size != lastSizes_[static_cast<std::size_t>(j)].value()) {
                sval_.push_back(j);
                lastSizes_[static_cast<std::size_t>(j)].set(trail, size);
            }
            if (size > 1)
                ssup_.push_back(j);
        }
        if (sval_.empty())
            return Outcome::Consistent;
        return reduce();
    }

    [[nodiscard]] int arity() const noexcept { return static_cast<int>(scope_.size()); }
    [[nodiscard]] int tupleCount() const noexcept { return static_cast<int>(tuples_.size() / scope_.size()); }
    [[nodiscard]] int validCount() const noexcept { return valid_ ? valid_->size() : 0; }

    /// Indices (into the tuples kept at construction) of the current valid prefix.
    [[nodiscard]] std::span<const int> validTuples() const noexcept
    {
        return valid_ ? valid_->members() : std::span<const int>{};
    }

    [[nodiscard]] std::uint64_t propagations() const noexcept { return propagations_; }

private:
    [[nodiscard]] const SparseSetDomain& domainOf(int j) const { return store_->domain(scope_[static_cast<std::size_t>(j)]); }

    Outcome reduce()
    {
        for (int j : ssup_) {
            auto& marks = gacValues_[static_cast<std::size_t>(j)];
            std::fill(marks.begin(), marks.end(), 0);
            gacCount_[static_cast<std::size_t>(j)] = 0;
        }
        std::size_t open = ssup_.size(); // ssup_[0, open) still lack a support for some value
        auto& valid = *valid_;
        const std::size_t r = scope_.size();

        for (int s = 0; s < valid.size();) {
            const int t = valid.at(s);
            const int* tuple = tuples_.data() + static_cast<std::size_t>(t) * r;
            bool ok = true;
            for (int j : sval_)
                if (!domainOf(j).contains(tuple[j])) {
                    ok = false;
                    break;
                }
            if (!ok) {
                valid.remove(t); // the last member moves into slot s
                continue;
            }
            for (std::size_t k = 0; k < open;) {
                const int j = ssup_[k];
                char& mark = gacValues_[static_cast<std::size_t>(j)][static_cast<std::size_t>(tuple[j])];
                if (!mark) {
                    mark = 1;
                    if (++gacCount_[static_cast<std::size_t>(j)] == domainOf(j).size()) {
                        std::swap(ssup_[k], ssup_[--open]);
                        continue;
                    }
                }
                ++k;
            }
            ++s;
        }
        if (valid.empty())
            return Outcome::Failure;

        Trail& trail = store_->trail();
        for (std::size_t k = 0; k < open; ++k) {
            const int j = ssup_[k];
            const auto& dom = domainOf(j);
            const auto& marks = gacValues_[static_cast<std::size_t>(j)];
            for (int s = dom.size() - 1; s >= 0; --s) {
                const int a = dom.at(s);
                if (!marks[static_cast<std::size_t>(a)] && !store_->remove(scope_[static_cast<std::size_t>(j)], a))
                    return Outcome::Failure;
            }
            lastSizes_[static_cast<std::size_t>(j)].set(trail, dom.size());
        }
        return Outcome::Consistent;
    }

    Store* store_;
    std::vector<int> scope_;
    std::vector<int> tuples_;
    std::optional<ReversibleSparseSet> valid_;
    std::vector<ReversibleInt> lastSizes_;
    std::vector<std::vector<char>> gacValues_;
    std::vector<int> gacCount_;
    std::vector<int> sval_;
    std::vector<int> ssup_;
    std::uint64_t propagations_ = 0;
};

} // namespace ctable
