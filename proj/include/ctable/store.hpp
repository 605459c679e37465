#pragma once

#include "ctable/domain.hpp"
#include "ctable/trail.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace ctable {

/// Trail plus the variable domains it protects. Domain changes made through
/// the store are recorded so the solver can wake the constraints watching the
/// modified variables.
class Store {
public:
    explicit Store(std::span<const std::vector<int>> initialDomains)
    {
        domains_.reserve(initialDomains.size());
        for (const auto& values : initialDomains)
            domains_.emplace_back(trail_, values);
        touchedFlag_.assign(domains_.size(), 0);
    }

    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    [[nodiscard]] Trail& trail() noexcept { return trail_; }
    [[nodiscard]] const Trail& trail() const noexcept { return trail_; }

    [[nodiscard]] int variableCount() const noexcept { return static_cast<int>(domains_.size()); }
    [[nodiscard]] const SparseSetDomain& domain(int var) const { return domains_[static_cast<std::size_t>(var)]; }

    /// Removes a dense value; returns false if the domain became empty.
    bool remove(int var, int dense)
    {
        auto& d = domains_[static_cast<std::size_t>(var)];
        if (d.remove(dense))
            touch(var);
        return !d.empty();
    }

    /// Reduces the domain to one dense value; returns false if it was absent.
    bool assign(int var, int dense)
    {
        auto& d = domains_[static_cast<std::size_t>(var)];
        const int before = d.size();
        if (!d.assign(dense))
            return false;
        if (d.size() != before)
            touch(var);
        return true;
    }

    [[nodiscard]] std::span<const int> touched() const noexcept { return touched_; }

    void clearTouched() noexcept
    {
        for (int v : touched_)
            touchedFlag_[static_cast<std::size_t>(v)] = 0;
        touched_.clear();
    }

private:
    void touch(int var)
    {
        if (!touchedFlag_[static_cast<std::size_t>(var)]) {
            touchedFlag_[static_cast<std::size_t>(var)] = 1;
            touched_.push_back(var);
        }
    }

    Trail trail_;
    std::vector<SparseSetDomain> domains_;
    std::vector<int> touched_;
    std::vector<char> touchedFlag_;
};

} // namespace ctable
