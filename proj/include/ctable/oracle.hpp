#pragma once

#include "ctable/instance.hpp"
#include "ctable/propagator.hpp"
#include "ctable/store.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ctable {

/// Value sets per variable, each sorted.
using Domains = std::vector<std::vector<int>>;

namespace oracle {

inline bool isValid(std::span<const int> tuple, std::span<const int> scope, const Domains& doms)
{
    for (std::size_t j = 0; j < scope.size(); ++j) {
        const auto& d = doms[static_cast<std::size_t>(scope[j])];
        if (!std::binary_search(d.begin(), d.end(), tuple[j]))
            return false;
    }
    return true;
}

/// True iff some tuple of the table is valid and gives `value` to scope position `j`.
inline bool hasSupport(const TableConstraint& c, int j, int value, const Domains& doms)
{
    for (std::size_t i = 0; i < c.tuples.size(); ++i) {
        const auto t = c.tuples[i];
        if (t[static_cast<std::size_t>(j)] == value && isValid(t, c.scope, doms))
            return true;
    }
    return false;
}

/// Removes the unsupported values of one constraint. Returns whether anything changed.
inline bool revise(const TableConstraint& c, Domains& doms)
{
    bool changed = false;
    for (std::size_t j = 0; j < c.scope.size(); ++j) {
        auto& d = doms[static_cast<std::size_t>(c.scope[j])];
        std::vector<int> kept;
        for (int a : d)
            if (hasSupport(c, static_cast<int>(j), a, doms))
                kept.push_back(a);
        if (kept.size() != d.size()) {
            d = std::move(kept);
            changed = true;
        }
    }
    return changed;
}

} // namespace oracle

/// Brute-force GAC closure: revises every constraint, in `order` if given,
/// until nothing changes. Returns nullopt when a domain becomes empty.
inline std::optional<Domains> gacFixpoint(const Instance& inst, Domains domains, std::span<const int> order = {})
{
    std::vector<int> sequence(order.begin(), order.end());
    if (sequence.empty())
        for (std::size_t c = 0; c < inst.constraints.size(); ++c)
            sequence.push_back(static_cast<int>(c));
    for (auto& d : domains) {
        std::sort(d.begin(), d.end());
        if (d.empty())
            return std::nullopt;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (int c : sequence) {
            changed |= oracle::revise(inst.constraints[static_cast<std::size_t>(c)], domains);
            for (int v : inst.constraints[static_cast<std::size_t>(c)].scope)
                if (domains[static_cast<std::size_t>(v)].empty())
                    return std::nullopt;
        }
    }
    return domains;
}

inline std::optional<Domains> gacFixpoint(const Instance& inst)
{
    Domains d;
    for (const auto& v : inst.variables)
        d.push_back(v.values);
    return gacFixpoint(inst, std::move(d));
}

/// Mounts the brute-force revision as a propagator, scanning the raw table
/// for every value at every call.
class OraclePropagator final : public Propagator {
public:
    OraclePropagator(Store& store, std::vector<int> scope, const TupleTable& table) : store_(&store), constraint_{std::move(scope), table} {}

    [[nodiscard]] std::span<const int> scope() const noexcept override { return constraint_.scope; }
    [[nodiscard]] std::string_view name() const noexcept override { return "oracle"; }

    Outcome post() override { return propagate(); }

    Outcome propagate() override
    {
        Domains doms(static_cast<std::size_t>(store_->variableCount()));
        for (int v : constraint_.scope)
            doms[static_cast<std::size_t>(v)] = store_->domain(v).currentValues();
        // A removal can cost supports of positions already revised: repeat until stable.
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t j = 0; j < constraint_.scope.size(); ++j) {
                const int var = constraint_.scope[j];
                const auto& dom = store_->domain(var);
                std::vector<int> unsupported;
                for (int a : doms[static_cast<std::size_t>(var)])
                    if (!oracle::hasSupport(constraint_, static_cast<int>(j), a, doms))
                        unsupported.push_back(a);
                for (int a : unsupported)
                    if (!store_->remove(var, *dom.indexOf(a)))
                        return Outcome::Failure;
                if (!unsupported.empty()) {
                    doms[static_cast<std::size_t>(var)] = dom.currentValues();
                    changed = true;
                }
            }
        }
        return Outcome::Consistent;
    }

private:
    Store* store_;
    TableConstraint constraint_;
};

} // namespace ctable
