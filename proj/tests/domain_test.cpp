#include "catch_amalgamated.hpp"

#include "ctable/domain.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

using namespace ctable;

namespace {

bool permutationHolds(const SparseSetDomain& d)
{
    const auto& s = d.sparseSet();
    std::vector<char> seen(static_cast<std::size_t>(s.capacity()), 0);
    for (int slot = 0; slot < s.capacity(); ++slot) {
        const int e = s.at(slot);
        if (e < 0 || e >= s.capacity() || seen[static_cast<std::size_t>(e)] || s.slotOf(e) != slot)
            return false;
        seen[static_cast<std::size_t>(e)] = 1;
    }
    return true;
}

std::set<int> asSet(std::span<const int> v) { return {v.begin(), v.end()}; }

} // namespace

TEST_CASE("contains follows removals and restoration", "[domain]")
{
    Trail t;
    SparseSetDomain d(t, {1, 2, 3});
    const int two = *d.indexOf(2);
    REQUIRE(d.containsValue(2));
    t.pushLevel();
    d.remove(two);
    REQUIRE_FALSE(d.containsValue(2));
    t.restoreLevel();
    REQUIRE(d.containsValue(2));
}

TEST_CASE("remove swaps the value behind the size bound", "[domain]")
{
    Trail t;
    SparseSetDomain d(t, {10, 20, 30}); // dense a=0, b=1, c=2

    SECTION("middle value")
    {
        REQUIRE(d.remove(1));
        REQUIRE(d.size() == 2);
        REQUIRE(d.at(2) == 1);
        REQUIRE(permutationHolds(d));
    }
    SECTION("down to wipe-out")
    {
        d.remove(0);
        d.remove(1);
        d.remove(2);
        REQUIRE(d.size() == 0);
        REQUIRE(d.empty());
    }
    SECTION("double removal is a no-op")
    {
        REQUIRE(d.remove(1));
        const auto before = std::vector<int>(d.sparseSet().slots().begin(), d.sparseSet().slots().end());
        REQUIRE_FALSE(d.remove(1));
        REQUIRE(d.size() == 2);
        REQUIRE(std::vector<int>(d.sparseSet().slots().begin(), d.sparseSet().slots().end()) == before);
    }
}

TEST_CASE("assign reduces to a single value", "[domain]")
{
    Trail t;
    SparseSetDomain d(t, {1, 2, 3});
    SECTION("present value")
    {
        REQUIRE(d.assign(*d.indexOf(3)));
        REQUIRE(d.currentValues() == std::vector<int>{3});
        REQUIRE(d.assign(*d.indexOf(3)));
        REQUIRE(d.currentValues() == std::vector<int>{3});
    }
    SECTION("absent value signals failure")
    {
        SparseSetDomain e(t, {1, 2});
        REQUIRE_FALSE(e.indexOf(5).has_value());
        d.remove(*d.indexOf(1));
        REQUIRE_FALSE(d.assign(*d.indexOf(1)));
        REQUIRE(d.size() == 2);
    }
}

TEST_CASE("delta exposes the values removed since a recorded size", "[domain]")
{
    Trail t;
    SparseSetDomain d(t, {1, 2, 3, 4}); // a, b, c, d

    SECTION("nothing removed")
    {
        REQUIRE(d.delta(d.size()).empty());
    }
    SECTION("two removals")
    {
        const int last = d.size();
        d.remove(1); // b
        d.remove(2); // c
        // After the swaps the slots read [a, d, c, b]; slots [2, 4) hold {c, b}.
        REQUIRE(asSet(d.delta(last)) == std::set<int>{1, 2});
    }
    SECTION("from a size of three")
    {
        d.remove(3);
        const int last = d.size();
        d.remove(0);
        d.remove(2);
        REQUIRE(asSet(d.delta(last)) == std::set<int>{0, 2});
    }
    SECTION("a recorded size below the current size is rejected")
    {
        d.remove(0);
        REQUIRE_THROWS_AS(d.delta(2), std::logic_error);
    }
}

TEST_CASE("non-contiguous values map to dense indices in order", "[domain]")
{
    Trail t;
    SparseSetDomain d(t, {-7, 0, 3, 100});
    REQUIRE(*d.indexOf(-7) == 0);
    REQUIRE(*d.indexOf(100) == 3);
    REQUIRE_FALSE(d.indexOf(1).has_value());
    REQUIRE(d.valueOf(2) == 3);
    REQUIRE_THROWS_AS(SparseSetDomain(t, {3, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(SparseSetDomain(t, {}), std::invalid_argument);
}

TEST_CASE("randomized domain operations agree with a set model", "[domain][property]")
{
    std::mt19937_64 rng(7);
    for (int run = 0; run < 300; ++run) {
        Trail t;
        const int n = std::uniform_int_distribution<int>(1, 12)(rng);
        std::vector<int> values(static_cast<std::size_t>(n));
        std::iota(values.begin(), values.end(), -3);
        SparseSetDomain d(t, values);

        std::set<int> model;
        for (int i = 0; i < n; ++i)
            model.insert(i);
        std::vector<std::set<int>> saved;
        std::vector<std::pair<int, std::set<int>>> recorded; // (size, domain) at pushes

        for (int step = 0; step < 120; ++step) {
            const int op = std::uniform_int_distribution<int>(0, 9)(rng);
            const int e = std::uniform_int_distribution<int>(0, n - 1)(rng);
            if (op < 2) {
                t.pushLevel();
                saved.push_back(model);
                recorded.emplace_back(d.size(), model);
            } else if (op < 4 && !saved.empty()) {
                t.restoreLevel();
                model = saved.back();
                saved.pop_back();
                recorded.pop_back();
            } else if (op < 5) {
                const bool ok = d.assign(e);
                REQUIRE(ok == model.contains(e));
                if (ok)
                    model = {e};
            } else {
                d.remove(e);
                model.erase(e);
            }
            REQUIRE(permutationHolds(d));
            REQUIRE(d.size() == static_cast<int>(model.size()));
            for (int i = 0; i < n; ++i)
                REQUIRE(d.contains(i) == model.contains(i));
            // The delta since the innermost push plus the members reconstruct that domain.
            if (!recorded.empty()) {
                const auto& [size, dom] = recorded.back();
                auto rebuilt = asSet(d.delta(size));
                for (int m : d.members())
                    rebuilt.insert(m);
                REQUIRE(rebuilt == dom);
            }
        }
    }
}
