#include "catch_amalgamated.hpp"

#include "ctable/trail.hpp"

#include <random>
#include <vector>

using namespace ctable;

TEST_CASE("pushLevel records entry-stack heights", "[trail]")
{
    SECTION("fresh trail")
    {
        Trail t;
        t.pushLevel();
        REQUIRE(t.levelMarks() == std::vector<std::size_t>{0});
        REQUIRE(t.time() == 1);
    }
    SECTION("with three entries")
    {
        Trail t;
        ReversibleInt a(0), b(0), c(0);
        t.pushLevel();
        a.set(t, 1);
        b.set(t, 1);
        c.set(t, 1);
        REQUIRE(t.entryCount() == 3);
        t.pushLevel();
        REQUIRE(t.levelMarks().back() == 3);
    }
    SECTION("two levels without writes")
    {
        Trail t;
        t.pushLevel();
        t.pushLevel();
        REQUIRE(t.levelMarks().size() == 2);
        REQUIRE(t.levelMarks()[0] == t.levelMarks()[1]);
        REQUIRE(t.time() == 2);
    }
}

TEST_CASE("restoreLevel undoes writes", "[trail]")
{
    Trail t;
    ReversibleInt r(5);

    SECTION("single write")
    {
        t.pushLevel();
        r.set(t, 9);
        t.restoreLevel();
        REQUIRE(r.value() == 5);
    }
    SECTION("repeated writes in one level are saved once")
    {
        t.pushLevel();
        r.set(t, 9);
        r.set(t, 2);
        REQUIRE(t.entriesInCurrentLevel() == 1);
        t.restoreLevel();
        REQUIRE(r.value() == 5);
    }
    SECTION("nested levels restore in LIFO order")
    {
        t.pushLevel();
        r.set(t, 7);
        t.pushLevel();
        r.set(t, 3);
        t.restoreLevel();
        REQUIRE(r.value() == 7);
        t.restoreLevel();
        REQUIRE(r.value() == 5);
    }
    SECTION("restoring without an open level is rejected")
    {
        REQUIRE_THROWS_AS(t.restoreLevel(), std::logic_error);
    }
}

TEST_CASE("setReversible trails only on a new stamp", "[trail]")
{
    Trail t;
    ReversibleWord w(0xF0);
    t.pushLevel();
    REQUIRE(w.stamp() != t.currentStamp());
    w.set(t, 0x0F);
    REQUIRE(t.entriesInCurrentLevel() == 1);
    REQUIRE(w.stamp() == t.currentStamp());
    w.set(t, 0xFF);
    REQUIRE(t.entriesInCurrentLevel() == 1);

    // Same-value write is accepted and costs at most one entry per level.
    t.pushLevel();
    w.set(t, 0xFF);
    REQUIRE(w.value() == 0xFF);
    REQUIRE(t.entriesInCurrentLevel() == 1);
    REQUIRE(w.stamp() <= t.time());
}

TEST_CASE("writes at the root are not recorded", "[trail]")
{
    Trail t;
    ReversibleInt r(1);
    r.set(t, 4);
    REQUIRE(t.entryCount() == 0);
    REQUIRE(r.value() == 4);
}

TEST_CASE("a cell rewritten after backtracking into its level is not saved twice", "[trail]")
{
    Trail t;
    ReversibleInt r(1);
    t.pushLevel(); // L1
    r.set(t, 2);
    t.pushLevel(); // L2
    r.set(t, 3);
    t.restoreLevel();
    REQUIRE(r.value() == 2);
    r.set(t, 4); // back in L1, already saved there
    REQUIRE(t.entriesFor(r.slot()) == 1);
    t.pushLevel(); // fresh sibling of L2
    r.set(t, 5);
    REQUIRE(t.entriesFor(r.slot()) == 1);
    t.restoreLevel();
    REQUIRE(r.value() == 4);
    t.restoreLevel();
    REQUIRE(r.value() == 1);
}

TEST_CASE("negative values survive the word encoding", "[trail]")
{
    Trail t;
    ReversibleInt r(-1);
    t.pushLevel();
    r.set(t, -42);
    REQUIRE(r.value() == -42);
    t.restoreLevel();
    REQUIRE(r.value() == -1);
}

TEST_CASE("randomized trail operations match a snapshot model", "[trail][property]")
{
    std::mt19937_64 rng(20240611);
    for (int run = 0; run < 500; ++run) {
        Trail trail;
        constexpr int kCells = 6;
        std::vector<ReversibleInt> cells;
        for (int i = 0; i < kCells; ++i)
            cells.emplace_back(i);
        std::vector<std::vector<std::int64_t>> snapshots;
        std::uint64_t lastTime = 0;

        for (int step = 0; step < 200; ++step) {
            const int op = std::uniform_int_distribution<int>(0, 9)(rng);
            if (op < 2) {
                std::vector<std::int64_t> snap;
                for (auto& c : cells)
                    snap.push_back(c.value());
                snapshots.push_back(snap);
                trail.pushLevel();
                REQUIRE(trail.time() > lastTime);
                lastTime = trail.time();
            } else if (op < 4 && !snapshots.empty()) {
                trail.restoreLevel();
                for (int i = 0; i < kCells; ++i)
                    REQUIRE(cells[static_cast<std::size_t>(i)].value() == snapshots.back()[static_cast<std::size_t>(i)]);
                snapshots.pop_back();
                REQUIRE(trail.time() == lastTime);
            } else {
                auto& c = cells[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, kCells - 1)(rng))];
                c.set(trail, std::uniform_int_distribution<std::int64_t>(-50, 50)(rng));
            }
            for (auto& c : cells) {
                REQUIRE(c.stamp() <= trail.time());
                REQUIRE(trail.entriesFor(c.slot()) <= 1);
            }
            const auto& marks = trail.levelMarks();
            REQUIRE(std::is_sorted(marks.begin(), marks.end()));
        }
    }
}
