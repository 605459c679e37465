// Walks through Compact-Table on the three-variable running example:
// prints the support rows, removes a from dom(x) and shows the filtering.

#include "ctable/ctable.hpp"

#include <iostream>

using namespace ctable;

namespace {

constexpr int A = 1, B = 2, C = 3, D = 4;

char letter(int v) { return "?abcd"[v]; }

std::string row(std::span<const std::uint64_t> words, int n)
{
    std::string s;
    for (int i = 0; i < n; ++i)
        s += ((words[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1U) ? '1' : '0';
    return s;
}

void printDomains(const Store& store)
{
    const char* names = "xyz";
    for (int v = 0; v < 3; ++v) {
        std::cout << "  dom(" << names[v] << ") = {";
        const auto values = store.domain(v).currentValues();
        for (std::size_t i = 0; i < values.size(); ++i)
            std::cout << (i ? ", " : "") << letter(values[i]);
        std::cout << "}\n";
    }
}

} // namespace

int main()
{
    Store store(std::vector<std::vector<int>>{{A, B}, {A, B, D}, {A, B, C}});
    TupleTable table(3);
    for (auto t : {std::vector<int>{A, A, A}, {A, A, B}, {A, B, C}, {B, A, A}, {A, C, B}, {A, B, B}, {B, A, B}, {B, B, A}, {B, B, B}})
        table.add(t);

    CompactTable ct(store, {0, 1, 2}, table);
    const int n = ct.tupleCount();
    std::cout << n << " of " << table.size() << " tuples indexed\n";
    const char* names = "xyz";
    for (int j = 0; j < 3; ++j)
        for (int a = 0; a < store.domain(j).initialSize(); ++a)
            std::cout << "  supports[" << names[j] << ", " << letter(store.domain(j).valueOf(a)) << "] = " << row(ct.supportRow(j, a), n) << '\n';

    ct.post();
    std::cout << "after posting:\n";
    printDomains(store);

    store.trail().pushLevel();
    store.remove(0, *store.domain(0).indexOf(A));
    ct.propagate();
    std::cout << "after removing a from dom(x):\n  currTable = " << row(ct.currTable().words(), n) << '\n';
    printDomains(store);

    store.trail().restoreLevel();
    std::cout << "after backtracking:\n  currTable = " << row(ct.currTable().words(), n) << '\n';
    printDomains(store);
}
