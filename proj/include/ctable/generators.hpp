#pragma once

#include "ctable/instance.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace ctable {

struct RandomInstanceParams {
    int variables = 0;
    int domainSize = 0;
    int constraints = 0;
    int arity = 0;
    std::int64_t tuples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::int64_t checkedPower(int base, int exponent)
{
    std::int64_t r = 1;
    for (int i = 0; i < exponent; ++i) {
        if (r > std::numeric_limits<std::int64_t>::max() / base)
            return std::numeric_limits<std::int64_t>::max();
        r *= base;
    }
    return r;
}

// Floyd's algorithm: k distinct draws from [0, n), returned sorted.
inline std::vector<std::int64_t> sampleDistinct(std::int64_t n, std::int64_t k, std::mt19937_64& rng)
{
    std::unordered_set<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(k) * 2);
    for (std::int64_t j = n - k; j < n; ++j) {
        std::uniform_int_distribution<std::int64_t> pick(0, j);
        const std::int64_t t = pick(rng);
        if (!chosen.insert(t).second)
            chosen.insert(j);
    }
    std::vector<std::int64_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<int> range(int from, int to)
{
    std::vector<int> v(static_cast<std::size_t>(to - from + 1));
    std::iota(v.begin(), v.end(), from);
    return v;
}

inline TableConstraint notEqual(const Instance& inst, int x, int y)
{
    TableConstraint c{{x, y}, TupleTable(2)};
    for (int a : inst.variables[static_cast<std::size_t>(x)].values)
        for (int b : inst.variables[static_cast<std::size_t>(y)].values)
            if (a != b)
                c.tuples.add({a, b});
    return c;
}

} // namespace detail

/// Uniform random table CSP over domains {0..domainSize-1}. Scopes are drawn
/// without replacement and each table holds `tuples` distinct tuples. The
/// result depends only on the parameters (including the seed).
inline Instance generateRandom(const RandomInstanceParams& p)
{
    if (p.variables < 1 || p.domainSize < 1 || p.constraints < 0 || p.arity < 1 || p.tuples < 1)
        throw std::invalid_argument("generateRandom: parameters must be positive");
    if (p.arity > p.variables)
        throw std::invalid_argument("generateRandom: arity exceeds number of variables");
    const std::int64_t space = detail::checkedPower(p.domainSize, p.arity);
    if (p.tuples > space)
        throw std::invalid_argument("generateRandom: more tuples requested than domainSize^arity");

    std::mt19937_64 rng(p.seed);
    Instance inst;
    inst.name = "random-" + std::to_string(p.variables) + "-" + std::to_string(p.domainSize) + "-" + std::to_string(p.constraints) + "-" +
                std::to_string(p.arity) + "-" + std::to_string(p.tuples) + "-s" + std::to_string(p.seed);
    for (int v = 0; v < p.variables; ++v)
        inst.variables.push_back({"x" + std::to_string(v), detail::range(0, p.domainSize - 1)});

    std::vector<int> vars(static_cast<std::size_t>(p.variables));
    std::iota(vars.begin(), vars.end(), 0);
    for (int c = 0; c < p.constraints; ++c) {
        // Partial Fisher-Yates for the scope.
        for (int i = 0; i < p.arity; ++i) {
            std::uniform_int_distribution<int> pick(i, p.variables - 1);
            std::swap(vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(pick(rng))]);
        }
        TableConstraint tc{std::vector<int>(vars.begin(), vars.begin() + p.arity), TupleTable(p.arity)};
        tc.tuples.reserve(static_cast<std::size_t>(p.tuples));
        std::vector<int> tuple(static_cast<std::size_t>(p.arity));
        for (std::int64_t code : detail::sampleDistinct(space, p.tuples, rng)) {
            for (int j = p.arity - 1; j >= 0; --j) {
                tuple[static_cast<std::size_t>(j)] = static_cast<int>(code % p.domainSize);
                code /= p.domainSize;
            }
            tc.tuples.add(tuple);
        }
        inst.constraints.push_back(std::move(tc));
    }
    return inst;
}

/// n x n Latin square: cells take values 1..n, pairwise different on rows and columns.
inline Instance generateLatin(int n)
{
    if (n < 2)
        throw std::invalid_argument("generateLatin: size must be at least 2");
    Instance inst;
    inst.name = "latin-" + std::to_string(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            inst.variables.push_back({"c" + std::to_string(r) + "_" + std::to_string(c), detail::range(1, n)});
    const auto cell = [n](int r, int c) { return r * n + c; };
    for (int r = 0; r < n; ++r)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                inst.constraints.push_back(detail::notEqual(inst, cell(r, a), cell(r, b)));
                inst.constraints.push_back(detail::notEqual(inst, cell(a, r), cell(b, r)));
            }
    return inst;
}

/// `pigeons` variables over 1..holes, pairwise different.
inline Instance generatePigeonhole(int pigeons, int holes)
{
    if (pigeons < 2 || holes < 1)
        throw std::invalid_argument("generatePigeonhole: need at least 2 pigeons and 1 hole");
    Instance inst;
    inst.name = "pigeonhole-" + std::to_string(pigeons) + "-" + std::to_string(holes);
    for (int p = 0; p < pigeons; ++p)
        inst.variables.push_back({"p" + std::to_string(p), detail::range(1, holes)});
    for (int a = 0; a < pigeons; ++a)
        for (int b = a + 1; b < pigeons; ++b)
            inst.constraints.push_back(detail::notEqual(inst, a, b));
    return inst;
}

/// Clique of binary "different" tables over the given domains.
inline Instance generateAllDiffPairs(const std::vector<std::vector<int>>& domains)
{
    if (domains.size() < 2)
        throw std::invalid_argument("generateAllDiffPairs: need at least 2 variables");
    Instance inst;
    inst.name = "alldiff-" + std::to_string(domains.size());
    for (std::size_t v = 0; v < domains.size(); ++v) {
        auto values = domains[v];
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        if (values.empty())
            throw std::invalid_argument("generateAllDiffPairs: empty domain");
        inst.variables.push_back({"x" + std::to_string(v), std::move(values)});
    }
    const int n = static_cast<int>(domains.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            inst.constraints.push_back(detail::notEqual(inst, a, b));
    return inst;
}

enum class StructuredKind { Latin, Pigeonhole, AllDiffPairs };

/// Size-parameterized structured families: latin(size), pigeonhole with
/// size+1 pigeons in size holes, and the "different" clique over `size`
/// variables with domains 1..size.
inline Instance generateStructured(StructuredKind kind, int size)
{
    if (size < 2)
        throw std::invalid_argument("generateStructured: size must be at least 2");
    switch (kind) {
    case StructuredKind::Latin: return generateLatin(size);
    case StructuredKind::Pigeonhole: return generatePigeonhole(size + 1, size);
    case StructuredKind::AllDiffPairs: return generateAllDiffPairs(std::vector<std::vector<int>>(static_cast<std::size_t>(size), detail::range(1, size)));
    }
    throw std::invalid_argument("generateStructured: unknown kind");
}

} // namespace ctable
