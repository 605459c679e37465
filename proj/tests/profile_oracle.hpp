#pragma once

// Exact performance profile over integer run times, used to check the
// floating-point implementation. Ratios and rho values stay as fractions.

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace ctable::testing {

struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    [[nodiscard]] double toDouble() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Fraction& a, const Fraction& b) { return a.num * b.den == b.num * a.den; }
};

/// times[p][s]: run time of algorithm s on instance p, or nullopt when it did not finish.
/// tau is given as a fraction tauNum / tauDen.
inline std::vector<Fraction> exactProfile(const std::vector<std::vector<std::optional<std::int64_t>>>& times, std::int64_t tauNum,
                                          std::int64_t tauDen)
{
    const std::size_t nAlgos = times.empty() ? 0 : times.front().size();
    std::vector<std::int64_t> within(nAlgos, 0);
    std::int64_t instances = 0;
    for (const auto& row : times) {
        std::optional<std::int64_t> best;
        for (const auto& t : row)
            if (t && (!best || *t < *best))
                best = t;
        if (!best)
            continue;
        ++instances;
        for (std::size_t s = 0; s < nAlgos; ++s)
            // t / best <= tauNum / tauDen
            if (row[s] && *row[s] * tauDen <= tauNum * *best)
                ++within[s];
    }
    std::vector<Fraction> rho;
    for (auto w : within) {
        const auto g = std::gcd(w, instances);
        rho.push_back({w / g, instances / g});
    }
    return rho;
}

} // namespace ctable::testing
