#pragma once

#include "ctable/instance.hpp"
#include "ctable/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctable {

/// Outcome of one (instance, algorithm) run.
struct RunRecord {
    std::string instance;
    std::string algorithm;
    SearchStatus status = SearchStatus::Timeout;
    double seconds = 0.0;
    std::uint64_t nodes = 0;
    std::uint64_t failures = 0;

    [[nodiscard]] bool completed() const noexcept
    {
        return status == SearchStatus::Satisfiable || status == SearchStatus::Unsatisfiable;
    }
};

struct ProfileCurve {
    std::string algorithm;
    std::vector<std::pair<double, double>> points; // (tau, rho)
};

/// Performance ratios t / t_min for the records of one instance. Runs that did
/// not complete get +inf. Empty when no run completed.
inline std::map<std::string, double> performanceRatios(std::span<const RunRecord> records)
{
    std::map<std::string, double> out;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : records)
        if (r.completed())
            best = std::min(best, r.seconds);
    if (!std::isfinite(best))
        return out;
    for (const auto& r : records) {
        if (!r.completed())
            out[r.algorithm] = std::numeric_limits<double>::infinity();
        else if (best == 0.0)
            out[r.algorithm] = r.seconds == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        else
            out[r.algorithm] = r.seconds / best;
    }
    return out;
}

inline std::map<std::string, std::vector<RunRecord>> groupByInstance(std::span<const RunRecord> records)
{
    std::map<std::string, std::vector<RunRecord>> out;
    for (const auto& r : records)
        out[r.instance].push_back(r);
    return out;
}

/// Instances kept for the profile: at least one run completed, the slowest
/// completed run took at least `minTime` seconds, and at least
/// `minBacktracks` failures were needed (max over completed runs).
inline std::set<std::string> filterInstances(std::span<const RunRecord> records, double minTime, std::uint64_t minBacktracks)
{
    std::set<std::string> kept;
    for (const auto& [name, runs] : groupByInstance(records)) {
        bool anyCompleted = false;
        double slowest = 0.0;
        std::uint64_t backtracks = 0;
        for (const auto& r : runs) {
            if (!r.completed())
                continue;
            anyCompleted = true;
            slowest = std::max(slowest, r.seconds);
            backtracks = std::max(backtracks, r.failures);
        }
        if (anyCompleted && slowest >= minTime && backtracks >= minBacktracks)
            kept.insert(name);
    }
    return kept;
}

/// rho_s(tau) = |{p in P : r_{p,s} <= tau}| / |P| over the instances of `records`.
inline std::vector<ProfileCurve> performanceProfile(std::span<const RunRecord> records, std::span<const double> taus)
{
    if (!std::is_sorted(taus.begin(), taus.end()) || (!taus.empty() && taus.front() < 1.0))
        throw std::invalid_argument("performanceProfile: tau grid must be ascending and >= 1");

    std::set<std::string> algorithms;
    for (const auto& r : records)
        algorithms.insert(r.algorithm);

    std::vector<std::map<std::string, double>> ratios;
    for (const auto& [name, runs] : groupByInstance(records)) {
        auto rp = performanceRatios(runs);
        if (!rp.empty())
            ratios.push_back(std::move(rp));
    }
    if (ratios.empty())
        throw std::invalid_argument("performanceProfile: no instance with a completed run");

    const auto nInstances = static_cast<double>(ratios.size());
    std::vector<ProfileCurve> curves;
    for (const auto& algo : algorithms) {
        ProfileCurve curve{algo, {}};
        for (double tau : taus) {
            std::size_t within = 0;
            for (const auto& rp : ratios) {
                const auto it = rp.find(algo);
                if (it != rp.end() && it->second <= tau)
                    ++within;
            }
            curve.points.emplace_back(tau, static_cast<double>(within) / nInstances);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

/// `points` log-spaced values from 1 to the largest finite ratio (just {1} if that is 1).
inline std::vector<double> defaultTauGrid(std::span<const RunRecord> records, int points = 64)
{
    double maxRatio = 1.0;
    for (const auto& [name, runs] : groupByInstance(records))
        for (const auto& [algo, r] : performanceRatios(runs))
            if (std::isfinite(r))
                maxRatio = std::max(maxRatio, r);
    if (maxRatio <= 1.0 || points < 2)
        return {1.0};
    std::vector<double> grid;
    const double step = std::log(maxRatio) / (points - 1);
    for (int i = 0; i < points; ++i)
        grid.push_back(i == points - 1 ? maxRatio : std::exp(step * i));
    return grid;
}

struct BenchOptions {
    std::vector<Algorithm> algorithms{Algorithm::CT, Algorithm::CTI, Algorithm::CTR, Algorithm::STR2};
    double timeoutSeconds = 60.0;
    bool allSolutions = false;
};

/// Solves the instance once with the algorithm in a fresh solver; only search() is timed.
inline RunRecord runOnce(const std::string& name, const Instance& instance, Algorithm algorithm, const BenchOptions& options)
{
    auto solver = makeSolver(instance, algorithm);
    SearchLimits limits;
    limits.timeoutSeconds = options.timeoutSeconds;
    limits.maxSolutions = options.allSolutions ? 0 : 1;
    const auto result = solver->search(limits);
    return RunRecord{name, std::string(algorithmName(algorithm)), result.status, result.stats.seconds, result.stats.nodes, result.stats.failures};
}

inline std::vector<RunRecord> runBench(std::span<const std::pair<std::string, Instance>> corpus, const BenchOptions& options)
{
    std::vector<RunRecord> records;
    for (const auto& [name, instance] : corpus)
        for (Algorithm a : options.algorithms)
            records.push_back(runOnce(name, instance, a, options));
    return records;
}

/// Every `*.csp` file under `dir`, sorted by file name.
inline std::vector<std::pair<std::string, Instance>> loadCorpus(const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csp")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, Instance>> corpus;
    for (const auto& f : files)
        corpus.emplace_back(f.stem().string(), loadInstance(f.string()));
    return corpus;
}

inline void writeRunsCsv(std::ostream& out, std::span<const RunRecord> records)
{
    out << "instance,algorithm,status,time_s,nodes,failures\n";
    out << std::setprecision(9);
    for (const auto& r : records)
        out << r.instance << ',' << r.algorithm << ',' << statusName(r.status) << ',' << r.seconds << ',' << r.nodes << ',' << r.failures << '\n';
}

inline void writeProfileCsv(std::ostream& out, std::span<const ProfileCurve> curves)
{
    out << "algorithm,tau,rho\n";
    out << std::setprecision(12);
    for (const auto& c : curves)
        for (const auto& [tau, rho] : c.points)
            out << c.algorithm << ',' << tau << ',' << rho << '\n';
}

struct BenchReport {
    std::vector<RunRecord> records;
    std::set<std::string> profiled;
    std::vector<ProfileCurve> curves;
};

/// Runs the corpus, filters instances, builds the profile and writes
/// runs.csv / profile.csv into `outDir`. The profile is omitted when no
/// instance survives the filters.
inline BenchReport runBenchToCsv(std::span<const std::pair<std::string, Instance>> corpus, const BenchOptions& options, double minTime,
                                 std::uint64_t minBacktracks, const std::filesystem::path& outDir)
{
    BenchReport report;
    report.records = runBench(corpus, options);
    report.profiled = filterInstances(report.records, minTime, minBacktracks);

    std::vector<RunRecord> kept;
    for (const auto& r : report.records)
        if (report.profiled.contains(r.instance))
            kept.push_back(r);
    if (!kept.empty())
        report.curves = performanceProfile(kept, defaultTauGrid(kept));

    std::filesystem::create_directories(outDir);
    std::ofstream runs(outDir / "runs.csv");
    writeRunsCsv(runs, report.records);
    std::ofstream profile(outDir / "profile.csv");
    writeProfileCsv(profile, report.curves);
    if (!runs || !profile)
        throw std::runtime_error("cannot write CSV files to '" + outDir.string() + "'");
    return report;
}

} // namespace ctable
