// ctable: solve, benchmark, generate and cross-check table CSPs.

#include "ctable/ctable.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace ctable;

namespace {

enum Exit { Sat = 0, Unsat = 1, Timeout = 2, Error = 3 };
constexpr int kMismatch = 1; // verify

int exitFor(SearchStatus s)
{
    switch (s) {
    case SearchStatus::Satisfiable: return Sat;
    case SearchStatus::Unsatisfiable: return Unsat;
    case SearchStatus::Timeout:
    case SearchStatus::LimitReached: return Timeout;
    }
    return Error;
}

void printSolution(const std::vector<int>& values)
{
    std::cout << "solution:";
    for (int v : values)
        std::cout << ' ' << v;
    std::cout << '\n';
}

int runSolve(const std::string& file, const std::string& algo, double timeout, bool all, bool stats)
{
    const auto algorithm = parseAlgorithm(algo);
    if (!algorithm)
        throw std::invalid_argument("unknown algorithm '" + algo + "'");
    const auto instance = loadInstance(file);
    auto solver = makeSolver(instance, *algorithm);
    SearchLimits limits;
    limits.timeoutSeconds = timeout;
    limits.maxSolutions = all ? 0 : 1;
    const auto result = solver->search(limits);

    std::cout << "status: " << statusName(result.status) << '\n';
    if (all) {
        std::cout << "solutions: " << result.solutions.size() << '\n';
        for (const auto& s : result.solutions)
            printSolution(s);
    } else if (!result.solutions.empty()) {
        printSolution(result.solutions.front());
    }
    std::cout << "nodes: " << result.stats.nodes << '\n'
              << "failures: " << result.stats.failures << '\n'
              << "time_s: " << result.stats.seconds << '\n';
    if (stats) {
        std::size_t tuples = 0;
        for (const auto& c : instance.constraints)
            tuples += c.tuples.size();
        std::cout << "algorithm: " << algorithmName(*algorithm) << '\n'
                  << "variables: " << instance.variables.size() << '\n'
                  << "constraints: " << instance.constraints.size() << '\n'
                  << "tuples: " << tuples << '\n'
                  << "propagations: " << result.stats.propagations << '\n';
    }
    return exitFor(result.status);
}

std::vector<Algorithm> parseAlgorithmList(const std::string& list)
{
    std::vector<Algorithm> out;
    std::stringstream ss(list);
    for (std::string name; std::getline(ss, name, ',');) {
        const auto a = parseAlgorithm(name);
        if (!a)
            throw std::invalid_argument("unknown algorithm '" + name + "'");
        out.push_back(*a);
    }
    if (out.empty())
        throw std::invalid_argument("no algorithm given");
    return out;
}

int runBenchCommand(const std::string& dir, const std::string& algos, double timeout, double minTime, std::uint64_t minBacktracks,
                    const std::string& out)
{
    BenchOptions options;
    options.algorithms = parseAlgorithmList(algos);
    options.timeoutSeconds = timeout;
    const auto corpus = loadCorpus(dir);
    if (corpus.empty())
        throw std::runtime_error("no .csp files in '" + dir + "'");
    const auto report = runBenchToCsv(corpus, options, minTime, minBacktracks, out);
    std::cout << "instances: " << corpus.size() << '\n'
              << "runs: " << report.records.size() << '\n'
              << "profiled: " << report.profiled.size() << '\n'
              << "wrote: " << (std::filesystem::path(out) / "runs.csv").string() << ", " << (std::filesystem::path(out) / "profile.csv").string()
              << '\n';
    return 0;
}

void emit(const Instance& inst, const std::string& out)
{
    if (out.empty() || out == "-")
        std::cout << renderInstance(inst);
    else
        saveInstance(inst, out);
}

/// CT fixpoint against the oracle at the root, then the search trees of every propagator.
int runVerify(const std::string& file, double timeout)
{
    const auto instance = loadInstance(file);
    bool agree = true;

    auto ct = makeSolver(instance, Algorithm::CT);
    ct->trail().pushLevel();
    ct->scheduleAll();
    const bool ctConsistent = ct->propagateFixpoint() == Outcome::Consistent;
    const auto expected = gacFixpoint(instance);
    bool sameFixpoint = ctConsistent == expected.has_value();
    if (sameFixpoint && expected)
        for (int v = 0; v < ct->store().variableCount(); ++v)
            sameFixpoint = sameFixpoint && ct->store().domain(v).currentValues() == (*expected)[static_cast<std::size_t>(v)];
    ct->trail().restoreLevel();
    std::cout << "root fixpoint ct vs oracle: " << (sameFixpoint ? "agree" : "DIFFER") << (expected ? "" : " (failure)") << '\n';
    agree = agree && sameFixpoint;

    SearchLimits limits;
    limits.timeoutSeconds = timeout;
    limits.maxSolutions = 0;
    const auto ref = makeSolver(instance, Algorithm::CT)->search(limits);
    if (ref.status == SearchStatus::Timeout) {
        std::cout << "search ct: timeout, tree comparison skipped\n";
        return agree ? Timeout : kMismatch;
    }
    const std::set<std::vector<int>> refSet(ref.solutions.begin(), ref.solutions.end());
    std::cout << "search ct: " << ref.solutions.size() << " solutions, " << ref.stats.nodes << " nodes, " << ref.stats.failures << " failures\n";
    for (Algorithm a : {Algorithm::CTI, Algorithm::CTR, Algorithm::STR2, Algorithm::Oracle}) {
        const auto r = makeSolver(instance, a)->search(limits);
        if (r.status == SearchStatus::Timeout) {
            std::cout << "search " << algorithmName(a) << ": timeout\n";
            return agree ? Timeout : kMismatch;
        }
        const bool sameSolutions = std::set<std::vector<int>>(r.solutions.begin(), r.solutions.end()) == refSet;
        const bool sameTree = a == Algorithm::Oracle || (r.stats.nodes == ref.stats.nodes && r.stats.failures == ref.stats.failures);
        std::cout << "search " << algorithmName(a) << ": " << r.solutions.size() << " solutions, " << r.stats.nodes << " nodes, " << r.stats.failures
                  << " failures: " << (sameSolutions && sameTree ? "agree" : "DIFFER") << '\n';
        agree = agree && sameSolutions && sameTree;
    }
    std::cout << (agree ? "verified" : "MISMATCH") << '\n';
    return agree ? 0 : kMismatch;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Table constraint solver with Compact-Table propagation"};
    app.require_subcommand(1);

    std::string file, algo = "ct";
    double timeout = 0.0;
    bool all = false, stats = false;
    auto* solve = app.add_subcommand("solve", "Solve an instance");
    solve->add_option("file", file, "Instance file")->required()->check(CLI::ExistingFile);
    solve->add_option("--algo", algo, "ct, cti, ctr, str2 or oracle")->check(CLI::IsMember({"ct", "cti", "ctr", "str2", "oracle"}));
    solve->add_option("--timeout", timeout, "Seconds, 0 for none");
    solve->add_flag("--all-solutions", all, "Enumerate every solution");
    solve->add_flag("--stats", stats, "Print instance and propagation statistics");

    std::string dir, algos = "ct,cti,ctr,str2", out;
    double benchTimeout = 60.0, minTime = 0.0;
    std::uint64_t minBacktracks = 0;
    auto* bench = app.add_subcommand("bench", "Run every algorithm on a directory of .csp files and write runs.csv and profile.csv");
    bench->add_option("dir", dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
    bench->add_option("--algos", algos, "Comma-separated algorithms");
    bench->add_option("--timeout", benchTimeout, "Seconds per run");
    bench->add_option("--min-time", minTime, "Drop instances whose slowest completed run is faster");
    bench->add_option("--min-backtracks", minBacktracks, "Drop instances needing fewer failures");
    bench->add_option("--out", out, "Output directory")->required();

    std::uint64_t seed = 0;
    std::string genOut;
    auto* gen = app.add_subcommand("gen", "Generate an instance");
    gen->require_subcommand(1);
    gen->fallthrough();
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--out", genOut, "Output file, stdout if omitted");
    std::vector<int> randomArgs;
    auto* genRandom = gen->add_subcommand("random", "Random tables: <nVars> <dom> <nCons> <arity> <nTuples>");
    genRandom->add_option("params", randomArgs, "nVars dom nCons arity nTuples")->required()->expected(5);
    int latinN = 0;
    auto* genLatin = gen->add_subcommand("latin", "Latin square of order n");
    genLatin->add_option("n", latinN)->required();
    int pigeons = 0, holes = 0;
    auto* genPigeon = gen->add_subcommand("pigeonhole", "Pigeons into holes, pairwise different");
    genPigeon->add_option("pigeons", pigeons)->required();
    genPigeon->add_option("holes", holes)->required();

    std::string verifyFile;
    double verifyTimeout = 60.0;
    auto* verify = app.add_subcommand("verify", "Cross-check CT against the oracle and the other propagators");
    verify->add_option("file", verifyFile, "Instance file")->required()->check(CLI::ExistingFile);
    verify->add_option("--timeout", verifyTimeout, "Seconds per search");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : Error;
    }

    try {
        if (*solve)
            return runSolve(file, algo, timeout, all, stats);
        if (*bench)
            return runBenchCommand(dir, algos, benchTimeout, minTime, minBacktracks, out);
        if (*gen) {
            Instance inst;
            if (*genRandom)
                inst = generateRandom({randomArgs[0], randomArgs[1], randomArgs[2], randomArgs[3], randomArgs[4], seed});
            else if (*genLatin)
                inst = generateLatin(latinN);
            else
                inst = generatePigeonhole(pigeons, holes);
            emit(inst, genOut);
            return 0;
        }
        if (*verify)
            return runVerify(verifyFile, verifyTimeout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Error;
    }
    return Error;
}
