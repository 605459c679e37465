#pragma once

#include "ctable/compact_table.hpp"
#include "ctable/instance.hpp"
#include "ctable/oracle.hpp"
#include "ctable/propagator.hpp"
#include "ctable/sparse_set.hpp"
#include "ctable/store.hpp"
#include "ctable/str2.hpp"

#include <chrono>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctable {

enum class Algorithm { CT, CTI, CTR, STR2, Oracle };

inline std::string_view algorithmName(Algorithm a) noexcept
{
    switch (a) {
    case Algorithm::CT: return "ct";
    case Algorithm::CTI: return "cti";
    case Algorithm::CTR: return "ctr";
    case Algorithm::STR2: return "str2";
    case Algorithm::Oracle: return "oracle";
    }
    return "?";
}

inline std::optional<Algorithm> parseAlgorithm(std::string_view name) noexcept
{
    for (Algorithm a : {Algorithm::CT, Algorithm::CTI, Algorithm::CTR, Algorithm::STR2, Algorithm::Oracle})
        if (algorithmName(a) == name)
            return a;
    return std::nullopt;
}

enum class SearchStatus { Satisfiable, Unsatisfiable, Timeout, LimitReached };

inline std::string_view statusName(SearchStatus s) noexcept
{
    switch (s) {
    case SearchStatus::Satisfiable: return "satisfiable";
    case SearchStatus::Unsatisfiable: return "unsatisfiable";
    case SearchStatus::Timeout: return "timeout";
    case SearchStatus::LimitReached: return "limit";
    }
    return "?";
}

struct SearchLimits {
    double timeoutSeconds = 0.0;     // <= 0: none
    std::uint64_t maxSolutions = 1;  // 0: enumerate all
    std::uint64_t maxNodes = 0;      // 0: none
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t failures = 0;
    std::uint64_t solutions = 0;
    std::uint64_t propagations = 0;
    double seconds = 0.0;
};

struct SearchResult {
    SearchStatus status = SearchStatus::Unsatisfiable;
    std::vector<std::vector<int>> solutions; // values, in variable order
    SearchStats stats;
};

/// Depth-first search with binary branching (x = v | x != v), dom/deg
/// variable selection, min-value ordering and propagation to a fixpoint at
/// every node.
class Solver {
public:
    explicit Solver(Instance instance) : instance_(std::move(instance))
    {
        std::vector<std::vector<int>> doms;
        doms.reserve(instance_.variables.size());
        for (const auto& v : instance_.variables)
            doms.push_back(v.values);
        store_ = std::make_unique<Store>(doms);
        unbound_ = std::make_unique<ReversibleSparseSet>(store_->trail(), store_->variableCount());
        watchers_.resize(instance_.variables.size());
        degree_.assign(instance_.variables.size(), 0);
    }

    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    [[nodiscard]] Store& store() noexcept { return *store_; }
    [[nodiscard]] const Store& store() const noexcept { return *store_; }
    [[nodiscard]] const Instance& instance() const noexcept { return instance_; }
    [[nodiscard]] Trail& trail() noexcept { return store_->trail(); }

    /// Registers and posts a propagator. A failing post makes the problem unsatisfiable.
    Propagator& add(std::unique_ptr<Propagator> p)
    {
        if (trail().depth() != 0)
            throw std::logic_error("Solver::add: propagators must be added before search");
        const int id = static_cast<int>(propagators_.size());
        for (int v : p->scope()) {
            watchers_[static_cast<std::size_t>(v)].push_back(id);
            ++degree_[static_cast<std::size_t>(v)];
        }
        propagators_.push_back(std::move(p));
        queued_.push_back(0);
        if (propagators_.back()->post() == Outcome::Failure)
            rootFailed_ = true;
        store_->clearTouched();
        return *propagators_.back();
    }

    /// Posts one propagator of the given kind per table of the instance.
    void addTables(Algorithm algorithm, CompactTableOptions ctOptions = {})
    {
        for (const auto& c : instance_.constraints)
            add(makePropagator(algorithm, c, ctOptions));
    }

    std::unique_ptr<Propagator> makePropagator(Algorithm algorithm, const TableConstraint& c, CompactTableOptions ctOptions = {})
    {
        switch (algorithm) {
        case Algorithm::CT: ctOptions.mode = UpdateMode::Dynamic; break;
        case Algorithm::CTI: ctOptions.mode = UpdateMode::Incremental; break;
        case Algorithm::CTR: ctOptions.mode = UpdateMode::ResetOnly; break;
        case Algorithm::STR2: return std::make_unique<Str2Table>(*store_, c.scope, c.tuples);
        case Algorithm::Oracle: return std::make_unique<OraclePropagator>(*store_, c.scope, c.tuples);
        }
        return std::make_unique<CompactTable>(*store_, c.scope, c.tuples, ctOptions);
    }

    [[nodiscard]] std::span<const std::unique_ptr<Propagator>> propagators() const noexcept { return propagators_; }
    [[nodiscard]] int degree(int var) const noexcept { return degree_[static_cast<std::size_t>(var)]; }
    [[nodiscard]] bool failedAtRoot() const noexcept { return rootFailed_; }

    /// Queues every propagator, e.g. before the root propagation.
    void scheduleAll()
    {
        for (std::size_t i = 0; i < propagators_.size(); ++i)
            enqueue(static_cast<int>(i));
    }

    /// Runs queued propagators, and those watching variables modified by
    /// them or by decisions, until nothing changes or a failure occurs.
    Outcome propagateFixpoint()
    {
        if (rootFailed_)
            return Outcome::Failure;
        wakeWatchers(-1);
        while (!queue_.empty()) {
            const int id = queue_.front();
            queue_.pop_front();
            queued_[static_cast<std::size_t>(id)] = 0;
            ++stats_.propagations;
            if (propagators_[static_cast<std::size_t>(id)]->propagate() == Outcome::Failure) {
                clearQueue();
                store_->clearTouched();
                return Outcome::Failure;
            }
            wakeWatchers(id);
        }
        return Outcome::Consistent;
    }

    /// Unbound variable minimizing |dom| / degree; ties go to the smallest index.
    /// Returns -1 when every variable is bound.
    [[nodiscard]] int selectVariable()
    {
        for (int s = unbound_->size() - 1; s >= 0; --s) {
            const int v = unbound_->at(s);
            if (store_->domain(v).bound())
                unbound_->remove(v);
        }
        int best = -1;
        for (int v : unbound_->members()) {
            if (best < 0 || better(v, best))
                best = v;
        }
        return best;
    }

    SearchResult search(const SearchLimits& limits = {})
    {
        if (trail().depth() != 0)
            throw std::logic_error("Solver::search: already searching");
        limits_ = limits;
        stats_ = {};
        solutions_.clear();
        stop_ = StopReason::None;
        start_ = Clock::now();

        trail().pushLevel();
        ++stats_.nodes;
        scheduleAll();
        explore();
        trail().restoreLevel();
        store_->clearTouched();

        SearchResult result;
        result.stats = stats_;
        result.stats.solutions = solutions_.size();
        result.stats.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
        switch (stop_) {
        case StopReason::Timeout: result.status = SearchStatus::Timeout; break;
        case StopReason::NodeLimit: result.status = SearchStatus::LimitReached; break;
        case StopReason::SolutionLimit:
        case StopReason::None: result.status = solutions_.empty() ? SearchStatus::Unsatisfiable : SearchStatus::Satisfiable; break;
        }
        result.solutions = std::move(solutions_);
        return result;
    }

private:
    using Clock = std::chrono::steady_clock;
    enum class StopReason { None, SolutionLimit, Timeout, NodeLimit };

    void enqueue(int id)
    {
        if (!queued_[static_cast<std::size_t>(id)]) {
            queued_[static_cast<std::size_t>(id)] = 1;
            queue_.push_back(id);
        }
    }

    void clearQueue()
    {
        for (int id : queue_)
            queued_[static_cast<std::size_t>(id)] = 0;
        queue_.clear();
    }

    // A propagator leaves its own constraint at fixpoint, so it is not re-queued for its own changes.
    void wakeWatchers(int source)
    {
        for (int v : store_->touched())
            for (int id : watchers_[static_cast<std::size_t>(v)])
                if (id != source)
                    enqueue(id);
        store_->clearTouched();
    }

    [[nodiscard]] bool better(int a, int b) const
    {
        const auto sa = static_cast<std::int64_t>(store_->domain(a).size());
        const auto sb = static_cast<std::int64_t>(store_->domain(b).size());
        const std::int64_t da = degree_[static_cast<std::size_t>(a)];
        const std::int64_t db = degree_[static_cast<std::size_t>(b)];
        // Degree 0 ranks as an infinite ratio.
        if (da == 0 || db == 0) {
            if (da == 0 && db == 0)
                return a < b;
            return db == 0;
        }
        const std::int64_t lhs = sa * db;
        const std::int64_t rhs = sb * da;
        return lhs < rhs || (lhs == rhs && a < b);
    }

    bool shouldStop()
    {
        if (stop_ != StopReason::None)
            return true;
        if (limits_.maxNodes != 0 && stats_.nodes >= limits_.maxNodes)
            stop_ = StopReason::NodeLimit;
        else if (limits_.timeoutSeconds > 0 && std::chrono::duration<double>(Clock::now() - start_).count() > limits_.timeoutSeconds)
            stop_ = StopReason::Timeout;
        return stop_ != StopReason::None;
    }

    void recordSolution()
    {
        std::vector<int> values;
        values.reserve(static_cast<std::size_t>(store_->variableCount()));
        for (int v = 0; v < store_->variableCount(); ++v)
            values.push_back(store_->domain(v).valueOf(store_->domain(v).at(0)));
        if (!satisfies(instance_, values))
            throw std::logic_error("Solver: propagation accepted an assignment violating a table");
        solutions_.push_back(std::move(values));
        if (limits_.maxSolutions != 0 && solutions_.size() >= limits_.maxSolutions)
            stop_ = StopReason::SolutionLimit;
    }

    void explore()
    {
        if (propagateFixpoint() == Outcome::Failure) {
            ++stats_.failures;
            return;
        }
        const int x = selectVariable();
        if (x < 0) {
            recordSolution();
            return;
        }
        const int v = store_->domain(x).minIndex();

        for (int branch = 0; branch < 2; ++branch) {
            if (shouldStop())
                return;
            trail().pushLevel();
            ++stats_.nodes;
            if (branch == 0) {
                store_->assign(x, v);
            } else {
                store_->remove(x, v);
            }
            explore();
            trail().restoreLevel();
            store_->clearTouched();
        }
    }

    Instance instance_;
    std::unique_ptr<Store> store_;
    std::unique_ptr<ReversibleSparseSet> unbound_;
    std::vector<std::unique_ptr<Propagator>> propagators_;
    std::vector<std::vector<int>> watchers_;
    std::vector<int> degree_;
    std::deque<int> queue_;
    std::vector<char> queued_;
    bool rootFailed_ = false;

    SearchLimits limits_;
    SearchStats stats_;
    std::vector<std::vector<int>> solutions_;
    StopReason stop_ = StopReason::None;
    Clock::time_point start_;
};

/// Solver over `instance` with one propagator of the given kind per table.
inline std::unique_ptr<Solver> makeSolver(const Instance& instance, Algorithm algorithm, CompactTableOptions ctOptions = {})
{
    auto solver = std::make_unique<Solver>(instance);
    solver->addTables(algorithm, ctOptions);
    return solver;
}

} // namespace ctable
