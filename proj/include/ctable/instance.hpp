#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctable {

/// Tuples of fixed arity stored row-major in one buffer.
class TupleTable {
public:
    TupleTable() = default;
    explicit TupleTable(int arity) : arity_(arity)
    {
        if (arity < 1)
            throw std::invalid_argument("TupleTable: arity must be positive");
    }

    [[nodiscard]] int arity() const noexcept { return arity_; }
    [[nodiscard]] std::size_t size() const noexcept { return arity_ == 0 ? 0 : data_.size() / static_cast<std::size_t>(arity_); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    void add(std::span<const int> tuple)
    {
        if (static_cast<int>(tuple.size()) != arity_)
            throw std::invalid_argument("TupleTable: tuple arity mismatch");
        data_.insert(data_.end(), tuple.begin(), tuple.end());
    }
    void add(std::initializer_list<int> tuple) { add(std::span<const int>(tuple.begin(), tuple.size())); }

    [[nodiscard]] std::span<const int> operator[](std::size_t i) const noexcept
    {
        return {data_.data() + i * static_cast<std::size_t>(arity_), static_cast<std::size_t>(arity_)};
    }

    void reserve(std::size_t nTuples) { data_.reserve(nTuples * static_cast<std::size_t>(arity_)); }

    friend bool operator==(const TupleTable&, const TupleTable&) = default;

private:
    int arity_ = 0;
    std::vector<int> data_;
};

struct Variable {
    std::string id;
    std::vector<int> values; // strictly increasing

    friend bool operator==(const Variable&, const Variable&) = default;
};

struct TableConstraint {
    std::vector<int> scope; // indices into Instance::variables
    TupleTable tuples;

    friend bool operator==(const TableConstraint&, const TableConstraint&) = default;
};

/// A CSP whose constraints are all positive tables. Tuples may mention values
/// outside the declared domains; propagators drop such tuples when posted.
struct Instance {
    std::string name;
    std::vector<Variable> variables;
    std::vector<TableConstraint> constraints;

    [[nodiscard]] int variableIndex(std::string_view id) const
    {
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (variables[i].id == id)
                return static_cast<int>(i);
        return -1;
    }

    friend bool operator==(const Instance&, const Instance&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what) : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

namespace detail {

inline std::vector<std::string> splitWords(std::string_view line)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

inline int parseInt(const std::string& token, int line)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(token, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + token + "'");
    }
    if (used != token.size() || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ParseError(line, "expected an integer, got '" + token + "'");
    return static_cast<int>(v);
}

} // namespace detail

/// Parses the line-based instance format:
///
///     csp <name>
///     var <id> : v1 v2 ... vk
///     table <id1> ... <idr>
///     t v1 ... vr
///     end
///
/// `#` starts a comment. Errors carry the offending line number.
inline Instance parseInstance(std::string_view text)
{
    Instance inst;
    std::map<std::string, int, std::less<>> ids;
    bool sawHeader = false;
    bool inTable = false;
    int tableLine = 0;
    int lineNo = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineNo;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto words = detail::splitWords(line);
        if (words.empty())
            continue;
        const std::string& kw = words.front();

        if (inTable) {
            if (kw == "t") {
                auto& c = inst.constraints.back();
                if (static_cast<int>(words.size()) - 1 != c.tuples.arity())
                    throw ParseError(lineNo, "tuple has " + std::to_string(words.size() - 1) + " values, scope has " + std::to_string(c.tuples.arity()));
                std::vector<int> tuple;
                tuple.reserve(words.size() - 1);
                for (std::size_t i = 1; i < words.size(); ++i)
                    tuple.push_back(detail::parseInt(words[i], lineNo));
                c.tuples.add(tuple);
                continue;
            }
            if (kw == "end") {
                if (words.size() != 1)
                    throw ParseError(lineNo, "unexpected tokens after 'end'");
                inTable = false;
                continue;
            }
            throw ParseError(lineNo, "expected 't' or 'end' inside table block, got '" + kw + "'");
        }

        if (kw == "csp") {
            if (sawHeader)
                throw ParseError(lineNo, "duplicate 'csp' header");
            if (words.size() != 2)
                throw ParseError(lineNo, "expected 'csp <name>'");
            inst.name = words[1];
            sawHeader = true;
        } else if (kw == "var") {
            if (words.size() < 4 || words[2] != ":")
                throw ParseError(lineNo, "expected 'var <id> : v1 ... vk'");
            if (ids.contains(words[1]))
                throw ParseError(lineNo, "duplicate variable id '" + words[1] + "'");
            Variable v{words[1], {}};
            for (std::size_t i = 3; i < words.size(); ++i)
                v.values.push_back(detail::parseInt(words[i], lineNo));
            std::sort(v.values.begin(), v.values.end());
            if (std::adjacent_find(v.values.begin(), v.values.end()) != v.values.end())
                throw ParseError(lineNo, "duplicate value in domain of '" + words[1] + "'");
            ids.emplace(words[1], static_cast<int>(inst.variables.size()));
            inst.variables.push_back(std::move(v));
        } else if (kw == "table") {
            if (words.size() < 2)
                throw ParseError(lineNo, "table with empty scope");
            TableConstraint c;
            std::set<int> seen;
            for (std::size_t i = 1; i < words.size(); ++i) {
                const auto it = ids.find(words[i]);
                if (it == ids.end())
                    throw ParseError(lineNo, "undeclared variable '" + words[i] + "'");
                if (!seen.insert(it->second).second)
                    throw ParseError(lineNo, "variable '" + words[i] + "' repeated in scope");
                c.scope.push_back(it->second);
            }
            c.tuples = TupleTable(static_cast<int>(c.scope.size()));
            inst.constraints.push_back(std::move(c));
            inTable = true;
            tableLine = lineNo;
        } else {
            throw ParseError(lineNo, "unknown keyword '" + kw + "'");
        }
    }
    if (inTable)
        throw ParseError(tableLine, "table block not terminated by 'end'");
    if (!sawHeader)
        throw ParseError(1, "missing 'csp <name>' header");
    return inst;
}

inline std::string renderInstance(const Instance& inst)
{
    std::ostringstream out;
    out << "csp " << inst.name << '\n';
    for (const auto& v : inst.variables) {
        out << "var " << v.id << " :";
        for (int x : v.values)
            out << ' ' << x;
        out << '\n';
    }
    for (const auto& c : inst.constraints) {
        out << "table";
        for (int x : c.scope)
            out << ' ' << inst.variables[static_cast<std::size_t>(x)].id;
        out << '\n';
        for (std::size_t i = 0; i < c.tuples.size(); ++i) {
            out << 't';
            for (int x : c.tuples[i])
                out << ' ' << x;
            out << '\n';
        }
        out << "end\n";
    }
    return out.str();
}

inline Instance loadInstance(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseInstance(buf.str());
}

inline void saveInstance(const Instance& inst, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << renderInstance(inst);
}

/// True iff `assignment` (one value per variable) satisfies every table.
inline bool satisfies(const Instance& inst, std::span<const int> assignment)
{
    if (assignment.size() != inst.variables.size())
        return false;
    for (std::size_t v = 0; v < assignment.size(); ++v)
        if (!std::binary_search(inst.variables[v].values.begin(), inst.variables[v].values.end(), assignment[v]))
            return false;
    for (const auto& c : inst.constraints) {
        bool found = false;
        for (std::size_t i = 0; i < c.tuples.size() && !found; ++i) {
            const auto t = c.tuples[i];
            found = true;
            for (std::size_t j = 0; j < c.scope.size(); ++j)
                if (t[j] != assignment[static_cast<std::size_t>(c.scope[j])]) {
                    found = false;
                    break;
                }
        }
        if (!found)
            return false;
    }
    return true;
}

} // namespace ctable
