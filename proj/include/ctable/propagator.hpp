#pragma once

#include <span>
#include <string_view>

namespace ctable {

enum class Outcome { Consistent, Failure };

/// A filtering procedure attached to one constraint.
///
/// `post` runs once, when the propagator is added to a solver, and performs
/// the initial filtering. `propagate` is called whenever a variable of the
/// scope has changed and must leave the constraint at its consistency level.
class Propagator {
public:
    virtual ~Propagator() = default;

    [[nodiscard]] virtual std::span<const int> scope() const noexcept = 0;
    [[nodiscard]] virtual std::string_view name() const noexcept = 0;

    virtual Outcome post() = 0;
    virtual Outcome propagate() = 0;
};

} // namespace ctable
