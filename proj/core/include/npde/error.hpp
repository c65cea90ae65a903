#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace npde {

/// Raised when a numerical run produces non-finite or runaway values.
/// `step()` is the zero-based index of the step that produced them, when known.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what,
                             std::optional<std::size_t> step = std::nullopt)
        : std::runtime_error(what), step_(step) {}

    std::optional<std::size_t> step() const noexcept { return step_; }

private:
    std::optional<std::size_t> step_;
};

/// Linear system could not be solved (zero pivot, non-finite factor).
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes of two operands disagree.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace npde
