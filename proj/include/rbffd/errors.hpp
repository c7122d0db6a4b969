#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbffd {

/// Invalid argument or violated precondition.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The local RBF-FD system of a node could not be solved reliably.
class DegenerateStencilError : public std::runtime_error {
public:
    DegenerateStencilError(const std::string& what, std::ptrdiff_t node = -1)
        : std::runtime_error(what), node_(node) {}

    /// Index of the offending node, or -1 when unknown.
    std::ptrdiff_t node() const noexcept { return node_; }

private:
    std::ptrdiff_t node_;
};

/// The explicit iteration produced non-finite values.
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what, long step, double max_abs)
        : std::runtime_error(what), step_(step), max_abs_(max_abs) {}

    long step() const noexcept { return step_; }
    double max_abs() const noexcept { return max_abs_; }

private:
    long step_;
    double max_abs_;
};

/// Run-to-steady did not reach its tolerance within the step cap.
class TimeoutError : public std::runtime_error {
public:
    TimeoutError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace rbffd
