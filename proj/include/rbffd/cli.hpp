#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rbffd::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kParameterError = 2,
    kDegenerateStencil = 3,
    kInstability = 4,
    kTimeout = 5,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Least-squares slope of log(error) against log(h). Uses only the three
/// finest spacings when four or more are given. NaN when any error is not
/// strictly positive or fewer than two points remain.
double fit_convergence_order(std::span<const double> h, std::span<const double> error);

}  // namespace rbffd::cli
