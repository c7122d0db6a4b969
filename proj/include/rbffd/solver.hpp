#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rbffd/geometry.hpp"
#include "rbffd/neighborhoods.hpp"
#include "rbffd/rbf_weights.hpp"

namespace rbffd {

/// Node-indexed solution values.
using ScalarField = Eigen::VectorXd;

enum class RunMode { fixed_steps, steady };

struct SolveConfig {
    int m = 2;
    int n = 15;
    double h = 0.0;            // node spacing; used only when target_nodes == 0
    long target_nodes = 1027;  // preferred way to size the node set
    double dt = 1e-6;
    long steps = 100000;
    RunMode mode = RunMode::fixed_steps;
    double tolerance = 1e-9;   // steady mode: stop once max|u2 - u1| / dt <= tolerance
    long max_steps = 10'000'000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::size_t chunk = 32;    // rows per scheduling chunk
    bool record_residuals = false;

    /// Throws ParameterError on dt <= 0, negative steps or n < binomial(m + 2, 2).
    void validate() const;
};

struct SolveReport {
    ScalarField field;
    long steps = 0;
    double wall_time_s = 0.0;
    double linf = 0.0;
    double l2 = 0.0;
    double residual = 0.0;  // max interior |u2 - u1| / dt of the last step
    std::vector<double> residual_history;  // filled when config.record_residuals
    SolveConfig config;
};

struct ErrorNorms {
    double linf = 0.0;
    double l2 = 0.0;
};

/// Nodes, supports and shapes for one configuration.
struct Problem {
    NodeSet nodes;
    StencilSet stencils;
    ShapeStore shapes;
};

Problem build_problem(const SolveConfig& config);

/// Overwrites boundary entries with the closed-form solution.
ScalarField apply_dirichlet(const NodeSet& nodes, ScalarField field);

/// Zero interior, exact Dirichlet values on the boundary.
ScalarField initial_field(const NodeSet& nodes);

/// One explicit Euler step u2 = u1 + dt (f + L u1) on interior nodes;
/// boundary entries are copied. Throws InstabilityError on non-finite output.
ScalarField explicit_step(const ScalarField& u1, const ShapeStore& shapes, const Eigen::VectorXd& forcing,
                          double dt);

/// Time loop from the initial field with double buffering. Only the loop is timed.
SolveReport run_time_loop(const SolveConfig& config, const NodeSet& nodes, const ShapeStore& shapes);

ErrorNorms error_norms(const ScalarField& field, const NodeSet& nodes);

/// min over rows of 2 / sum_j |w_ij|.
double stability_bound(const ShapeStore& shapes);

}  // namespace rbffd
