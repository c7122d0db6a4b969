#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rbffd/solver.hpp"

namespace rbffd {

/// Byte accounting of the time-loop working set: N (4 + n) doubles and
/// N_i + N n integers.
struct MemoryModel {
    static constexpr std::int64_t double_bytes = 8;
    static constexpr std::int64_t int_bytes = 4;
    static constexpr std::int64_t default_cache_bytes = 5'500'000;

    int n = 15;
    std::int64_t cache_bytes = default_cache_bytes;

    /// Bytes per node with every node counted as interior.
    std::int64_t per_node_bytes() const { return double_bytes * (4 + n) + int_bytes * (1 + n); }
    std::int64_t peak_nodes() const;
};

std::int64_t estimate_memory_bytes(std::int64_t N, std::int64_t N_interior, int n);

/// Node count at which the working set fills `cache_bytes`, rounded to nearest.
std::int64_t cache_peak_N(int n, std::int64_t cache_bytes = MemoryModel::default_cache_bytes);

/// t_base / t_accel; both must be positive.
double speedup(double t_base, double t_accel);

struct TimingReport {
    std::int64_t N = 0;
    int n = 0;
    int m = 0;
    long steps = 0;
    double loop_seconds = 0.0;
    std::optional<double> ns_per_step_node;  // empty when steps == 0
    int threads = 1;
    ScalarField field;  // final field of the fastest repeat
};

/// Times the fixed-step loop for each thread count, keeping the minimum of
/// `repeats` runs. Throws std::logic_error if two thread counts disagree on
/// the resulting field.
std::vector<TimingReport> benchmark_time_loop(const SolveConfig& config, const NodeSet& nodes,
                                              const ShapeStore& shapes, const std::vector<int>& thread_counts,
                                              int repeats);

/// Builds the problem from `config` and benchmarks it.
std::vector<TimingReport> benchmark_time_loop(const SolveConfig& config, const std::vector<int>& thread_counts,
                                              int repeats);

}  // namespace rbffd
