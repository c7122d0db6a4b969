#include "rbffd/perf_model.hpp"

#include <cmath>
#include <stdexcept>

#include "rbffd/errors.hpp"

namespace rbffd {

std::int64_t MemoryModel::peak_nodes() const { return cache_peak_N(n, cache_bytes); }

std::int64_t estimate_memory_bytes(std::int64_t N, std::int64_t N_interior, int n) {
    if (N < 0 || N_interior < 0 || N_interior > N || n < 1) {
        throw ParameterError("memory estimate needs 0 <= N_i <= N and n >= 1");
    }
    return MemoryModel::double_bytes * N * (4 + n) + MemoryModel::int_bytes * (N_interior + N * n);
}

std::int64_t cache_peak_N(int n, std::int64_t cache_bytes) {
    if (n < 1 || cache_bytes <= 0) throw ParameterError("cache peak needs n >= 1 and a positive cache size");
    const MemoryModel model{n, cache_bytes};
    return std::llround(static_cast<double>(cache_bytes) / static_cast<double>(model.per_node_bytes()));
}

double speedup(double t_base, double t_accel) {
    if (!(t_base > 0.0) || !(t_accel > 0.0)) throw ParameterError("speedup needs positive times");
    return t_base / t_accel;
}

std::vector<TimingReport> benchmark_time_loop(const SolveConfig& config, const NodeSet& nodes,
                                              const ShapeStore& shapes, const std::vector<int>& thread_counts,
                                              int repeats) {
    if (repeats < 1) throw ParameterError("repeats must be at least 1");
    if (thread_counts.empty()) throw ParameterError("at least one thread count is required");
    std::vector<TimingReport> reports;
    for (int threads : thread_counts) {
        if (threads < 1) throw ParameterError("thread counts must be positive");
        SolveConfig run = config;
        run.mode = RunMode::fixed_steps;
        run.threads = threads;
        TimingReport report;
        report.N = static_cast<std::int64_t>(nodes.size());
        report.n = config.n;
        report.m = config.m;
        report.steps = config.steps;
        report.threads = threads;
        for (int k = 0; k < repeats; ++k) {
            SolveReport result = run_time_loop(run, nodes, shapes);
            if (k == 0 || result.wall_time_s < report.loop_seconds) {
                report.loop_seconds = result.wall_time_s;
                report.field = std::move(result.field);
            }
        }
        if (report.steps > 0 && shapes.rows() > 0) {
            report.ns_per_step_node =
                1e9 * report.loop_seconds / (static_cast<double>(report.steps) * static_cast<double>(shapes.rows()));
        }
        if (!reports.empty() && report.field != reports.front().field) {
            throw std::logic_error("time-loop result depends on the thread count");
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<TimingReport> benchmark_time_loop(const SolveConfig& config, const std::vector<int>& thread_counts,
                                              int repeats) {
    const Problem problem = build_problem(config);
    return benchmark_time_loop(config, problem.nodes, problem.shapes, thread_counts, repeats);
}

}  // namespace rbffd
