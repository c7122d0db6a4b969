#include "rbffd/solver.hpp"

#include <algorithm>
#include <barrier>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "rbffd/errors.hpp"
#include "rbffd/parallel.hpp"

namespace rbffd {

namespace {

struct RowStats {
    double max_update = 0.0;
    double max_abs = 0.0;
    bool finite = true;

    void merge(const RowStats& other) {
        max_update = std::max(max_update, other.max_update);
        max_abs = std::max(max_abs, other.max_abs);
        finite = finite && other.finite;
    }
};

// Updates interior rows [begin, end). Reads only u1, writes only u2.
RowStats advance_rows(const ShapeStore& shapes, const double* u1, double* u2, const double* f, double dt,
                      std::size_t begin, std::size_t end) {
    RowStats stats;
    const int n = shapes.support_size();
    const Index* interior = shapes.interior_nodes().data();
    for (std::size_t r = begin; r < end; ++r) {
        const Index* idx = shapes.neighbors(r).data();
        const double* w = shapes.weights(r).data();
        double lap = 0.0;
        for (int j = 0; j < n; ++j) lap += w[j] * u1[idx[j]];
        const Index node = interior[r];
        const double next = u1[node] + dt * (f[node] + lap);
        u2[node] = next;
        if (!std::isfinite(next)) {
            stats.finite = false;
            continue;
        }
        stats.max_update = std::max(stats.max_update, std::abs(next - u1[node]));
        stats.max_abs = std::max(stats.max_abs, std::abs(next));
    }
    return stats;
}

std::string instability_message(long step, double max_abs) {
    std::ostringstream msg;
    msg << "explicit iteration became unstable at step " << step << " (max |u| before blow-up " << max_abs
        << "); reduce dt below the stability bound";
    return msg.str();
}

}  // namespace

void SolveConfig::validate() const {
    if (m < 0) throw ParameterError("degree m must be nonnegative");
    const int required = MonomialBasis(m).size();
    if (n < required) {
        throw ParameterError("support size n = " + std::to_string(n) + " is below binomial(m + 2, 2) = " +
                             std::to_string(required));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step dt must be positive");
    if (steps < 0) throw ParameterError("step count must be nonnegative");
    if (mode == RunMode::steady && !(tolerance > 0.0)) throw ParameterError("steady tolerance must be positive");
    if (max_steps < 1) throw ParameterError("step cap must be positive");
    if (target_nodes == 0 && !(h > 0.0 && h < 0.5)) throw ParameterError("node spacing h must satisfy 0 < h < 0.5");
    if (target_nodes != 0 && target_nodes < 50) throw ParameterError("target node count must be at least 50");
    if (chunk < 1) throw ParameterError("chunk size must be positive");
}

Problem build_problem(const SolveConfig& config) {
    if (config.m < 0) throw ParameterError("degree m must be nonnegative");
    Problem problem;
    problem.nodes = config.target_nodes != 0 ? generate_unit_disk_nodes_for_count(config.target_nodes, config.seed)
                                             : generate_unit_disk_nodes(config.h, config.seed);
    problem.stencils = build_stencils(problem.nodes, config.n);
    problem.shapes = assemble_shapes(problem.nodes, problem.stencils, config.m, resolve_threads(config.threads));
    return problem;
}

ScalarField apply_dirichlet(const NodeSet& nodes, ScalarField field) {
    if (static_cast<std::size_t>(field.size()) != nodes.size()) throw ParameterError("field length differs from N");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes.is_boundary(i)) field[static_cast<Eigen::Index>(i)] = closed_form_solution(nodes.positions[i]);
    }
    return field;
}

ScalarField initial_field(const NodeSet& nodes) {
    return apply_dirichlet(nodes, ScalarField::Zero(static_cast<Eigen::Index>(nodes.size())));
}

ScalarField explicit_step(const ScalarField& u1, const ShapeStore& shapes, const Eigen::VectorXd& forcing,
                          double dt) {
    if (forcing.size() != u1.size()) throw ParameterError("forcing length differs from field length");
    ScalarField u2 = u1;
    const RowStats stats = advance_rows(shapes, u1.data(), u2.data(), forcing.data(), dt, 0, shapes.rows());
    if (!stats.finite) throw InstabilityError(instability_message(1, stats.max_abs), 1, stats.max_abs);
    return u2;
}

SolveReport run_time_loop(const SolveConfig& config, const NodeSet& nodes, const ShapeStore& shapes) {
    config.validate();
    std::size_t covered = 0;
    for (Index i : shapes.interior_nodes()) {
        if (static_cast<std::size_t>(i) >= nodes.size() || nodes.is_boundary(static_cast<std::size_t>(i))) {
            throw ParameterError("shapes do not match the node set");
        }
        ++covered;
    }
    if (covered != nodes.interior_count()) throw ParameterError("shapes do not cover every interior node");
    if (shapes.support_size() != config.n || shapes.degree() != config.m) {
        throw ParameterError("shapes were assembled with a different (m, n) than the configuration");
    }

    SolveReport report;
    report.config = config;
    const Eigen::VectorXd f = sample_forcing(nodes);
    ScalarField a = initial_field(nodes);
    ScalarField b = a;

    const bool steady = config.mode == RunMode::steady;
    const long limit = steady ? config.max_steps : config.steps;
    const std::size_t rows = shapes.rows();
    const std::size_t chunk = config.chunk;
    const std::size_t chunks = (rows + chunk - 1) / chunk;
    const int threads =
        static_cast<int>(std::clamp<std::size_t>(resolve_threads(config.threads), 1, std::max<std::size_t>(chunks, 1)));

    // Shared loop state. The barrier completion runs on one thread while all
    // others wait, so it may freely swap buffers and decide termination.
    struct {
        double* cur;
        double* next;
        long step = 0;
        bool stop = false;
        bool unstable = false;
        double residual = 0.0;
        double max_abs = 0.0;
    } state{a.data(), b.data()};
    std::vector<RowStats> slots(static_cast<std::size_t>(threads));

    auto on_step_done = [&]() noexcept {
        RowStats total;
        for (auto& s : slots) total.merge(s);
        ++state.step;
        state.residual = total.max_update / config.dt;
        if (config.record_residuals) report.residual_history.push_back(state.residual);
        if (!total.finite) {
            state.unstable = true;
            state.stop = true;
            return;
        }
        state.max_abs = total.max_abs;
        std::swap(state.cur, state.next);
        if (state.step >= limit || (steady && state.residual <= config.tolerance)) state.stop = true;
    };
    std::barrier sync(threads, on_step_done);

    auto worker = [&](std::size_t id) {
        while (!state.stop) {
            RowStats local;
            for (std::size_t c = id; c < chunks; c += static_cast<std::size_t>(threads)) {
                local.merge(advance_rows(shapes, state.cur, state.next, f.data(), config.dt, c * chunk,
                                         std::min(rows, (c + 1) * chunk)));
            }
            slots[id] = local;
            sync.arrive_and_wait();
        }
    };

    const auto start = std::chrono::steady_clock::now();
    if (limit > 0) {
        std::vector<std::jthread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(worker, static_cast<std::size_t>(t));
        worker(0);
    }
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (state.unstable) {
        throw InstabilityError(instability_message(state.step, state.max_abs), state.step, state.max_abs);
    }
    if (steady && state.residual > config.tolerance) {
        std::ostringstream msg;
        msg << "run-to-steady did not reach tolerance " << config.tolerance << " within " << limit
            << " steps (last residual " << state.residual << ")";
        throw TimeoutError(msg.str(), state.residual);
    }

    report.field = state.cur == a.data() ? std::move(a) : std::move(b);
    report.steps = state.step;
    report.residual = state.residual;
    const ErrorNorms errors = error_norms(report.field, nodes);
    report.linf = errors.linf;
    report.l2 = errors.l2;
    return report;
}

ErrorNorms error_norms(const ScalarField& field, const NodeSet& nodes) {
    if (static_cast<std::size_t>(field.size()) != nodes.size()) throw ParameterError("field length differs from N");
    if (nodes.size() == 0) return {};
    const Eigen::ArrayXd diff = (field - sample_solution(nodes)).array().abs();
    return {diff.maxCoeff(), std::sqrt(diff.square().mean())};
}

double stability_bound(const ShapeStore& shapes) {
    if (shapes.rows() == 0) throw ParameterError("stability bound needs at least one weight row");
    return 2.0 / shapes.weight_matrix().cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace rbffd
