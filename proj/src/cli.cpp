#include "rbffd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rbffd/errors.hpp"
#include "rbffd/io.hpp"
#include "rbffd/neighborhoods.hpp"
#include "rbffd/perf_model.hpp"
#include "rbffd/solver.hpp"

namespace rbffd::cli {

namespace {

namespace fs = std::filesystem;

const std::vector<int> kPaperSupportSizes{12, 15, 20, 30, 45, 60};

// Numeric flags are parsed as doubles so that counts accept scientific
// notation ("--nodes 1e5"); they are converted back here.
long as_count(double value, const std::string& name) {
    if (!std::isfinite(value) || value != std::floor(value) ||
        std::abs(value) > static_cast<double>(std::numeric_limits<long>::max() / 2)) {
        throw ParameterError(name + " must be an integer, got " + std::to_string(value));
    }
    return static_cast<long>(value);
}

std::vector<long> as_counts(const std::vector<double>& values, const std::string& name) {
    std::vector<long> out;
    for (double v : values) out.push_back(as_count(v, name));
    return out;
}

int default_threads() {
    if (const char* env = std::getenv("RBFFD_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value >= 1) return static_cast<int>(value);
    }
    return 1;
}

struct Options {
    double m = 2;
    double n = 15;
    double nodes = 1027;
    double h = 0.0;
    double dt = 1e-6;
    double steps = 100000;
    bool steady = false;
    double tol = 1e-9;
    double max_steps = 1e7;
    double seed = 1;
    double threads = 1;
    double chunk = 32;
    double repeats = 1;
    double cache_bytes = static_cast<double>(MemoryModel::default_cache_bytes);
    std::vector<double> node_list;
    std::vector<double> support_list;
    std::vector<double> thread_list;
    std::string out_dir = ".";
    std::string format = "csv";
};

bool given(const CLI::App& app, const std::string& name) {
    const CLI::Option* option = app.get_option_no_throw(name);
    return option != nullptr && option->count() > 0;
}

SolveConfig make_config(const Options& o, const CLI::App& app) {
    SolveConfig config;
    config.m = static_cast<int>(as_count(o.m, "--m"));
    config.n = static_cast<int>(as_count(o.n, "--n"));
    if (given(app, "--h")) {
        config.h = o.h;
        config.target_nodes = 0;
    } else {
        config.target_nodes = as_count(o.nodes, "--nodes");
    }
    config.dt = o.dt;
    config.steps = as_count(o.steps, "--steps");
    config.mode = o.steady ? RunMode::steady : RunMode::fixed_steps;
    config.tolerance = o.tol;
    config.max_steps = as_count(o.max_steps, "--max-steps");
    const long seed = as_count(o.seed, "--seed");
    if (seed < 0) throw ParameterError("--seed must be nonnegative");
    config.seed = static_cast<std::uint64_t>(seed);
    config.threads = static_cast<int>(as_count(o.threads, "--threads"));
    if (config.threads < 1) throw ParameterError("--threads must be positive");
    const long chunk = as_count(o.chunk, "--chunk");
    if (chunk < 1) throw ParameterError("--chunk must be positive");
    config.chunk = static_cast<std::size_t>(chunk);
    return config;
}

// Steady runs without an explicit --dt use half the Gershgorin bound.
void resolve_steady_dt(SolveConfig& config, const CLI::App& app, const ShapeStore& shapes) {
    if (config.mode == RunMode::steady && !given(app, "--dt")) config.dt = 0.5 * stability_bound(shapes);
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw ParameterError("cannot create output directory " + dir + ": " + ec.message());
    return path;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream file(path);
    if (!file) throw ParameterError("cannot write " + path.string());
    return file;
}

void write_table(const io::Table& table, const fs::path& dir, const std::string& stem, const std::string& format) {
    if (format == "json") {
        open_output(dir / (stem + ".json")) << table.to_json().dump(2) << '\n';
    } else {
        auto file = open_output(dir / (stem + ".csv"));
        table.write_csv(file);
    }
}

void print_table(const io::Table& table, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << table.to_json().dump(2) << '\n';
    } else {
        table.write_csv(out);
    }
}

void check_format(const std::string& format) {
    if (format != "csv" && format != "json") throw ParameterError("--format must be csv or json");
}

void add_problem_options(CLI::App& cmd, Options& o) {
    cmd.add_option("--m", o.m, "highest augmented monomial degree");
    cmd.add_option("--n", o.n, "support size");
    cmd.add_option("--h", o.h, "target node spacing (overrides --nodes)");
    cmd.add_option("--dt", o.dt, "time step; steady runs default to half the stability bound");
    cmd.add_option("--seed", o.seed, "node generation seed");
    cmd.add_option("--threads", o.threads, "worker threads (default $RBFFD_THREADS or 1)");
    cmd.add_option("--chunk", o.chunk, "rows per scheduling chunk");
    cmd.add_option("--out", o.out_dir, "output directory");
    cmd.add_option("--format", o.format, "table output format: csv or json");
}

int cmd_solve(const Options& o, const CLI::App& app, std::ostream& out) {
    check_format(o.format);
    SolveConfig config = make_config(o, app);
    config.validate();
    const Problem problem = build_problem(config);
    resolve_steady_dt(config, app, problem.shapes);
    const SolveReport report = run_time_loop(config, problem.nodes, problem.shapes);

    const fs::path dir = prepare_out_dir(o.out_dir);
    {
        auto file = open_output(dir / "solution.csv");
        io::write_solution_csv(file, problem.nodes, report.field);
    }
    nlohmann::json json = io::report_to_json(report);
    json["N"] = problem.nodes.size();
    json["N_interior"] = problem.nodes.interior_count();
    open_output(dir / "report.json") << json.dump(2) << '\n';

    if (o.format == "json") {
        out << json.dump(2) << '\n';
    } else {
        out << std::setprecision(6) << "N=" << problem.nodes.size() << " steps=" << report.steps
            << " wall_time_s=" << report.wall_time_s << " linf=" << report.linf << " l2=" << report.l2
            << " residual=" << report.residual << '\n';
    }
    return kOk;
}

int cmd_converge(const Options& o, const CLI::App& app, std::ostream& out, std::ostream& err) {
    check_format(o.format);
    const std::vector<long> sizes = as_counts(o.node_list, "--nodes");
    if (sizes.size() < 3) throw ParameterError("convergence study needs at least 3 node counts");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 50) throw ParameterError("every refinement node count must be at least 50");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw ParameterError("refinement node counts must be strictly increasing");
    }

    io::Table table{{"N", "h", "linf", "l2"}, {}};
    std::vector<double> hs, errors;
    for (long target : sizes) {
        SolveConfig config = make_config(o, app);
        config.target_nodes = target;
        config.mode = RunMode::steady;
        config.validate();
        const Problem problem = build_problem(config);
        resolve_steady_dt(config, app, problem.shapes);
        const SolveReport report = run_time_loop(config, problem.nodes, problem.shapes);
        const double h = mean_nearest_neighbor_distance(problem.nodes);
        table.rows.push_back({static_cast<long>(problem.nodes.size()), h, report.linf, report.l2});
        hs.push_back(h);
        errors.push_back(report.linf);
    }
    write_table(table, prepare_out_dir(o.out_dir), "convergence", o.format);
    print_table(table, o.format, out);

    const double order = fit_convergence_order(hs, errors);
    if (std::isnan(order)) err << "warning: convergence order undefined (non-positive errors)\n";
    out << "estimated order: " << order << '\n';
    return kOk;
}

int cmd_bench(const Options& o, const CLI::App& app, std::ostream& out) {
    check_format(o.format);
    const std::vector<long> sizes = as_counts(o.node_list, "--nodes");
    if (sizes.empty()) throw ParameterError("benchmark needs at least one node count");
    std::vector<long> supports = as_counts(o.support_list, "--n");
    if (supports.empty()) supports = {15};
    std::vector<int> threads;
    for (long t : as_counts(o.thread_list, "--threads")) threads.push_back(static_cast<int>(t));
    if (threads.empty()) threads = {default_threads()};
    const int repeats = static_cast<int>(as_count(o.repeats, "--repeats"));

    std::vector<TimingReport> all;
    for (long target : sizes) {
        for (long n : supports) {
            SolveConfig config = make_config(o, app);
            config.target_nodes = target;
            config.n = static_cast<int>(n);
            config.mode = RunMode::fixed_steps;
            config.validate();
            const Problem problem = build_problem(config);
            auto reports = benchmark_time_loop(config, problem.nodes, problem.shapes, threads, repeats);
            for (auto& r : reports) all.push_back(std::move(r));
        }
    }
    const io::Table table = io::benchmark_table(all);
    write_table(table, prepare_out_dir(o.out_dir), "benchmark", o.format);
    print_table(table, o.format, out);
    return kOk;
}

int cmd_memory_model(const Options& o, const CLI::App& app, std::ostream& out) {
    check_format(o.format);
    const long cache = as_count(o.cache_bytes, "--cache-bytes");
    if (cache <= 0) throw ParameterError("--cache-bytes must be positive");
    std::vector<int> supports = kPaperSupportSizes;
    for (long n : as_counts(o.support_list, "--n")) {
        if (n < 1) throw ParameterError("--n must be positive");
        if (std::find(supports.begin(), supports.end(), n) == supports.end()) supports.push_back(static_cast<int>(n));
    }
    const io::Table table = io::memory_model_table(supports, cache);
    if (given(app, "--out")) write_table(table, prepare_out_dir(o.out_dir), "memory_model", o.format);
    print_table(table, o.format, out);
    return kOk;
}

}  // namespace

double fit_convergence_order(std::span<const double> h, std::span<const double> error) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (h.size() != error.size()) return nan;
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0) || !(error[i] > 0.0) || !std::isfinite(error[i])) return nan;
        points.emplace_back(h[i], error[i]);
    }
    if (points.size() >= 4) {
        std::sort(points.begin(), points.end());
        points.resize(3);
    }
    if (points.size() < 2) return nan;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [hh, e] : points) {
        const double x = std::log(hh), y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(points.size());
    const double denom = k * sxx - sx * sx;
    if (denom == 0.0) return nan;
    return (k * sxy - sx * sy) / denom;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Meshless RBF-FD Poisson solver on the unit disk"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);
    Options o;
    o.threads = default_threads();

    auto* solve = app.add_subcommand("solve", "solve the Poisson problem by explicit pseudo-time marching");
    add_problem_options(*solve, o);
    solve->add_option("--nodes", o.nodes, "target node count");
    solve->add_option("--steps", o.steps, "number of time steps");
    solve->add_flag("--steady", o.steady, "iterate until the residual drops below --tol");
    solve->add_option("--tol", o.tol, "steady-state residual tolerance");
    solve->add_option("--max-steps", o.max_steps, "step cap for steady runs");

    auto* converge = app.add_subcommand("converge", "run-to-steady refinement study");
    add_problem_options(*converge, o);
    converge->add_option("--nodes", o.node_list, "strictly increasing target node counts")->required();
    converge->add_option("--tol", o.tol, "steady-state residual tolerance");
    converge->add_option("--max-steps", o.max_steps, "step cap per run");

    auto* bench = app.add_subcommand("bench", "time the explicit loop over node counts, supports and threads");
    bench->add_option("--m", o.m, "highest augmented monomial degree");
    bench->add_option("--nodes", o.node_list, "target node counts");
    bench->add_option("--n", o.support_list, "support sizes");
    bench->add_option("--threads", o.thread_list, "thread counts (default $RBFFD_THREADS or 1)");
    bench->add_option("--steps", o.steps, "time steps per run")->default_val(100);
    bench->add_option("--dt", o.dt, "time step");
    bench->add_option("--repeats", o.repeats, "runs per configuration; the minimum time is kept");
    bench->add_option("--seed", o.seed, "node generation seed");
    bench->add_option("--chunk", o.chunk, "rows per scheduling chunk");
    bench->add_option("--out", o.out_dir, "output directory");
    bench->add_option("--format", o.format, "output format: csv or json");

    auto* memory = app.add_subcommand("memory-model", "cache-peak estimate of the time-loop working set");
    memory->add_option("--cache-bytes", o.cache_bytes, "cache capacity in bytes");
    memory->add_option("--n", o.support_list, "extra support sizes");
    memory->add_option("--out", o.out_dir, "also write memory_model.<format> here");
    memory->add_option("--format", o.format, "output format: csv or json");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParameterError;
    }

    try {
        if (*solve) return cmd_solve(o, *solve, out);
        if (*converge) return cmd_converge(o, *converge, out, err);
        if (*bench) return cmd_bench(o, *bench, out);
        if (*memory) return cmd_memory_model(o, *memory, out);
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return kParameterError;
    } catch (const DegenerateStencilError& e) {
        err << "error: " << e.what() << '\n';
        return kDegenerateStencil;
    } catch (const InstabilityError& e) {
        err << "instability: " << e.what() << '\n';
        return kInstability;
    } catch (const TimeoutError& e) {
        err << "timeout: " << e.what() << '\n';
        return kTimeout;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

}  // namespace rbffd::cli
