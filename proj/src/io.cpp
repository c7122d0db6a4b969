#include "rbffd/io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "rbffd/errors.hpp"

namespace rbffd::io {

namespace {

std::string cell_text(const nlohmann::json& cell) {
    if (cell.is_null()) return {};
    if (cell.is_string()) return cell.get<std::string>();
    return cell.dump();
}

std::ostream& full_precision(std::ostream& out) {
    return out << std::setprecision(17);
}

}  // namespace

const char* kind_name(NodeKind kind) {
    return kind == NodeKind::boundary ? "boundary" : "interior";
}

void Table::write_csv(std::ostream& out) const {
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
        out << '\n';
    }
}

nlohmann::json Table::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json object = nlohmann::json::object();
        for (std::size_t c = 0; c < header.size() && c < row.size(); ++c) object[header[c]] = row[c];
        out.push_back(std::move(object));
    }
    return out;
}

void write_nodes_csv(std::ostream& out, const NodeSet& nodes) {
    full_precision(out) << "x,y,kind\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out << nodes.positions[i].x() << ',' << nodes.positions[i].y() << ',' << kind_name(nodes.kind[i]) << '\n';
    }
}

NodeSet read_nodes_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "x,y,kind") throw ParameterError("node CSV must start with header x,y,kind");
    NodeSet nodes;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string x, y, kind;
        if (!std::getline(row, x, ',') || !std::getline(row, y, ',') || !std::getline(row, kind)) {
            throw ParameterError("malformed node CSV row: " + line);
        }
        if (kind != "interior" && kind != "boundary") throw ParameterError("unknown node kind: " + kind);
        nodes.positions.emplace_back(std::stod(x), std::stod(y));
        nodes.kind.push_back(kind == "boundary" ? NodeKind::boundary : NodeKind::interior);
    }
    return nodes;
}

void write_stencils_csv(std::ostream& out, const StencilSet& stencils) {
    out << "node_index";
    for (int j = 0; j < stencils.support_size(); ++j) out << ",neighbor_" << j;
    out << '\n';
    for (std::size_t i = 0; i < stencils.node_count(); ++i) {
        out << i;
        for (Index k : stencils[i]) out << ',' << k;
        out << '\n';
    }
}

void write_shapes_csv(std::ostream& out, const ShapeStore& shapes) {
    full_precision(out) << "node_index";
    for (int j = 0; j < shapes.support_size(); ++j) out << ",w_" << j;
    out << '\n';
    for (std::size_t r = 0; r < shapes.rows(); ++r) {
        out << shapes.interior_nodes()[r];
        for (double w : shapes.weights(r)) out << ',' << w;
        out << '\n';
    }
}

void write_solution_csv(std::ostream& out, const NodeSet& nodes, const ScalarField& field) {
    if (static_cast<std::size_t>(field.size()) != nodes.size()) throw ParameterError("field length differs from N");
    full_precision(out) << "x,y,kind,u,exact,abs_error\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double u = field[static_cast<Eigen::Index>(i)];
        const double exact = closed_form_solution(nodes.positions[i]);
        out << nodes.positions[i].x() << ',' << nodes.positions[i].y() << ',' << kind_name(nodes.kind[i]) << ','
            << u << ',' << exact << ',' << std::abs(u - exact) << '\n';
    }
}

nlohmann::json config_to_json(const SolveConfig& config) {
    nlohmann::json j;
    j["m"] = config.m;
    j["n"] = config.n;
    if (config.target_nodes != 0) {
        j["target_nodes"] = config.target_nodes;
    } else {
        j["h"] = config.h;
    }
    j["dt"] = config.dt;
    j["mode"] = config.mode == RunMode::steady ? "steady" : "fixed_steps";
    if (config.mode == RunMode::steady) {
        j["tolerance"] = config.tolerance;
        j["max_steps"] = config.max_steps;
    } else {
        j["steps"] = config.steps;
    }
    j["seed"] = config.seed;
    j["threads"] = config.threads;
    j["chunk"] = config.chunk;
    j["initial_condition"] = "zero interior, exact Dirichlet boundary";
    return j;
}

nlohmann::json report_to_json(const SolveReport& report) {
    return {
        {"steps", report.steps},
        {"wall_time_s", report.wall_time_s},
        {"linf", report.linf},
        {"l2", report.l2},
        {"residual", report.residual},
        {"config", config_to_json(report.config)},
    };
}

Table benchmark_table(const std::vector<TimingReport>& reports) {
    Table table{{"N", "n", "m", "threads", "steps", "loop_seconds", "ns_per_step_node"}, {}};
    for (const auto& r : reports) {
        table.rows.push_back({r.N, r.n, r.m, r.threads, r.steps, r.loop_seconds,
                              r.ns_per_step_node ? nlohmann::json(*r.ns_per_step_node) : nlohmann::json()});
    }
    return table;
}

Table memory_model_table(const std::vector<int>& support_sizes, std::int64_t cache_bytes) {
    Table table{{"n", "per_node_bytes", "cache_peak_N"}, {}};
    for (int n : support_sizes) {
        const MemoryModel model{n, cache_bytes};
        table.rows.push_back({n, model.per_node_bytes(), model.peak_nodes()});
    }
    return table;
}

}  // namespace rbffd::io
