#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbffd/geometry.hpp"
#include "rbffd/neighborhoods.hpp"
#include "rbffd/perf_model.hpp"
#include "rbffd/rbf_weights.hpp"
#include "rbffd/solver.hpp"

namespace rbffd::io {

/// A header plus rows of scalar cells, written either as CSV or as a JSON
/// array of objects. Null cells become empty CSV fields.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<nlohmann::json>> rows;

    void write_csv(std::ostream& out) const;
    nlohmann::json to_json() const;
};

void write_nodes_csv(std::ostream& out, const NodeSet& nodes);
NodeSet read_nodes_csv(std::istream& in);

void write_stencils_csv(std::ostream& out, const StencilSet& stencils);
void write_shapes_csv(std::ostream& out, const ShapeStore& shapes);

/// `x,y,kind,u,exact,abs_error`, one row per node.
void write_solution_csv(std::ostream& out, const NodeSet& nodes, const ScalarField& field);

nlohmann::json config_to_json(const SolveConfig& config);
nlohmann::json report_to_json(const SolveReport& report);

Table benchmark_table(const std::vector<TimingReport>& reports);
Table memory_model_table(const std::vector<int>& support_sizes, std::int64_t cache_bytes);

const char* kind_name(NodeKind kind);

}  // namespace rbffd::io
