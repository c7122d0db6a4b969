#include "rbffd/rbf_weights.hpp"

#include <sstream>

#include "rbffd/parallel.hpp"

namespace rbffd {

ShapeStore::ShapeStore(int m, int n, std::vector<Index> interior, std::vector<Index> neighbors,
                       WeightMatrix weights)
    : m_(m), n_(n), interior_(std::move(interior)), neighbors_(std::move(neighbors)), weights_(std::move(weights)) {
    const auto rows = interior_.size();
    if (neighbors_.size() != rows * static_cast<std::size_t>(n_) ||
        static_cast<std::size_t>(weights_.rows()) != rows || weights_.cols() != n_) {
        throw ParameterError("inconsistent ShapeStore dimensions");
    }
}

Eigen::VectorXd ShapeStore::apply(const Eigen::VectorXd& field) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows()));
    for (std::size_t r = 0; r < rows(); ++r) {
        const auto idx = neighbors(r);
        const auto w = weights(r);
        double sum = 0.0;
        for (int j = 0; j < n_; ++j) sum += w[j] * field[idx[j]];
        out[static_cast<Eigen::Index>(r)] = sum;
    }
    return out;
}

ShapeStore assemble_shapes(const NodeSet& nodes, const StencilSet& stencils, int m, int threads) {
    if (stencils.node_count() != nodes.size()) {
        throw ParameterError("stencils were not built over this node set");
    }
    const int n = stencils.support_size();
    const int required = MonomialBasis(m).size();
    if (n < required) {
        throw ParameterError("support size n = " + std::to_string(n) + " is below binomial(m + 2, 2) = " +
                             std::to_string(required) + " for m = " + std::to_string(m));
    }

    std::vector<Index> interior;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes.is_boundary(i)) interior.push_back(static_cast<Index>(i));
    }
    std::vector<Index> neighbors;
    neighbors.reserve(interior.size() * static_cast<std::size_t>(n));
    for (Index i : interior) {
        const auto row = stencils[static_cast<std::size_t>(i)];
        neighbors.insert(neighbors.end(), row.begin(), row.end());
    }

    ShapeStore::WeightMatrix weights(static_cast<Eigen::Index>(interior.size()), n);
    parallel_for(interior.size(), 64, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<Point2> support(static_cast<std::size_t>(n));
        for (std::size_t r = begin; r < end; ++r) {
            const Index node = interior[r];
            for (int j = 0; j < n; ++j) support[j] = nodes.positions[neighbors[r * n + j]];
            try {
                weights.row(static_cast<Eigen::Index>(r)) =
                    compute_laplacian_weights<double>(nodes.positions[node], support, m).transpose();
            } catch (const DegenerateStencilError& e) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "degenerate stencil at node " << node << " (" << nodes.positions[node].x() << ", "
                    << nodes.positions[node].y() << "): " << e.what();
                throw DegenerateStencilError(msg.str(), node);
            }
        }
    });
    return ShapeStore(m, n, std::move(interior), std::move(neighbors), std::move(weights));
}

}  // namespace rbffd
