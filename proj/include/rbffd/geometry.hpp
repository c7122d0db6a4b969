#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace rbffd {

using Point2 = Eigen::Vector2d;
using Index = std::int32_t;

enum class NodeKind : std::uint8_t { interior, boundary };

/// Tolerance used to classify nodes on the unit circle.
inline constexpr double kBoundaryEps = 1e-12;

/// Scattered nodes on the closed unit disk.
///
/// Boundary nodes come first (counter-clockwise from angle 0), followed by
/// interior nodes in the order the fill procedure accepted them.
struct NodeSet {
    std::vector<Point2> positions;
    std::vector<NodeKind> kind;
    double h = 0.0;

    std::size_t size() const { return positions.size(); }
    std::size_t interior_count() const;
    std::size_t boundary_count() const { return size() - interior_count(); }
    bool is_boundary(std::size_t i) const { return kind[i] == NodeKind::boundary; }

    bool operator==(const NodeSet&) const = default;
};

/// Equidistant boundary ring plus advancing-front interior fill with target
/// spacing `h`. Reproducible from `(h, seed)`. Requires 0 < h < 0.5.
NodeSet generate_unit_disk_nodes(double h, std::uint64_t seed);

/// Picks the spacing whose generated node set is closest to `target_nodes`
/// and returns that set.
NodeSet generate_unit_disk_nodes_for_count(long target_nodes, std::uint64_t seed);

/// Area plus perimeter estimate round(pi/h^2 + 2 pi/h).
long node_count_for_spacing(double h);

template <typename Scalar>
Scalar closed_form_solution(const Eigen::Matrix<Scalar, 2, 1>& p) {
    using std::sin;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    return sin(pi * p.x()) * sin(pi * p.y());
}

/// Right-hand side of the Poisson problem, 2 pi^2 sin(pi x) sin(pi y).
template <typename Scalar>
Scalar forcing(const Eigen::Matrix<Scalar, 2, 1>& p) {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    return 2 * pi * pi * closed_form_solution(p);
}

Eigen::VectorXd sample_solution(const NodeSet& nodes);
Eigen::VectorXd sample_forcing(const NodeSet& nodes);

}  // namespace rbffd
