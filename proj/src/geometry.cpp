#include "rbffd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "rbffd/errors.hpp"

namespace rbffd {

namespace {

constexpr double kAcceptFactor = 0.8;
constexpr int kCandidatesPerNode = 10;

// Uniform bucket grid over [-1 - r, 1 + r]^2 with cell size r, so every
// point within distance r of a query lives in the surrounding 3x3 cells.
class ProximityGrid {
public:
    explicit ProximityGrid(double radius)
        : radius_(radius),
          origin_(-1.0 - radius),
          cells_(static_cast<int>(std::ceil((2.0 + 2.0 * radius) / radius)) + 1),
          buckets_(static_cast<std::size_t>(cells_) * cells_) {}

    void insert(const Point2& p, Index id) { buckets_[cell_of(p)].push_back(id); }

    bool is_free(const Point2& p, const std::vector<Point2>& points) const {
        const int cx = coord(p.x());
        const int cy = coord(p.y());
        const double r2 = radius_ * radius_;
        for (int iy = std::max(cy - 1, 0); iy <= std::min(cy + 1, cells_ - 1); ++iy) {
            for (int ix = std::max(cx - 1, 0); ix <= std::min(cx + 1, cells_ - 1); ++ix) {
                for (Index id : buckets_[static_cast<std::size_t>(iy) * cells_ + ix]) {
                    if ((points[id] - p).squaredNorm() < r2) return false;
                }
            }
        }
        return true;
    }

private:
    int coord(double v) const {
        return std::clamp(static_cast<int>((v - origin_) / radius_), 0, cells_ - 1);
    }
    std::size_t cell_of(const Point2& p) const {
        return static_cast<std::size_t>(coord(p.y())) * cells_ + coord(p.x());
    }

    double radius_;
    double origin_;
    int cells_;
    std::vector<std::vector<Index>> buckets_;
};

void check_spacing(double h) {
    if (!(h > 0.0 && h < 0.5)) {
        throw ParameterError("node spacing h must satisfy 0 < h < 0.5, got " + std::to_string(h));
    }
}

}  // namespace

std::size_t NodeSet::interior_count() const {
    return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), NodeKind::interior));
}

long node_count_for_spacing(double h) {
    check_spacing(h);
    const double pi = std::numbers::pi;
    return std::lround(pi / (h * h) + 2.0 * pi / h);
}

NodeSet generate_unit_disk_nodes(double h, std::uint64_t seed) {
    check_spacing(h);
    const double pi = std::numbers::pi;

    NodeSet nodes;
    nodes.h = h;
    const long boundary = std::lround(2.0 * pi / h);
    nodes.positions.reserve(static_cast<std::size_t>(node_count_for_spacing(h)));
    for (long k = 0; k < boundary; ++k) {
        const double angle = 2.0 * pi * static_cast<double>(k) / static_cast<double>(boundary);
        nodes.positions.emplace_back(std::cos(angle), std::sin(angle));
        nodes.kind.push_back(NodeKind::boundary);
    }

    const double accept = kAcceptFactor * h;
    ProximityGrid grid(accept);
    std::deque<Index> front;
    for (Index i = 0; i < static_cast<Index>(boundary); ++i) {
        grid.insert(nodes.positions[i], i);
        front.push_back(i);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
    while (!front.empty()) {
        const Point2 source = nodes.positions[front.front()];
        front.pop_front();
        const double offset = phase(rng);
        for (int k = 0; k < kCandidatesPerNode; ++k) {
            const double angle = offset + 2.0 * pi * k / kCandidatesPerNode;
            const Point2 candidate = source + h * Point2(std::cos(angle), std::sin(angle));
            if (candidate.norm() >= 1.0 - kBoundaryEps) continue;
            if (!grid.is_free(candidate, nodes.positions)) continue;
            const auto id = static_cast<Index>(nodes.positions.size());
            nodes.positions.push_back(candidate);
            nodes.kind.push_back(NodeKind::interior);
            grid.insert(candidate, id);
            front.push_back(id);
        }
    }
    return nodes;
}

NodeSet generate_unit_disk_nodes_for_count(long target_nodes, std::uint64_t seed) {
    if (target_nodes < 50) {
        throw ParameterError("target node count must be at least 50, got " +
                             std::to_string(target_nodes));
    }
    // Start from the area/perimeter estimate, then rescale h by the observed
    // density a few times. Node count scales roughly like 1/h^2.
    const double pi = std::numbers::pi;
    double h = (pi + std::sqrt(pi * pi + 4.0 * pi * static_cast<double>(target_nodes))) /
               (2.0 * static_cast<double>(target_nodes));
    NodeSet best;
    long best_gap = -1;
    for (int iter = 0; iter < 8; ++iter) {
        h = std::clamp(h, 1e-4, 0.499);
        NodeSet nodes = generate_unit_disk_nodes(h, seed);
        const long count = static_cast<long>(nodes.size());
        const long gap = std::abs(count - target_nodes);
        if (best_gap < 0 || gap < best_gap) {
            best_gap = gap;
            best = std::move(nodes);
        }
        if (gap == 0) break;
        h *= std::sqrt(static_cast<double>(count) / static_cast<double>(target_nodes));
    }
    return best;
}

Eigen::VectorXd sample_solution(const NodeSet& nodes) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) out[static_cast<Eigen::Index>(i)] = closed_form_solution(nodes.positions[i]);
    return out;
}

Eigen::VectorXd sample_forcing(const NodeSet& nodes) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) out[static_cast<Eigen::Index>(i)] = forcing(nodes.positions[i]);
    return out;
}

}  // namespace rbffd
