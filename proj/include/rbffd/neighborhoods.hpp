#pragma once

#include <span>
#include <vector>

#include "rbffd/geometry.hpp"

namespace rbffd {

/// Per-node supports: the `n` nearest nodes of every node, self first,
/// sorted by distance with ties broken by lower index.
class StencilSet {
public:
    StencilSet() = default;
    StencilSet(int n, std::vector<Index> neighbors);

    int support_size() const { return n_; }
    std::size_t node_count() const { return n_ == 0 ? 0 : neighbors_.size() / static_cast<std::size_t>(n_); }

    std::span<const Index> operator[](std::size_t node) const {
        return {neighbors_.data() + node * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    const std::vector<Index>& flat() const { return neighbors_; }

    bool operator==(const StencilSet&) const = default;

private:
    int n_ = 0;
    std::vector<Index> neighbors_;
};

/// Static 2D kd-tree with median splits for exact k-nearest-neighbour queries.
class KdTree {
public:
    explicit KdTree(std::span<const Point2> points, int leaf_size = 8);

    /// The `k` nearest points to `query`, ordered by (squared distance, index).
    std::vector<Index> nearest(const Point2& query, int k) const;

private:
    struct Node {
        double split = 0.0;
        int axis = -1;  // -1 marks a leaf
        Index begin = 0, end = 0;
        Index left = -1, right = -1;
        Eigen::Vector2d lo, hi;
    };

    Index build(Index begin, Index end, int leaf_size);

    std::span<const Point2> points_;
    std::vector<Index> order_;
    std::vector<Node> nodes_;
};

StencilSet build_stencils(const NodeSet& nodes, int n);

/// safety * binomial(m + d, m); `safety` is 1 or 2.
int recommended_support_size(int m, int d, int safety = 1);

/// Mean distance from each node to its nearest other node.
double mean_nearest_neighbor_distance(const NodeSet& nodes);

}  // namespace rbffd
