#include "rbffd/neighborhoods.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>

#include "rbffd/errors.hpp"

namespace rbffd {

namespace {

using Candidate = std::pair<double, Index>;  // (squared distance, index)

double box_distance2(const Point2& q, const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
    const Eigen::Vector2d d = (lo - q).cwiseMax(q - hi).cwiseMax(0.0);
    return d.squaredNorm();
}

}  // namespace

StencilSet::StencilSet(int n, std::vector<Index> neighbors) : n_(n), neighbors_(std::move(neighbors)) {
    if (n_ < 1 || neighbors_.size() % static_cast<std::size_t>(n_) != 0) {
        throw ParameterError("stencil array size is not a multiple of the support size");
    }
}

KdTree::KdTree(std::span<const Point2> points, int leaf_size) : points_(points), order_(points.size()) {
    std::iota(order_.begin(), order_.end(), Index{0});
    if (!order_.empty()) build(0, static_cast<Index>(order_.size()), std::max(leaf_size, 1));
}

Index KdTree::build(Index begin, Index end, int leaf_size) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.lo = points_[order_[begin]];
    node.hi = node.lo;
    for (Index i = begin + 1; i < end; ++i) {
        node.lo = node.lo.cwiseMin(points_[order_[i]]);
        node.hi = node.hi.cwiseMax(points_[order_[i]]);
    }
    const auto id = static_cast<Index>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= leaf_size) return id;

    Eigen::Index axis = 0;
    (node.hi - node.lo).maxCoeff(&axis);
    const Index mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](Index a, Index b) { return points_[a][axis] < points_[b][axis]; });
    const Index left = build(begin, mid, leaf_size);
    const Index right = build(mid, end, leaf_size);
    nodes_[id].axis = static_cast<int>(axis);
    nodes_[id].split = points_[order_[mid]][axis];
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

std::vector<Index> KdTree::nearest(const Point2& query, int k) const {
    if (k < 0 || static_cast<std::size_t>(k) > points_.size()) {
        throw ParameterError("requested more neighbours than points");
    }
    std::priority_queue<Candidate> heap;  // max-heap on (d2, index)
    if (k == 0) return {};

    auto visit = [&](auto&& self, Index id) -> void {
        const Node& node = nodes_[id];
        if (static_cast<int>(heap.size()) == k && box_distance2(query, node.lo, node.hi) > heap.top().first) {
            return;
        }
        if (node.axis < 0) {
            for (Index i = node.begin; i < node.end; ++i) {
                const Index p = order_[i];
                const double dx = points_[p].x() - query.x();
                const double dy = points_[p].y() - query.y();
                const Candidate c{dx * dx + dy * dy, p};
                if (static_cast<int>(heap.size()) < k) {
                    heap.push(c);
                } else if (c < heap.top()) {
                    heap.pop();
                    heap.push(c);
                }
            }
            return;
        }
        const bool go_left = query[node.axis] < node.split;
        self(self, go_left ? node.left : node.right);
        self(self, go_left ? node.right : node.left);
    };
    visit(visit, 0);

    std::vector<Index> out(static_cast<std::size_t>(k));
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
        *it = heap.top().second;
        heap.pop();
    }
    return out;
}

StencilSet build_stencils(const NodeSet& nodes, int n) {
    if (n < 1 || static_cast<std::size_t>(n) > nodes.size()) {
        throw ParameterError("support size n must satisfy 1 <= n <= N (n = " + std::to_string(n) +
                             ", N = " + std::to_string(nodes.size()) + ")");
    }
    const KdTree tree(nodes.positions);
    std::vector<Index> flat;
    flat.reserve(nodes.size() * static_cast<std::size_t>(n));
    for (const Point2& p : nodes.positions) {
        const auto row = tree.nearest(p, n);
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return StencilSet(n, std::move(flat));
}

int recommended_support_size(int m, int d, int safety) {
    if (m < 0 || d < 1) throw ParameterError("recommended_support_size needs m >= 0 and d >= 1");
    if (safety != 1 && safety != 2) throw ParameterError("support safety factor must be 1 or 2");
    // binomial(m + d, m) = binomial(m + d, d); exact in integer arithmetic.
    long long binom = 1;
    for (int i = 1; i <= d; ++i) binom = binom * (m + i) / i;
    return safety * static_cast<int>(binom);
}

double mean_nearest_neighbor_distance(const NodeSet& nodes) {
    if (nodes.size() < 2) return 0.0;
    const KdTree tree(nodes.positions);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto pair = tree.nearest(nodes.positions[i], 2);
        // Self is at distance zero; with duplicated points either entry may be self.
        const Index other = pair[0] == static_cast<Index>(i) ? pair[1] : pair[0];
        sum += (nodes.positions[other] - nodes.positions[i]).norm();
    }
    return sum / static_cast<double>(nodes.size());
}

}  // namespace rbffd
