#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "rbffd/geometry.hpp"
#include "rbffd/rbf_weights.hpp"

namespace oracle {

using rbffd::Index;
using rbffd::Point2;

/// O(N^2) k nearest neighbours ordered by (squared distance, index).
inline std::vector<std::vector<Index>> brute_force_knn(const std::vector<Point2>& points, int k) {
    std::vector<std::vector<Index>> out;
    std::vector<std::pair<double, Index>> all(points.size());
    for (const Point2& q : points) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            const double dx = points[j].x() - q.x();
            const double dy = points[j].y() - q.y();
            all[j] = {dx * dx + dy * dy, static_cast<Index>(j)};
        }
        std::partial_sort(all.begin(), all.begin() + k, all.end());
        std::vector<Index> row;
        for (int i = 0; i < k; ++i) row.push_back(all[static_cast<std::size_t>(i)].second);
        out.push_back(std::move(row));
    }
    return out;
}

inline double min_pairwise_distance(const std::vector<Point2>& points) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) best = std::min(best, (points[i] - points[j]).norm());
    }
    return best;
}

/// Central 5-point finite-difference Laplacian.
inline double fd_laplacian(const std::function<double(const Point2&)>& u, const Point2& p, double step) {
    const Point2 ex(step, 0.0), ey(0.0, step);
    return (u(p + ex) + u(p - ex) + u(p + ey) + u(p - ey) - 4.0 * u(p)) / (step * step);
}

/// Solves the steady discrete problem L u = -f on interior rows, u = g on
/// boundary rows, by sparse LU.
inline Eigen::VectorXd direct_steady_solve(const rbffd::NodeSet& nodes, const rbffd::ShapeStore& shapes) {
    const auto N = static_cast<Eigen::Index>(nodes.size());
    std::vector<Eigen::Triplet<double>> entries;
    Eigen::VectorXd rhs(N);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes.is_boundary(i)) {
            entries.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
            rhs[static_cast<Eigen::Index>(i)] = rbffd::closed_form_solution(nodes.positions[i]);
        }
    }
    for (std::size_t r = 0; r < shapes.rows(); ++r) {
        const Index node = shapes.interior_nodes()[r];
        const auto idx = shapes.neighbors(r);
        const auto w = shapes.weights(r);
        for (std::size_t j = 0; j < idx.size(); ++j) entries.emplace_back(node, idx[j], w[j]);
        rhs[node] = -rbffd::forcing(nodes.positions[static_cast<std::size_t>(node)]);
    }
    Eigen::SparseMatrix<double> A(N, N);
    A.setFromTriplets(entries.begin(), entries.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    return lu.solve(rhs);
}

/// `n` points scattered in the unit disk around the origin, pairwise at least
/// `min_gap` apart, with the origin first.
inline std::vector<Point2> random_stencil(std::mt19937_64& rng, int n, double min_gap = 0.08) {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<Point2> pts{Point2::Zero()};
    while (static_cast<int>(pts.size()) < n) {
        const Point2 c(coord(rng), coord(rng));
        if (c.norm() > 1.0) continue;
        bool ok = true;
        for (const auto& p : pts) ok = ok && (p - c).norm() >= min_gap;
        if (ok) pts.push_back(c);
    }
    return pts;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double k = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace oracle
