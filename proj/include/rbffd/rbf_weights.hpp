#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "rbffd/errors.hpp"
#include "rbffd/geometry.hpp"
#include "rbffd/neighborhoods.hpp"

namespace rbffd {

/// Polyharmonic spline r^3.
template <typename Scalar>
Scalar phs3(Scalar r) {
    return r * r * r;
}

/// 2D Laplacian of r^3 as a function of r: k (k + d - 2) r^(k-2) = 9 r.
template <typename Scalar>
Scalar laplacian_phs3(Scalar r) {
    return Scalar(9) * r;
}

/// Local systems whose reciprocal condition estimate falls below this are
/// rejected as degenerate.
inline constexpr double kMaxConditionEstimate = 1e14;

/// Bivariate monomials x^a y^b with a + b <= m in graded lexicographic order:
/// by total degree, then by a descending.
class MonomialBasis {
public:
    explicit MonomialBasis(int m) : m_(m) {
        if (m < 0) throw ParameterError("monomial degree must be nonnegative");
        for (int degree = 0; degree <= m; ++degree) {
            for (int a = degree; a >= 0; --a) exponents_.emplace_back(a, degree - a);
        }
    }

    int degree() const { return m_; }
    int size() const { return static_cast<int>(exponents_.size()); }
    const std::vector<std::pair<int, int>>& exponents() const { return exponents_; }

    template <typename Scalar>
    Scalar evaluate(int alpha, const Eigen::Matrix<Scalar, 2, 1>& p) const {
        const auto [a, b] = exponents_[static_cast<std::size_t>(alpha)];
        return ipow(p.x(), a) * ipow(p.y(), b);
    }

    /// Laplacian of monomial `alpha` evaluated at `p`.
    template <typename Scalar>
    Scalar laplacian(int alpha, const Eigen::Matrix<Scalar, 2, 1>& p) const {
        const auto [a, b] = exponents_[static_cast<std::size_t>(alpha)];
        Scalar value(0);
        if (a >= 2) value += Scalar(a * (a - 1)) * ipow(p.x(), a - 2) * ipow(p.y(), b);
        if (b >= 2) value += Scalar(b * (b - 1)) * ipow(p.x(), a) * ipow(p.y(), b - 2);
        return value;
    }

private:
    template <typename Scalar>
    static Scalar ipow(Scalar base, int e) {
        Scalar r(1);
        for (int i = 0; i < e; ++i) r *= base;
        return r;
    }

    int m_;
    std::vector<std::pair<int, int>> exponents_;
};

/// RBF-FD Laplacian weights at `support[0]` from the PHS r^3 interpolant
/// augmented with monomials up to degree `m`.
///
/// The points are shifted so the center is the origin and scaled by the
/// largest center distance before the saddle system
///
///     [A  P] [w]   [L phi]
///     [P' 0] [l] = [L p  ]
///
/// is solved by LU with partial pivoting; the weights are then rescaled by
/// 1 / radius^2. Throws DegenerateStencilError when the system is singular
/// or its condition estimate exceeds kMaxConditionEstimate.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> compute_laplacian_weights(
    const Eigen::Matrix<Scalar, 2, 1>& center, std::span<const Eigen::Matrix<Scalar, 2, 1>> support,
    int m) {
    using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using std::abs;
    using std::isfinite;

    const MonomialBasis basis(m);
    const int n = static_cast<int>(support.size());
    const int count = basis.size();
    if (n < count) {
        throw ParameterError("support size " + std::to_string(n) + " is below the " +
                             std::to_string(count) + " monomials of degree " + std::to_string(m));
    }
    if (support[0] != center) throw ParameterError("support[0] must be the stencil center");

    std::vector<Vec2> local(static_cast<std::size_t>(n));
    Scalar radius(0);
    for (int j = 0; j < n; ++j) {
        local[j] = support[j] - center;
        radius = std::max<Scalar>(radius, local[j].norm());
    }
    if (!(radius > Scalar(0))) throw DegenerateStencilError("stencil has zero radius");
    for (auto& q : local) q /= radius;

    const int size = n + count;
    Mat system = Mat::Zero(size, size);
    Vec rhs = Vec::Zero(size);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < j; ++k) {
            const Scalar r = (local[j] - local[k]).norm();
            if (r == Scalar(0)) throw DegenerateStencilError("stencil contains coincident points");
            system(j, k) = system(k, j) = phs3(r);
        }
        for (int alpha = 0; alpha < count; ++alpha) {
            system(j, n + alpha) = system(n + alpha, j) = basis.evaluate(alpha, local[j]);
        }
        rhs[j] = laplacian_phs3(local[j].norm());
    }
    for (int alpha = 0; alpha < count; ++alpha) rhs[n + alpha] = basis.laplacian(alpha, Vec2::Zero().eval());

    const Eigen::PartialPivLU<Mat> lu(system);
    const Scalar rcond = lu.rcond();
    if (!(rcond > Scalar(1.0 / kMaxConditionEstimate))) {
        std::ostringstream msg;
        msg << "local RBF-FD system is singular or ill-conditioned (rcond estimate " << static_cast<double>(rcond)
            << ")";
        throw DegenerateStencilError(msg.str());
    }
    const Vec solution = lu.solve(rhs);
    Vec weights = solution.head(n) / (radius * radius);
    if (!weights.allFinite()) throw DegenerateStencilError("local RBF-FD solve produced non-finite weights");
    return weights;
}

/// Laplacian weight rows for every interior node.
///
/// Row r belongs to node `interior_nodes()[r]`; `neighbors(r)` holds the copy
/// of that node's support, in stencil order, that the weights refer to.
class ShapeStore {
public:
    using WeightMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    ShapeStore() = default;
    ShapeStore(int m, int n, std::vector<Index> interior, std::vector<Index> neighbors, WeightMatrix weights);

    int degree() const { return m_; }
    int support_size() const { return n_; }
    std::size_t rows() const { return interior_.size(); }

    const std::vector<Index>& interior_nodes() const { return interior_; }
    std::span<const Index> neighbors(std::size_t row) const {
        return {neighbors_.data() + row * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    std::span<const double> weights(std::size_t row) const {
        return {weights_.data() + row * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    const WeightMatrix& weight_matrix() const { return weights_; }

    /// Applies the stored Laplacian rows to a node field; entry r is row r.
    Eigen::VectorXd apply(const Eigen::VectorXd& field) const;

    bool operator==(const ShapeStore& other) const {
        return m_ == other.m_ && n_ == other.n_ && interior_ == other.interior_ &&
               neighbors_ == other.neighbors_ && weights_.rows() == other.weights_.rows() &&
               weights_ == other.weights_;
    }

private:
    int m_ = 0;
    int n_ = 0;
    std::vector<Index> interior_;
    std::vector<Index> neighbors_;
    WeightMatrix weights_;
};

/// Computes weights for every interior node, distributing the independent
/// local solves over `threads` workers.
ShapeStore assemble_shapes(const NodeSet& nodes, const StencilSet& stencils, int m, int threads = 1);

}  // namespace rbffd
