#pragma once

// Geometry of individual simplices embedded in R^N. A simplex is passed as a
// (k+1) x N matrix whose rows are its vertices.

#include <Eigen/Dense>

#include <cmath>
#include <utility>
#include <vector>

namespace currentlab {

/// Edge matrix [p1 - p0, ..., pk - p0], one edge per column (N x k).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
edge_matrix(const Eigen::MatrixBase<Derived>& P)
{
    const Eigen::Index k = P.rows() - 1;
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> E(P.cols(), k);
    for (Eigen::Index j = 0; j < k; ++j)
        E.col(j) = (P.row(j + 1) - P.row(0)).transpose();
    return E;
}

inline double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

/// k-dimensional Euclidean volume sqrt(det(E^T E)) / k!. A point has volume 1.
template <typename Derived>
typename Derived::Scalar simplex_volume(const Eigen::MatrixBase<Derived>& P)
{
    using std::sqrt;
    const int k = static_cast<int>(P.rows()) - 1;
    if (k == 0)
        return typename Derived::Scalar(1);
    const auto E = edge_matrix(P);
    const auto G = (E.transpose() * E).eval();
    const typename Derived::Scalar det = G.determinant();
    return det > 0 ? sqrt(det) / factorial(k) : typename Derived::Scalar(0);
}

template <typename Derived>
double longest_edge(const Eigen::MatrixBase<Derived>& P)
{
    double m = 0.0;
    for (Eigen::Index i = 0; i < P.rows(); ++i)
        for (Eigen::Index j = i + 1; j < P.rows(); ++j)
            m = std::max(m, static_cast<double>((P.row(i) - P.row(j)).norm()));
    return m;
}

/// True when the simplex volume is negligible relative to its edge scale.
template <typename Derived>
bool is_degenerate(const Eigen::MatrixBase<Derived>& P, double rel_tol = 1e-12)
{
    const int k = static_cast<int>(P.rows()) - 1;
    if (k == 0)
        return false;
    const double h = longest_edge(P);
    if (h == 0.0)
        return true;
    return simplex_volume(P) <= rel_tol * std::pow(h, k);
}

/// Sign (+1/-1/0) of the orientation of `Q` relative to `P`, both k-simplices
/// spanning the same k-plane. Computed from the barycentric frame of `P`.
template <typename DA, typename DB>
int relative_orientation(const Eigen::MatrixBase<DA>& P, const Eigen::MatrixBase<DB>& Q)
{
    const Eigen::MatrixXd E = edge_matrix(P);
    const Eigen::MatrixXd F = edge_matrix(Q);
    if (E.cols() == 0)
        return 1;
    // Coordinates of Q's edges in P's edge frame (least squares is exact here).
    const Eigen::MatrixXd C = (E.transpose() * E).ldlt().solve(E.transpose() * F);
    const double d = C.determinant();
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

/// Barycentric coordinates of x with respect to the simplex P, computed in
/// the least-squares sense on P's affine hull. Also returns the distance from
/// x to that hull.
template <typename DP, typename DX>
std::pair<Eigen::VectorXd, double> barycentric(const Eigen::MatrixBase<DP>& P,
                                               const Eigen::MatrixBase<DX>& x)
{
    const Eigen::Index k = P.rows() - 1;
    Eigen::VectorXd lambda(k + 1);
    if (k == 0) {
        lambda(0) = 1.0;
        return {lambda, (x.transpose() - P.row(0)).norm()};
    }
    const Eigen::MatrixXd E = edge_matrix(P);
    const Eigen::VectorXd rhs = x - P.row(0).transpose();
    const Eigen::VectorXd mu = (E.transpose() * E).ldlt().solve(E.transpose() * rhs);
    lambda(0) = 1.0 - mu.sum();
    lambda.tail(k) = mu;
    const double dist = (E * mu - rhs).norm();
    return {lambda, dist};
}

/// A vertex of a clipped simplex: either an original vertex (a == b) or the
/// point on edge (a, b) where the clipping functional vanishes. Indices are
/// local (0..k).
struct ClipVertex {
    int a;
    int b;
    bool is_cut() const { return a != b; }
    bool operator==(const ClipVertex&) const = default;
};

/// Triangulates the part of a k-simplex where `values` < 0 (the "kept" side).
/// Vertices with values < 0 are kept, the others are dropped; each returned
/// simplex is a list of k+1 ClipVertex. Uses the staircase triangulation of
/// the region, which has the combinatorics of a product of two simplices.
/// Returns an empty list when no vertex is kept and a single simplex (the
/// original) when all are.
std::vector<std::vector<ClipVertex>> clip_below(const Eigen::VectorXd& values);

/// Exact integral of max(l, 0) over a simplex, for l affine with the given
/// vertex values.
double integral_positive_part(const Eigen::MatrixXd& P, const Eigen::VectorXd& values);

}  // namespace currentlab
