#pragma once

#include "currentlab/current.hpp"

#include <Eigen/Dense>

namespace currentlab {

/// w(x) = <gradient, x> + offset on R^N.
struct AffineFunctional {
    Eigen::VectorXd gradient;
    double offset = 0.0;

    double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const
    {
        return x.dot(gradient.transpose()) + offset;
    }
    /// Parses "a1,...,aN,c".
    static AffineFunctional parse(const std::string& text, int ambient_dim);
};

/// Vertex values within this distance of the level t make t non-generic.
inline constexpr double kSliceGenericity = 1e-12;

/// The restriction T⌞{w <= t}: every cell is clipped to the half-space and the
/// kept part triangulated, pieces inheriting the cell's multiplicity and
/// orientation. New vertices sit on the cut edges. Throws if t is not generic.
SimplicialCurrent restrict_below(const SimplicialCurrent& T, const AffineFunctional& w, double t);

/// The slice <T, w, t>, a (k-1)-current on {w = t}, oriented so that
///   boundary(T⌞{w <= t}) = slice + (boundary T)⌞{w <= t}
/// holds as chains. Its vertex set consists of the edge crossing points only.
SimplicialCurrent slice_by_affine(const SimplicialCurrent& T, const AffineFunctional& w, double t);

}  // namespace currentlab
