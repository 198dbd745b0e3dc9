#pragma once

// Decomposition of an integral 1-chain into unit-multiplicity oriented paths
// and closed walks. Each edge of multiplicity theta becomes |theta| parallel
// unit edges directed by the sign of theta; walks never reuse a unit edge.

#include "currentlab/current.hpp"

#include <utility>
#include <vector>

namespace currentlab {

struct Curve {
    std::vector<int> vertices;  ///< walk; for closed curves the first vertex is repeated at the end
    bool closed = false;
    double length = 0.0;
};

struct CurveDecomposition {
    std::vector<Curve> curves;
    int open_count() const;
};

/// Paths start at vertices whose boundary coefficient is -1 (more outgoing
/// than incoming unit edges) and end where it is +1, so an open curve has
/// boundary end - start. With `simple`, every closed sub-walk met along a
/// walk is split off as its own cycle, so all curves visit each vertex once.
CurveDecomposition decompose(const SimplicialCurrent& T, bool simple = false);

/// The 1-chain of a curve over T's vertex set.
SimplicialCurrent curve_chain(const SimplicialCurrent& T, const Curve& curve);

/// Breakpoints (s, point) of the unit-speed parametrization of a curve.
std::vector<std::pair<double, Eigen::VectorXd>> arc_length_parametrize(const Curve& curve,
                                                                       const SimplicialCurrent& T);

/// Point at arclength s (clamped to [0, L]) on a parametrization.
Eigen::VectorXd evaluate_curve(const std::vector<std::pair<double, Eigen::VectorXd>>& samples,
                               double s);

}  // namespace currentlab
