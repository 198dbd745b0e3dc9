#pragma once

// Generators for the test and experiment geometries.

#include "currentlab/current.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace currentlab {

/// Unit-multiplicity closed polygon with n vertices on the circle of the
/// given radius in R^2, counter-clockwise.
SimplicialCurrent make_polygon(int n, double radius = 1.0);

/// [0, length] in R^1 split into n equal segments, oriented left to right.
SimplicialCurrent make_segment(int n, double length = 1.0);

/// Closed square loop [0,side]^2 in R^2, counter-clockwise, with
/// `per_side` edges on each side.
SimplicialCurrent make_square_loop(double side, int per_side);

/// Positively oriented triangulation of [x0,x1] x [y0,y1] in R^2 with nx x ny
/// squares, each split along its main diagonal.
SimplicialCurrent make_grid_patch(double x0, double x1, double y0, double y1, int nx, int ny);

/// Triangulated disk in R^2: `rings` concentric polygons of `segments`
/// vertices joined to a centre vertex. Its boundary is the outer polygon.
SimplicialCurrent make_disk(int segments, int rings, double radius = 1.0);

/// Icosahedron refined `subdivisions` times and projected to the unit sphere,
/// outward oriented. 20 * 4^s triangles.
SimplicialCurrent make_icosphere(int subdivisions);

/// Surface swept by revolving the graph y = h(x), h >= 0, around the x-axis
/// with m angular samples. Points with h = 0 collapse to poles. Throws on
/// fewer than 2 samples, m < 3, non-increasing x or negative h.
SimplicialCurrent make_revolution_surface(const std::vector<std::pair<double, double>>& profile,
                                          int m);

/// Breakpoints of a rectilinear grid, one sorted list per axis.
using GridAxes = std::vector<std::vector<double>>;

/// Uniform breakpoints on [lo, hi] with n intervals.
std::vector<double> uniform_axis(double lo, double hi, int n);

/// Kuhn (Freudenthal) triangulation of the boxes of a rectilinear grid for
/// which `inside(box multi-index)` holds, as a positively oriented top-
/// dimensional current. Neighbouring boxes induce matching triangulations on
/// shared faces, so boundaries of unions of boxes are consistent.
SimplicialCurrent make_box_solid(const GridAxes& axes,
                                 const std::function<bool(const std::vector<int>&)>& inside);

}  // namespace currentlab
