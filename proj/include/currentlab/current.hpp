#pragma once

// Integer-multiplicity oriented simplicial chains in R^N: the computational
// stand-in for integral currents. Values are immutable once constructed and
// always held in canonical form:
//   * each cell's vertex tuple is sorted ascending, the permutation parity
//     being folded into the sign of its multiplicity;
//   * no two cells share a vertex set, zero multiplicities are dropped;
//   * cells are ordered lexicographically.

#include "currentlab/errors.hpp"
#include "currentlab/simplex_geometry.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace currentlab {

using Vertices = Eigen::MatrixXd;        ///< one vertex per row
using Cells = Eigen::MatrixXi;           ///< one simplex per row, k+1 columns
using Multiplicities = Eigen::VectorXi;  ///< aligned with the rows of Cells

/// Coordinates closer than this (per component) identify the same vertex.
inline constexpr double kVertexTolerance = 1e-12;

class SimplicialCurrent {
public:
    SimplicialCurrent() = default;

    /// Builds and canonicalizes a k-current. `tags` is empty (all cells
    /// Euclidean) or holds one norm-ball id per cell, "" meaning Euclidean.
    /// Throws Error on non-finite coordinates, out-of-range indices or
    /// degenerate cells.
    SimplicialCurrent(Vertices vertices, int dim, const Cells& cells,
                      const Multiplicities& mults, const std::vector<std::string>& tags = {});

    static SimplicialCurrent zero(Vertices vertices, int dim);

    const Vertices& vertices() const { return vertices_; }
    int ambient_dim() const { return static_cast<int>(vertices_.cols()); }
    int dim() const { return dim_; }
    Eigen::Index num_vertices() const { return vertices_.rows(); }
    Eigen::Index num_cells() const { return cells_.rows(); }
    const Cells& cells() const { return cells_; }
    const Multiplicities& mults() const { return mults_; }
    bool is_zero() const { return cells_.rows() == 0; }

    bool has_tags() const { return !tags_.empty(); }
    /// Norm-ball id of cell c, or "" for Euclidean.
    const std::string& tag(Eigen::Index c) const;
    const std::vector<std::string>& tags() const { return tags_; }

    /// The (k+1) x N matrix of the vertices of cell c, in stored order.
    Eigen::MatrixXd cell_points(Eigen::Index c) const;
    double cell_volume(Eigen::Index c) const { return simplex_volume(cell_points(c)); }

    /// Mask of vertices referenced by at least one cell.
    std::vector<bool> active_vertices() const;

private:
    Vertices vertices_ = Vertices(0, 0);
    int dim_ = 0;
    Cells cells_ = Cells(0, 1);
    Multiplicities mults_ = Multiplicities(0);
    std::vector<std::string> tags_;
};

/// Boundary chain; the result shares the vertex set of T.
SimplicialCurrent boundary(const SimplicialCurrent& T);

/// Sum of |multiplicity| times Euclidean k-volume.
double mass(const SimplicialCurrent& T);

/// Chain sum. Vertex sets are merged by coordinate identity; the result keeps
/// T1's vertices first. Throws on dimension mismatch.
SimplicialCurrent add(const SimplicialCurrent& T1, const SimplicialCurrent& T2);
SimplicialCurrent scale(const SimplicialCurrent& T, int s);

inline SimplicialCurrent operator+(const SimplicialCurrent& a, const SimplicialCurrent& b) { return add(a, b); }
inline SimplicialCurrent operator-(const SimplicialCurrent& a) { return scale(a, -1); }
inline SimplicialCurrent operator-(const SimplicialCurrent& a, const SimplicialCurrent& b) { return add(a, scale(b, -1)); }
inline SimplicialCurrent operator*(int s, const SimplicialCurrent& a) { return scale(a, s); }

/// True when T1 - T2 is the zero chain.
bool same_chain(const SimplicialCurrent& T1, const SimplicialCurrent& T2);

struct PushForwardResult {
    SimplicialCurrent current;
    int dropped_cells = 0;  ///< cells mapped to degenerate simplices
};

/// Image of T under x -> A x + b. Degenerate image cells are dropped and
/// counted.
PushForwardResult push_forward_affine(const SimplicialCurrent& T, const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b);

/// Removes unreferenced vertices (renumbering the rest in order).
SimplicialCurrent compact_vertices(const SimplicialCurrent& T);

/// Replaces vertex coordinates that coincide (within kVertexTolerance) by a
/// single representative, merging cells accordingly.
SimplicialCurrent weld_vertices(const SimplicialCurrent& T);

/// Maps each row of `points` to the matching row of `reference` within
/// kVertexTolerance, or -1 when absent.
std::vector<int> match_vertices(const Vertices& reference, const Vertices& points);

}  // namespace currentlab
