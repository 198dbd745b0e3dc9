#pragma once

// Flat distance between two k-chains inside a fixed ambient complex:
//
//     d_F(T1, T2) = min { M(u) + M(v) : T1 - T2 = u + boundary(v) }
//
// with u a k-chain and v a (k+1)-chain of the complex, solved as a linear
// program over real coefficients.

#include "currentlab/current.hpp"

#include <Eigen/Sparse>

#include <map>
#include <utility>
#include <vector>

namespace currentlab {

/// A pure (k+1)-dimensional simplicial complex together with all its k-faces.
/// Cells are stored as sorted vertex tuples; the orientation of a stored cell
/// is that of its sorted tuple.
struct FlatComplex {
    Vertices vertices;
    int k = 0;
    Cells k_cells, k1_cells;
    Eigen::SparseMatrix<int> incidence;  ///< k_cells x k1_cells, entries in {-1, 0, 1}
    Eigen::VectorXd k_volumes, k1_volumes;

    /// Row of a sorted k-face in k_cells, or -1.
    Eigen::Index find_k_cell(const std::vector<int>& sorted) const;

    std::map<std::vector<int>, Eigen::Index> k_index;
};

/// Complex spanned by the given (k+1)-cells over the vertex set V.
FlatComplex complex_from_cells(const Vertices& V, const Cells& k1_cells);
inline FlatComplex complex_from_current(const SimplicialCurrent& T)
{
    return complex_from_cells(T.vertices(), T.cells());
}

/// Kuhn (Freudenthal) triangulation of a box, keeping its (k+1)- and k-faces.
FlatComplex grid_complex(const std::vector<std::pair<double, double>>& bounds,
                         const std::vector<int>& resolution, int k);

/// Coefficients of T on the k-cells of C. Throws when a cell of T is not a
/// face of the complex.
Eigen::VectorXi embed_chain(const SimplicialCurrent& T, const FlatComplex& C);

/// Integer chain on the k-cells (dim == k) or (k+1)-cells (dim == k+1) of C.
SimplicialCurrent complex_chain(const FlatComplex& C, int dim, const Eigen::VectorXi& coeffs);

struct FlatNormCertificate {
    double value = 0.0;
    Eigen::VectorXd u;  ///< on k_cells
    Eigen::VectorXd v;  ///< on k1_cells
    bool fractional = false;
    bool exact = false;  ///< solved in rational arithmetic
    long pivots = 0;

    // Integral witness obtained by rounding v; always feasible, its value is
    // an upper bound for the integral flat distance.
    double rounded_value = 0.0;
    Eigen::VectorXi rounded_u, rounded_v;
};

FlatNormCertificate flat_distance(const SimplicialCurrent& T1, const SimplicialCurrent& T2,
                                  const FlatComplex& C, bool exact = false);

/// Checks t1 - t2 = u + dv and value = M(u) + M(v), both within 1e-9.
bool verify_certificate(const FlatNormCertificate& cert, const SimplicialCurrent& T1,
                        const SimplicialCurrent& T2, const FlatComplex& C);

}  // namespace currentlab
