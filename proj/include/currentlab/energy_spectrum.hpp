#pragma once

// Dirichlet energy, Rayleigh quotients and min-max values of piecewise-linear
// functions on simplicial currents.
//
// A PL function is a value per vertex of the current's vertex set. On each
// cell its differential is constant; the energy density is the squared dual
// norm of that differential: Euclidean for untagged cells, the tagged
// NormBall's dual norm otherwise. The quadratic (stiffness) form uses the
// John inner product of the dual ball on tagged cells instead.

#include "currentlab/current.hpp"
#include "currentlab/john_geometry.hpp"

#include <Eigen/Sparse>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace currentlab {

using PLFunction = Eigen::VectorXd;
using NormTable = std::map<std::string, NormBall>;

/// Orthonormal frame (N x k) of the tangent plane of a cell in which
/// NormBall coordinates are read: the ambient basis when k == N, otherwise
/// Gram-Schmidt on the cell's edges in order.
Eigen::MatrixXd cell_frame(const Eigen::MatrixXd& P);

/// Differential of f on cell c as a covector in the cell frame (k entries).
Eigen::VectorXd cell_differential(const SimplicialCurrent& T, Eigen::Index c, const PLFunction& f);

/// Interpolates f at a point of the support; throws when x is on no cell.
double evaluate_pl(const SimplicialCurrent& T, const PLFunction& f, const Eigen::VectorXd& x);

double dirichlet_energy(const SimplicialCurrent& T, const PLFunction& f, const NormTable& norms = {});

/// Integral of f with respect to the mass measure.
double integrate(const SimplicialCurrent& T, const PLFunction& f);

/// E(g) / int g^2 for g = f minus its mean. Throws "zero denominator" when g
/// vanishes.
double rayleigh_quotient(const SimplicialCurrent& T, const PLFunction& f, const NormTable& norms = {});

struct Pencil {
    Eigen::SparseMatrix<double> K;  ///< stiffness
    Eigen::SparseMatrix<double> M;  ///< consistent mass matrix
};

/// Matrices over all vertices of T (inactive vertices get empty rows).
Pencil assemble_pencil(const SimplicialCurrent& T, const NormTable& norms = {});

struct SpectrumOptions {
    int dense_threshold = 800;  ///< active vertices up to which the dense solver is used
    double tolerance = 1e-10;   ///< backward-error target of the iterative solver
    int max_iterations = 500;
    std::uint64_t seed = 1;
};

struct SpectrumResult {
    Eigen::VectorXd eigenvalues;   ///< ascending
    Eigen::MatrixXd eigenvectors;  ///< one PL function per column, over all vertices of T
    Eigen::VectorXd residuals;     ///< |K phi - lambda M phi| / |M phi|
    std::string method;            ///< "dense" or "shift-invert"
    int iterations = 0;
};

/// The K_count smallest min-max values on mean-zero functions.
SpectrumResult minmax_spectrum(const SimplicialCurrent& T, int K_count, const NormTable& norms = {},
                               const SpectrumOptions& opts = {});

// Approximate local dilatation.

struct ApdilOptions {
    double density_tol = 1e-3;
    int samples_per_cell = 2000;
    int tail = 3;  ///< densities are maximized over this many of the smallest radii
    std::uint64_t seed = 1;
};

struct ApdilEstimate {
    double value = 0.0;
    bool resolved = false;  ///< false when no t in the grid reached the tolerance
    std::vector<double> t_grid;
    std::vector<double> radii;
    std::vector<std::vector<double>> density;  ///< density[t][r]
};

/// Radii r0 * 2^-j for j = 0..j_max.
std::vector<double> dyadic_radii(double r0, int j_max = 8);

ApdilEstimate estimate_apdil(const SimplicialCurrent& T, const PLFunction& f, const Eigen::VectorXd& x,
                             const std::vector<double>& radii, const std::vector<double>& t_grid,
                             const ApdilOptions& opts = {});

/// sup |f(y) - f(x)| / |y - x| over vertices and random points of the support
/// in the closed ball B_r(x).
double sup_ratio_dilation(const SimplicialCurrent& T, const PLFunction& f, const Eigen::VectorXd& x,
                          double r, int samples_per_cell = 200, std::uint64_t seed = 1);

// Cheeger bound.

/// Side label per cell (true = first side).
using CellCut = std::vector<bool>;

/// Cells whose centroid satisfies w(centroid) < t.
CellCut cut_by_functional(const SimplicialCurrent& T, const std::function<double(const Eigen::VectorXd&)>& w,
                          double t);

/// Mass of the interface between the two sides of a cut: the part of the
/// boundary of the first side that lies on faces shared with the second.
double cut_interface_mass(const SimplicialCurrent& T, const CellCut& cut);

/// min over cuts of interface / min(side masses).
double cheeger_upper_bound(const SimplicialCurrent& T, const std::vector<CellCut>& cuts);

}  // namespace currentlab
