#pragma once

// Good cuts of a dense subset of a grid cube, and an empirical harness for the
// Poincare-type inequality on current patches.

#include "currentlab/current.hpp"
#include "currentlab/energy_spectrum.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace currentlab {

/// Subset of the grid {0..m-1}^n. Cells are stored with the first coordinate
/// most significant, so the fiber over a k-prefix is a contiguous block.
struct GridSet {
    int n = 0;
    int m = 0;
    std::vector<char> cells;

    GridSet() = default;
    GridSet(int n, int m, bool value = false);

    std::int64_t size() const { return static_cast<std::int64_t>(cells.size()); }
    std::int64_t count() const;
    double density() const;
    bool operator==(const GridSet&) const = default;
};

GridSet read_grid(std::istream& in);
GridSet read_grid(const std::string& path);
std::string grid_to_json(const GridSet& g);

struct GoodCuts {
    std::vector<GridSet> A;  ///< A[k-1] = A^k, k = 1..n
    double epsilon = 0.0;    ///< 1 - density(K)
    bool vacuous = false;    ///< epsilon >= delta^n, so the size bound says nothing
};

struct GoodCutsCheck {
    bool inside_K = true;   ///< A^n is a subset of K
    /// |A^k| / m^k >= 1 - epsilon / delta^n, so the strict bound holds for
    /// every epsilon' > epsilon. Only checked when not vacuous.
    bool size = true;
    bool nested = true;     ///< projections of A^n land in A^k
    bool fibers = true;     ///< fibers of A^n over A^k have density > 1 - delta
    bool all() const { return inside_K && size && nested && fibers; }
};

/// Compared in exact rational arithmetic.
GoodCutsCheck check_good_cuts(const GridSet& K, double delta, const GoodCuts& cuts);

/// Runs the fiber-pruning induction from the last coordinate down. Throws
/// only if the result fails its own check, which would be a bug.
GoodCuts good_cuts(const GridSet& K, double delta);

struct PoincareRatio {
    double lhs = 0.0;       ///< mean |f - mean_G f| over the good cells G
    double rhs_core = 0.0;  ///< r times the mean of |df| over the ball B_R(x)
    double ratio = 0.0;     ///< lhs / rhs_core, 0 when both vanish
    double R = 0.0;
    int good_cells = 0;
};

/// Charts T by its first k ambient coordinates. G is the set of cells whose
/// vertices all lie in the cube of half-edge r around x; the ball has radius
/// R = (3 + sqrt k) r. Throws "patch too small" when B_R reaches the boundary
/// of T.
PoincareRatio poincare_ratio(const SimplicialCurrent& T, const PLFunction& f, const Eigen::VectorXd& x, double r);

/// Distance from a point to a simplex (rows of P).
double point_simplex_distance(const Eigen::MatrixXd& P, const Eigen::VectorXd& x);

}  // namespace currentlab
