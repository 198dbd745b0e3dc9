#pragma once

// Centrally symmetric polytopal norms on R^n given by generator points, and
// their John ellipsoids.
//
// For a ball B = conv(generators):
//   * john_Q  : {v : v^T Q v <= 1} is the maximal-volume ellipsoid inside B,
//               so |v|_J = sqrt(v^T Q v) satisfies |v|_J/sqrt(n) <= |v| <= |v|_J;
//   * dual_P  : {xi : xi^T P xi <= 1} is the maximal-volume ellipsoid inside
//               the dual ball, giving the comparison norm for covectors with
//               |xi|_J/sqrt(n) <= |xi|_* <= |xi|_J.
// Both come from a minimal enclosing ellipsoid and polarity.

#include "currentlab/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace currentlab {

struct MveeOptions {
    double tolerance = 1e-10;
    long max_iterations = 100000;
    std::optional<std::uint64_t> random_start;  ///< random initial weights from this seed
};

/// Minimal-volume ellipsoid {x : x^T E x <= 1} centred at the origin that
/// encloses a centrally symmetric point set (rows of `points`). Khachiyan's
/// iteration with away steps; the result is scaled so that every point is
/// enclosed.
Eigen::MatrixXd centered_mvee(const Eigen::MatrixXd& points, const MveeOptions& opts = {});

class NormBall {
public:
    NormBall() = default;
    /// Throws when generators are not symmetric or do not span R^n.
    explicit NormBall(Eigen::MatrixXd generators);

    int dim() const { return static_cast<int>(generators_.cols()); }
    const Eigen::MatrixXd& generators() const { return generators_; }
    /// Normals a of the facets {a . x = 1}; the ball is {x : a . x <= 1 for all a}.
    const Eigen::MatrixXd& facet_normals() const { return facets_; }
    const Eigen::MatrixXd& john_Q() const { return john_Q_; }
    const Eigen::MatrixXd& dual_P() const { return dual_P_; }

private:
    Eigen::MatrixXd generators_, facets_, john_Q_, dual_P_;
};

/// Recomputes the inscribed John matrix (optionally from random weights).
Eigen::MatrixXd john_matrix(const NormBall& ball, const MveeOptions& opts = {});

double norm_eval(const NormBall& ball, const Eigen::VectorXd& v);
double dual_norm_eval(const NormBall& ball, const Eigen::VectorXd& xi);

/// Convenience constructors.
NormBall linf_ball(int n);
NormBall l1_ball(int n);

/// Sidecar format {id: {"dim": n, "generators": [[...], ...]}}.
std::map<std::string, NormBall> read_norms(std::istream& in);
std::map<std::string, NormBall> read_norms(const std::string& path);

}  // namespace currentlab
