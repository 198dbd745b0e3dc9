#pragma once

// Scripted experiments: the disappearing spline, the cancelling sheet with
// tunnels, and semicontinuity sweeps over sequences of currents. Reports are
// JSON documents that carry every parameter used to build them.

#include "currentlab/current.hpp"
#include "currentlab/energy_spectrum.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace currentlab {

// Spline.

/// Profile of the spline surface: a unit sphere cap down to x = -eps, a
/// straight drop to the tube of radius eps, the tube up to x = 2 - eps and a
/// small end cap. Uses exactly `resolution` points.
std::vector<std::pair<double, double>> spline_profile(double eps, int resolution);

/// Profile of the unit sphere, centred at x = -1, with `resolution` points.
std::vector<std::pair<double, double>> sphere_profile(int resolution);

struct SplineSurface {
    SimplicialCurrent surface;
    PLFunction f;  ///< test function, mean zero on the surface
    double c = 0.0;
};

/// Throws "degenerate profile" unless eps in (0, 0.5) and both resolutions >= 16.
SplineSurface build_spline(double eps, int profile_resolution, int angular_resolution);

struct SplineOptions {
    std::vector<double> eps{0.2, 0.1, 0.05};
    int profile_resolution = 128;
    int angular_resolution = 256;
    SpectrumOptions spectrum;
};

nlohmann::json run_spline_experiment(const SplineOptions& opts);

// Cancellation.

struct CancellationMeshes {
    SimplicialCurrent sheet_surface;  ///< boundary of two cubes joined by the perforated sheet
    SimplicialCurrent cubes_surface;  ///< boundary of the two cubes alone
    SimplicialCurrent filling;        ///< the perforated sheet as a solid; its boundary is the difference
    SimplicialCurrent slab;           ///< the unperforated sheet, used as the shared complex
    int hole_level = 0;               ///< lattice level of the realized holes
};

/// Holes are placed on the lattice of level min(j, tunnel_resolution);
/// cube faces are subdivided with step `cube_step`. Throws when
/// tunnel_resolution < 1 since no tunnel can be realized.
CancellationMeshes build_cancellation(int j, int tunnel_resolution, double cube_step = 0.25);

struct CancellationOptions {
    std::vector<int> j{1, 2};
    int tunnel_resolution = 2;
    double cube_step = 0.25;
    int lp_max_cells = 3000;  ///< flat-distance LP only when the complex has at most this many faces
    SpectrumOptions spectrum;
};

nlohmann::json run_cancellation_experiment(const CancellationOptions& opts);

// Semicontinuity sweeps.

struct SweepOptions {
    std::string family;  ///< spline, refined-sphere, translated-chains-in-complex, cancellation
    int K = 1;
    double slack_rel = 0.05;
    double slack_abs = 0.05;
    /// First index of the sequence the verdict looks at; negative picks the
    /// family default (the first icosphere with >= 4 subdivisions for
    /// refined-sphere, 0 otherwise).
    int burn_in = -1;
    // Family parameters.
    std::vector<double> eps{0.2, 0.1, 0.05};
    int profile_resolution = 128;
    int angular_resolution = 256;
    std::vector<int> subdivisions{2, 3, 4, 5};
    std::vector<int> shifts{1, 2, 3};  ///< translation 2^-i for i in shifts
    std::vector<int> j{1, 2};
    int tunnel_resolution = 2;
    double cube_step = 0.25;
    SpectrumOptions spectrum;
};

struct SweepVerdict {
    bool pass = true;
    double max_excess = 0.0;  ///< max over i >= burn_in of lambda_k(T_i) - lambda_k(T) - slack
};

/// sequence[i][k] against limit[k], for each k.
std::vector<SweepVerdict> sweep_verdicts(const std::vector<std::vector<double>>& sequence,
                                         const std::vector<double>& limit, double slack_rel,
                                         double slack_abs, int burn_in);

/// Throws "unknown family" for other names.
nlohmann::json run_semicontinuity_sweep(const SweepOptions& opts);

}  // namespace currentlab
