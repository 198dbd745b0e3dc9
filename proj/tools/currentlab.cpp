// currentlab command line: thin wrappers over the library plus the scripted
// experiments. Exit codes: 0 success, 1 usage error, 2 computation error.

#include "currentlab/curve_decomposition.hpp"
#include "currentlab/energy_spectrum.hpp"
#include "currentlab/errors.hpp"
#include "currentlab/experiments.hpp"
#include "currentlab/flat_norm.hpp"
#include "currentlab/good_cuts_poincare.hpp"
#include "currentlab/john_geometry.hpp"
#include "currentlab/scm_io.hpp"
#include "currentlab/slicing.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace currentlab;
using nlohmann::json;

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::map<std::string, std::string> read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        out[key] = value;
    }
    return out;
}

Eigen::VectorXd parse_point(const std::string& s)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error("cannot parse coordinate '" + item + "' in \"" + s + "\"");
        }
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

PLFunction read_function(const std::string& path, Eigen::Index n)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    PLFunction f = PLFunction::Constant(n, std::numeric_limits<double>::quiet_NaN());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line == "vertex,value")
            continue;
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos)
                throw std::invalid_argument("no comma");
            const long v = std::stol(line.substr(0, comma));
            if (v < 0 || v >= n)
                throw Error(path + ":" + std::to_string(lineno) + ": vertex " + std::to_string(v) + " out of range");
            f(v) = std::stod(line.substr(comma + 1));
        } catch (const std::invalid_argument&) {
            throw Error(path + ":" + std::to_string(lineno) + ": expected 'vertex,value'");
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::isnan(f(i)))
            throw Error(path + ": no value for vertex " + std::to_string(i));
    return f;
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << text;
}

json matrix_json(const Eigen::MatrixXd& A)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        std::vector<double> r(A.cols());
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            r[j] = A(i, j);
        rows.push_back(r);
    }
    return rows;
}

template <typename V>
std::vector<double> to_vector(const V& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

NormTable load_norms(const std::string& path)
{
    return path.empty() ? NormTable{} : read_norms(path);
}

// Appends `--key value` for every config key the chosen subcommand knows
// and the command line does not already set.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const CLI::App& app)
{
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config")
            config_path = args[i + 1];
    if (config_path.empty())
        return args;
    const auto config = read_config(config_path);

    std::vector<const CLI::App*> chain{&app};
    for (const auto& a : args) {
        if (const CLI::App* sub = chain.back()->get_subcommand_no_throw(a))
            chain.push_back(sub);
    }
    std::vector<std::string> out = args;
    for (const auto& [key, value] : config) {
        const std::string flag = (key.size() == 1 ? "-" : "--") + key;
        if (std::find(args.begin(), args.end(), flag) != args.end())
            continue;
        bool known = false;
        for (const auto* scope : chain)
            known = known || scope->get_option_no_throw(flag) != nullptr;
        if (!known)
            throw CLI::ExtrasError({key + " (from config)"});
        if (chain.back()->get_option_no_throw(flag)) {
            out.push_back(flag);
            out.push_back(value);
        } else {
            out.insert(out.begin(), value);
            out.insert(out.begin(), flag);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simplicial integral currents: mass, slicing, flat distance, spectra, experiments", "currentlab"};
    app.require_subcommand(1);
    std::string config_path;
    std::uint64_t seed = 1;
    app.add_option("--config", config_path, "key = value defaults file");
    app.add_option("--seed", seed, "seed for every randomized step");

    std::string in_path, out_path, fn_path, norms_path;

    auto* mass_cmd = app.add_subcommand("mass", "mass of a current");
    mass_cmd->add_option("--in", in_path, "current (.scm)")->required();

    auto* boundary_cmd = app.add_subcommand("boundary", "boundary of a current");
    boundary_cmd->add_option("--in", in_path, "current (.scm)")->required();
    boundary_cmd->add_option("--out", out_path, "output .scm (stdout when omitted)");

    std::string gradient;
    double offset = 0.0, level = 0.0;
    bool restrict_only = false;
    auto* slice_cmd = app.add_subcommand("slice", "slice by an affine functional w(x) = g.x + c at level t");
    slice_cmd->add_option("--in", in_path, "current (.scm)")->required();
    slice_cmd->add_option("--gradient", gradient, "g as comma list")->required();
    slice_cmd->add_option("--offset", offset, "c");
    slice_cmd->add_option("--t", level, "level")->required();
    slice_cmd->add_flag("--restrict", restrict_only, "output the part with w <= t instead of the slice");
    slice_cmd->add_option("--out", out_path, "output .scm");

    std::string a_path, b_path, complex_path;
    bool exact = false;
    auto* flat_cmd = app.add_subcommand("flatdist", "flat distance inside a shared complex");
    flat_cmd->add_option("--a", a_path, "first current")->required();
    flat_cmd->add_option("--b", b_path, "second current")->required();
    flat_cmd->add_option("--complex", complex_path, "current whose cells span the complex")->required();
    flat_cmd->add_flag("--exact", exact, "rational arithmetic");
    flat_cmd->add_option("--out", out_path, "certificate .json");

    bool simple = false;
    auto* decompose_cmd = app.add_subcommand("decompose", "decompose a 1-current into curves");
    decompose_cmd->add_option("--in", in_path, "1-current")->required();
    decompose_cmd->add_flag("--simple", simple, "split walks into simple cycles");
    decompose_cmd->add_option("--out", out_path, "curves .json");

    int k_count = 4;
    SpectrumOptions spec_opts;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "smallest min-max values");
    spectrum_cmd->add_option("--in", in_path, "current")->required();
    spectrum_cmd->add_option("-k", k_count, "number of values");
    spectrum_cmd->add_option("--norms", norms_path, "norms sidecar .json");
    spectrum_cmd->add_option("--dense-threshold", spec_opts.dense_threshold);
    spectrum_cmd->add_option("--tolerance", spec_opts.tolerance);
    spectrum_cmd->add_option("--max-iterations", spec_opts.max_iterations);
    spectrum_cmd->add_option("--out", out_path, "CSV k,lambda,residual");

    auto* energy_cmd = app.add_subcommand("energy", "Dirichlet energy and Rayleigh quotient");
    energy_cmd->add_option("--in", in_path, "current")->required();
    energy_cmd->add_option("--fn", fn_path, "CSV vertex,value")->required();
    energy_cmd->add_option("--norms", norms_path, "norms sidecar .json");

    std::string point;
    double r0 = 0.2, t_max = 10.0;
    int j_max = 8, t_steps = 1000;
    ApdilOptions apdil_opts;
    auto* apdil_cmd = app.add_subcommand("apdil", "approximate local dilatation at a point");
    apdil_cmd->add_option("--in", in_path, "current")->required();
    apdil_cmd->add_option("--fn", fn_path, "CSV vertex,value")->required();
    apdil_cmd->add_option("--x", point, "point as comma list")->required();
    apdil_cmd->add_option("--r0", r0, "largest radius");
    apdil_cmd->add_option("--jmax", j_max, "radii r0 2^-j for j <= jmax");
    apdil_cmd->add_option("--tmax", t_max, "largest slope tried");
    apdil_cmd->add_option("--tsteps", t_steps, "slope grid size");
    apdil_cmd->add_option("--density-tol", apdil_opts.density_tol);
    apdil_cmd->add_option("--samples", apdil_opts.samples_per_cell, "samples per cell and radius");

    std::string norm_id;
    auto* john_cmd = app.add_subcommand("john", "John ellipsoids of the norm balls of a sidecar");
    john_cmd->add_option("--norms", norms_path, "norms sidecar .json")->required();
    john_cmd->add_option("--id", norm_id, "only this norm");
    john_cmd->add_option("--out", out_path, "output .json");

    std::string grid_path;
    double delta = 0.4;
    auto* goodcuts_cmd = app.add_subcommand("goodcuts", "good cuts of a dense grid set");
    goodcuts_cmd->add_option("--grid", grid_path, "grid .json {n, m, cells}")->required();
    goodcuts_cmd->add_option("--delta", delta, "fiber threshold in (0, 1)");
    goodcuts_cmd->add_option("--out", out_path, "cuts .json");

    double radius = 0.1;
    auto* poincare_cmd = app.add_subcommand("poincare", "Poincare ratio on a patch");
    poincare_cmd->add_option("--in", in_path, "patch")->required();
    poincare_cmd->add_option("--fn", fn_path, "CSV vertex,value")->required();
    poincare_cmd->add_option("--x", point, "centre as comma list")->required();
    poincare_cmd->add_option("--r", radius, "cube half-edge");

    auto* experiment_cmd = app.add_subcommand("experiment", "scripted experiments");
    experiment_cmd->require_subcommand(1);
    SplineOptions spline_opts;
    auto* spline_cmd = experiment_cmd->add_subcommand("spline", "disappearing spline");
    spline_cmd->add_option("--eps", spline_opts.eps, "comma list")->delimiter(',');
    spline_cmd->add_option("--profile-resolution", spline_opts.profile_resolution);
    spline_cmd->add_option("--angular-resolution", spline_opts.angular_resolution);
    spline_cmd->add_option("--out", out_path, "report .json");

    CancellationOptions cancel_opts;
    auto* cancel_cmd = experiment_cmd->add_subcommand("cancellation", "perforated sheet between two cubes");
    cancel_cmd->add_option("--j", cancel_opts.j, "comma list")->delimiter(',');
    cancel_cmd->add_option("--tunnel-resolution", cancel_opts.tunnel_resolution);
    cancel_cmd->add_option("--cube-step", cancel_opts.cube_step);
    cancel_cmd->add_option("--lp-max-cells", cancel_opts.lp_max_cells);
    cancel_cmd->add_option("--out", out_path, "report .json");

    SweepOptions sweep_opts;
    auto* sweep_cmd = experiment_cmd->add_subcommand("sweep", "semicontinuity sweep over a family");
    sweep_cmd->add_option("--family", sweep_opts.family, "spline, refined-sphere, translated-chains-in-complex, cancellation")
        ->required();
    sweep_cmd->add_option("-k", sweep_opts.K, "number of values");
    sweep_cmd->add_option("--slack-rel", sweep_opts.slack_rel);
    sweep_cmd->add_option("--slack-abs", sweep_opts.slack_abs);
    sweep_cmd->add_option("--burn-in", sweep_opts.burn_in, "negative for the family default");
    sweep_cmd->add_option("--eps", sweep_opts.eps)->delimiter(',');
    sweep_cmd->add_option("--profile-resolution", sweep_opts.profile_resolution);
    sweep_cmd->add_option("--angular-resolution", sweep_opts.angular_resolution);
    sweep_cmd->add_option("--subdivisions", sweep_opts.subdivisions)->delimiter(',');
    sweep_cmd->add_option("--shifts", sweep_opts.shifts)->delimiter(',');
    sweep_cmd->add_option("--j", sweep_opts.j)->delimiter(',');
    sweep_cmd->add_option("--tunnel-resolution", sweep_opts.tunnel_resolution);
    sweep_cmd->add_option("--cube-step", sweep_opts.cube_step);
    sweep_cmd->add_option("--out", out_path, "report .json");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(args, app);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    spec_opts.seed = seed;
    apdil_opts.seed = seed;
    spline_opts.spectrum.seed = seed;
    cancel_opts.spectrum.seed = seed;
    sweep_opts.spectrum.seed = seed;

    try {
        std::ostringstream text;
        text << std::setprecision(17);
        if (*mass_cmd) {
            text << mass(read_scm(in_path)) << "\n";
            emit("", text.str());
        } else if (*boundary_cmd) {
            write_scm(boundary(read_scm(in_path)), text);
            emit(out_path, text.str());
        } else if (*slice_cmd) {
            const auto T = read_scm(in_path);
            const AffineFunctional w{parse_point(gradient), offset};
            write_scm(restrict_only ? restrict_below(T, w, level) : slice_by_affine(T, w, level), text);
            emit(out_path, text.str());
        } else if (*flat_cmd) {
            const auto C = complex_from_current(read_scm(complex_path));
            const auto A = read_scm(a_path), B = read_scm(b_path);
            const auto cert = flat_distance(A, B, C, exact);
            const json doc = {{"value", cert.value},
                              {"u", to_vector(cert.u)},
                              {"v", to_vector(cert.v)},
                              {"fractional", cert.fractional},
                              {"exact", cert.exact},
                              {"verified", verify_certificate(cert, A, B, C)},
                              {"rounded_value", cert.rounded_value},
                              {"pivots", cert.pivots}};
            emit(out_path, doc.dump(2) + "\n");
        } else if (*decompose_cmd) {
            const auto T = read_scm(in_path);
            json doc = json::array();
            for (const auto& c : decompose(T, simple).curves)
                doc.push_back({{"closed", c.closed}, {"vertices", c.vertices}, {"length", c.length}});
            emit(out_path, doc.dump(2) + "\n");
        } else if (*spectrum_cmd) {
            const auto spec = minmax_spectrum(read_scm(in_path), k_count, load_norms(norms_path), spec_opts);
            text << "k,lambda,residual\n";
            for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
                text << i + 1 << "," << spec.eigenvalues(i) << "," << spec.residuals(i) << "\n";
            emit(out_path, text.str());
        } else if (*energy_cmd) {
            const auto T = read_scm(in_path);
            const auto f = read_function(fn_path, T.num_vertices());
            const auto norms = load_norms(norms_path);
            text << "energy," << dirichlet_energy(T, f, norms) << "\n";
            try {
                text << "rayleigh," << rayleigh_quotient(T, f, norms) << "\n";
            } catch (const Error&) {
                text << "rayleigh,nan\n";
            }
            emit("", text.str());
        } else if (*apdil_cmd) {
            const auto T = read_scm(in_path);
            const auto f = read_function(fn_path, T.num_vertices());
            std::vector<double> grid;
            for (int i = 0; i <= t_steps; ++i)
                grid.push_back(t_max * i / t_steps);
            const auto est = estimate_apdil(T, f, parse_point(point), dyadic_radii(r0, j_max), grid, apdil_opts);
            const json doc = {{"apdil", est.value}, {"resolved", est.resolved}, {"radii", est.radii}};
            emit("", doc.dump(2) + "\n");
        } else if (*john_cmd) {
            json doc;
            for (const auto& [id, ball] : read_norms(norms_path)) {
                if (!norm_id.empty() && id != norm_id)
                    continue;
                doc[id] = {{"dim", ball.dim()},
                           {"john", matrix_json(ball.john_Q())},
                           {"dual_john", matrix_json(ball.dual_P())},
                           {"facets", ball.facet_normals().rows()}};
            }
            if (!norm_id.empty() && doc.is_null())
                throw Error("no norm '" + norm_id + "' in '" + norms_path + "'");
            emit(out_path, doc.dump(2) + "\n");
        } else if (*goodcuts_cmd) {
            const auto K = read_grid(grid_path);
            const auto cuts = good_cuts(K, delta);
            if (cuts.vacuous)
                std::cerr << "warning: epsilon = " << cuts.epsilon << " >= delta^n; the size bound is vacuous\n";
            json doc = {{"delta", delta}, {"epsilon", cuts.epsilon}, {"vacuous", cuts.vacuous}};
            json A = json::array();
            for (const auto& g : cuts.A)
                A.push_back(json::parse(grid_to_json(g)));
            doc["A"] = A;
            emit(out_path, doc.dump() + "\n");
        } else if (*poincare_cmd) {
            const auto T = read_scm(in_path);
            const auto f = read_function(fn_path, T.num_vertices());
            const auto pr = poincare_ratio(T, f, parse_point(point), radius);
            const json doc = {{"lhs", pr.lhs}, {"rhs_core", pr.rhs_core}, {"ratio", pr.ratio},
                              {"R", pr.R}, {"good_cells", pr.good_cells}};
            emit("", doc.dump(2) + "\n");
        } else if (*spline_cmd) {
            emit(out_path, run_spline_experiment(spline_opts).dump(2) + "\n");
        } else if (*cancel_cmd) {
            emit(out_path, run_cancellation_experiment(cancel_opts).dump(2) + "\n");
        } else if (*sweep_cmd) {
            auto report = run_semicontinuity_sweep(sweep_opts);
            report["parameters"]["seed"] = seed;
            emit(out_path, report.dump(2) + "\n");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
