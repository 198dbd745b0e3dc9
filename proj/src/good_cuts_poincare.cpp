#include "currentlab/good_cuts_poincare.hpp"

#include "currentlab/errors.hpp"
#include "currentlab/simplex_geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace currentlab {

using Rational = boost::multiprecision::cpp_rational;

namespace {

std::int64_t ipow(std::int64_t b, int e)
{
    std::int64_t r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

// Cells of g, projected to the first k coordinates, counted per prefix.
std::vector<std::int64_t> fiber_counts(const GridSet& g, int k)
{
    const std::int64_t block = ipow(g.m, g.n - k);
    std::vector<std::int64_t> out(static_cast<std::size_t>(ipow(g.m, k)), 0);
    for (std::int64_t i = 0; i < g.size(); ++i)
        if (g.cells[static_cast<std::size_t>(i)])
            ++out[static_cast<std::size_t>(i / block)];
    return out;
}

}  // namespace

GridSet::GridSet(int n_, int m_, bool value) : n(n_), m(m_)
{
    if (n < 1 || m < 1)
        throw Error("grid needs n >= 1 and m >= 1");
    cells.assign(static_cast<std::size_t>(ipow(m, n)), value ? 1 : 0);
}

std::int64_t GridSet::count() const
{
    std::int64_t c = 0;
    for (char v : cells)
        c += v ? 1 : 0;
    return c;
}

double GridSet::density() const
{
    return cells.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(size());
}

GridSet read_grid(std::istream& in)
{
    nlohmann::json doc;
    try {
        in >> doc;
        const int n = doc.at("n").get<int>();
        const int m = doc.at("m").get<int>();
        GridSet g(n, m);
        const auto& cells = doc.at("cells");
        if (!cells.is_array() || static_cast<std::int64_t>(cells.size()) != g.size())
            throw Error("grid 'cells' must list m^n = " + std::to_string(g.size()) + " entries");
        for (std::size_t i = 0; i < cells.size(); ++i)
            g.cells[i] = cells[i].is_boolean() ? cells[i].get<bool>() : cells[i].get<int>() != 0;
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid grid file: ") + e.what());
    }
}

GridSet read_grid(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return read_grid(in);
}

std::string grid_to_json(const GridSet& g)
{
    nlohmann::json doc;
    doc["n"] = g.n;
    doc["m"] = g.m;
    auto& cells = doc["cells"] = nlohmann::json::array();
    for (char v : g.cells)
        cells.push_back(v ? 1 : 0);
    return doc.dump();
}

GoodCutsCheck check_good_cuts(const GridSet& K, double delta, const GoodCuts& cuts)
{
    GoodCutsCheck out;
    const int n = K.n;
    const GridSet& An = cuts.A.back();
    for (std::int64_t i = 0; i < K.size(); ++i)
        out.inside_K = out.inside_K && (!An.cells[i] || K.cells[i]);

    const Rational d(delta);
    const Rational eps = 1 - Rational(K.count(), K.size());
    Rational dn = 1;
    for (int i = 0; i < n; ++i)
        dn *= d;
    const bool vacuous = eps >= dn;

    for (int k = 1; k <= n; ++k) {
        const GridSet& Ak = cuts.A[k - 1];
        if (!vacuous)
            out.size = out.size && Rational(Ak.count(), Ak.size()) >= 1 - eps / dn;
        const std::int64_t block = ipow(K.m, n - k);
        const auto counts = fiber_counts(An, k);
        for (std::int64_t i = 0; i < An.size(); ++i)
            if (An.cells[i] && !Ak.cells[i / block])
                out.nested = false;
        for (std::size_t x = 0; x < counts.size(); ++x)
            if (Ak.cells[x] && !(Rational(counts[x], block) > 1 - d))
                out.fibers = false;
    }
    return out;
}

GoodCuts good_cuts(const GridSet& K, double delta)
{
    if (!(delta > 0 && delta < 1))
        throw Error("delta must lie in (0, 1)");
    const int n = K.n;
    const int m = K.m;
    const Rational keep = 1 - Rational(delta);

    // A_k for k = n-1 .. 1 prune the prefixes whose fiber in the current K_k
    // is too thin; K_k shrinks accordingly.
    std::vector<GridSet> A_lower(static_cast<std::size_t>(n));
    GridSet Kk = K;
    for (int k = n - 1; k >= 1; --k) {
        const std::int64_t block = ipow(m, n - k);
        const auto counts = fiber_counts(Kk, k);
        GridSet Ak(k, m);
        for (std::size_t x = 0; x < counts.size(); ++x)
            Ak.cells[x] = Rational(counts[x], block) > keep;
        for (std::int64_t i = 0; i < Kk.size(); ++i)
            if (!Ak.cells[i / block])
                Kk.cells[i] = 0;
        A_lower[k - 1] = std::move(Ak);
    }

    GoodCuts out;
    out.A.resize(static_cast<std::size_t>(n));
    out.A[n - 1] = Kk;
    for (int k = 1; k < n; ++k) {
        GridSet Ak(k, m, true);
        for (int j = 1; j <= k; ++j) {
            const std::int64_t block = ipow(m, k - j);
            for (std::int64_t i = 0; i < Ak.size(); ++i)
                if (!A_lower[j - 1].cells[i / block])
                    Ak.cells[i] = 0;
        }
        out.A[k - 1] = std::move(Ak);
    }
    out.epsilon = 1.0 - K.density();
    out.vacuous = out.epsilon >= std::pow(delta, n);

    const auto check = check_good_cuts(K, delta, out);
    if (!check.all())
        throw Error("good cuts failed their own verification");
    return out;
}

double point_simplex_distance(const Eigen::MatrixXd& P, const Eigen::VectorXd& x)
{
    const auto [lambda, dist] = barycentric(P, x);
    if (P.rows() == 1 || lambda.minCoeff() >= 0)
        return dist;
    double best = INFINITY;
    for (Eigen::Index drop = 0; drop < P.rows(); ++drop) {
        Eigen::MatrixXd F(P.rows() - 1, P.cols());
        for (Eigen::Index i = 0, r = 0; i < P.rows(); ++i)
            if (i != drop)
                F.row(r++) = P.row(i);
        best = std::min(best, point_simplex_distance(F, x));
    }
    return best;
}

namespace {

// Volume of a simplex inside the ball B_R(x), by longest-edge bisection down
// to edges of length h_min and a centroid test at the leaves.
double volume_in_ball(const Eigen::MatrixXd& P, const Eigen::VectorXd& x, double R, double h_min)
{
    bool all_in = true;
    for (Eigen::Index i = 0; i < P.rows() && all_in; ++i)
        all_in = (P.row(i).transpose() - x).norm() <= R;
    if (all_in)
        return simplex_volume(P);
    const double near = (P.rowwise() - x.transpose()).rowwise().norm().minCoeff();
    if (near - longest_edge(P) >= R || point_simplex_distance(P, x) >= R)
        return 0.0;
    Eigen::Index a = 0, b = 1;
    double longest = -1;
    for (Eigen::Index i = 0; i < P.rows(); ++i)
        for (Eigen::Index j = i + 1; j < P.rows(); ++j) {
            const double l = (P.row(i) - P.row(j)).norm();
            if (l > longest) {
                longest = l;
                a = i;
                b = j;
            }
        }
    if (longest <= h_min) {
        const Eigen::VectorXd c = P.colwise().mean().transpose();
        return (c - x).norm() <= R ? simplex_volume(P) : 0.0;
    }
    const Eigen::RowVectorXd mid = 0.5 * (P.row(a) + P.row(b));
    Eigen::MatrixXd L = P, Rr = P;
    L.row(b) = mid;
    Rr.row(a) = mid;
    return volume_in_ball(L, x, R, h_min) + volume_in_ball(Rr, x, R, h_min);
}

}  // namespace

PoincareRatio poincare_ratio(const SimplicialCurrent& T, const PLFunction& f, const Eigen::VectorXd& x, double r)
{
    const int k = T.dim();
    if (k < 1)
        throw Error("poincare ratio needs a current of dimension >= 1");
    if (f.size() != T.num_vertices())
        throw Error("function has " + std::to_string(f.size()) + " values for " +
                    std::to_string(T.num_vertices()) + " vertices");
    if (x.size() != T.ambient_dim())
        throw Error("point has the wrong dimension");
    if (!(r > 0))
        throw Error("radius must be positive");

    PoincareRatio out;
    out.R = (3.0 + std::sqrt(static_cast<double>(k))) * r;

    const SimplicialCurrent dT = boundary(T);
    for (Eigen::Index c = 0; c < dT.num_cells(); ++c)
        if (point_simplex_distance(dT.cell_points(c), x) < out.R)
            throw Error("patch too small");

    // Good cells: all vertices inside the chart cube.
    std::vector<Eigen::Index> G;
    double wG = 0.0, fG = 0.0;
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        bool inside = true;
        for (int i = 0; i <= k && inside; ++i) {
            const auto v = T.vertices().row(T.cells()(c, i));
            for (int d = 0; d < k && inside; ++d)
                inside = std::abs(v(d) - x(d)) <= r * (1 + 1e-12);
        }
        if (!inside)
            continue;
        G.push_back(c);
        const double w = std::abs(T.mults()(c)) * T.cell_volume(c);
        double mean = 0.0;
        for (int i = 0; i <= k; ++i)
            mean += f(T.cells()(c, i));
        wG += w;
        fG += w * mean / (k + 1);
    }
    if (G.empty())
        throw Error("no whole cell inside the cube around x");
    fG /= wG;
    double dev = 0.0;
    for (Eigen::Index c : G) {
        const Eigen::MatrixXd P = T.cell_points(c);
        Eigen::VectorXd g(k + 1);
        for (int i = 0; i <= k; ++i)
            g(i) = f(T.cells()(c, i)) - fG;
        dev += std::abs(T.mults()(c)) * (integral_positive_part(P, g) + integral_positive_part(P, -g));
    }
    out.lhs = dev / wG;
    out.good_cells = static_cast<int>(G.size());

    double wB = 0.0, dB = 0.0;
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        const Eigen::MatrixXd P = T.cell_points(c);
        const double vol = volume_in_ball(P, x, out.R, out.R / 64);
        if (vol == 0.0)
            continue;
        const double w = std::abs(T.mults()(c)) * vol;
        wB += w;
        dB += w * cell_differential(T, c, f).norm();
    }
    out.rhs_core = wB > 0 ? r * dB / wB : 0.0;
    out.ratio = out.lhs == 0.0 ? 0.0 : out.lhs / out.rhs_core;
    return out;
}

}  // namespace currentlab
