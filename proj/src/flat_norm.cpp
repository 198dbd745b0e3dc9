#include "currentlab/flat_norm.hpp"

#include "currentlab/meshes.hpp"
#include "currentlab/simplex_lp.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace currentlab {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Sorts a tuple in place and returns the parity of the sorting permutation.
int sort_with_sign(std::vector<int>& v)
{
    int sign = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
            std::swap(v[j - 1], v[j]);
            sign = -sign;
        }
    return sign;
}

std::string describe_cell(const Vertices& V, const std::vector<int>& cell)
{
    std::ostringstream os;
    os << "cell [";
    for (std::size_t i = 0; i < cell.size(); ++i) {
        os << (i ? " (" : "(");
        for (Eigen::Index d = 0; d < V.cols(); ++d)
            os << (d ? "," : "") << V(cell[i], d);
        os << ")";
    }
    os << "]";
    return os.str();
}

template <typename Scalar>
struct FlatSolve {
    std::vector<Scalar> x;
    long pivots = 0;
};

template <typename Scalar>
FlatSolve<Scalar> solve_flat_lp(const Eigen::VectorXi& t, const FlatComplex& C)
{
    const std::size_t m = static_cast<std::size_t>(C.k_cells.rows());
    const std::size_t p = static_cast<std::size_t>(C.k1_cells.rows());
    LPProblem<Scalar> P;
    P.rows = m;
    P.cols = 2 * m + 2 * p;
    P.A.assign(P.rows * P.cols, Scalar(0));
    P.b.resize(m);
    P.c.resize(P.cols);
    P.basis.resize(m);
    std::vector<int> s(m);
    for (std::size_t i = 0; i < m; ++i) {
        s[i] = t(i) < 0 ? -1 : 1;
        P.b[i] = Scalar(std::abs(t(i)));
        P.at(i, i) = Scalar(s[i]);
        P.at(i, m + i) = Scalar(-s[i]);
        P.basis[i] = s[i] > 0 ? i : m + i;
        P.c[i] = P.c[m + i] = Scalar(C.k_volumes(i));
    }
    for (std::size_t j = 0; j < p; ++j) {
        P.c[2 * m + j] = P.c[2 * m + p + j] = Scalar(C.k1_volumes(j));
        for (Eigen::SparseMatrix<int>::InnerIterator it(C.incidence, j); it; ++it) {
            const auto i = static_cast<std::size_t>(it.row());
            P.at(i, 2 * m + j) = Scalar(s[i] * it.value());
            P.at(i, 2 * m + p + j) = Scalar(-s[i] * it.value());
        }
    }
    auto sol = solve_lp(std::move(P));
    return {std::move(sol.x), sol.pivots};
}

double chain_mass(const Eigen::VectorXd& coeffs, const Eigen::VectorXd& volumes)
{
    return coeffs.cwiseAbs().dot(volumes);
}

}  // namespace

Eigen::Index FlatComplex::find_k_cell(const std::vector<int>& sorted) const
{
    const auto it = k_index.find(sorted);
    return it == k_index.end() ? -1 : it->second;
}

FlatComplex complex_from_cells(const Vertices& V, const Cells& k1_cells)
{
    if (k1_cells.cols() < 2)
        throw Error("complex cells must have dimension at least 1");
    if (!V.allFinite())
        throw Error("non-finite vertex coordinate");
    FlatComplex C;
    C.vertices = V;
    C.k = static_cast<int>(k1_cells.cols()) - 2;
    if (C.k + 1 > V.cols())
        throw Error("complex cell dimension exceeds ambient dimension");

    std::set<std::vector<int>> tops;
    for (Eigen::Index r = 0; r < k1_cells.rows(); ++r) {
        std::vector<int> cell;
        for (Eigen::Index j = 0; j < k1_cells.cols(); ++j) {
            const int v = k1_cells(r, j);
            if (v < 0 || v >= V.rows())
                throw Error("complex cell references a missing vertex");
            cell.push_back(v);
        }
        sort_with_sign(cell);
        if (std::adjacent_find(cell.begin(), cell.end()) != cell.end())
            throw Error("complex cell repeats a vertex");
        tops.insert(cell);
    }

    for (const auto& top : tops)
        for (std::size_t i = 0; i < top.size(); ++i) {
            std::vector<int> face = top;
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
            C.k_index.emplace(face, 0);
        }
    C.k_cells.resize(static_cast<Eigen::Index>(C.k_index.size()), C.k + 1);
    C.k_volumes.resize(C.k_cells.rows());
    Eigen::Index row = 0;
    for (auto& [face, idx] : C.k_index) {
        idx = row;
        Eigen::MatrixXd P(C.k + 1, V.cols());
        for (int j = 0; j <= C.k; ++j) {
            C.k_cells(row, j) = face[j];
            P.row(j) = V.row(face[j]);
        }
        C.k_volumes(row) = simplex_volume(P);
        ++row;
    }

    C.k1_cells.resize(static_cast<Eigen::Index>(tops.size()), C.k + 2);
    C.k1_volumes.resize(C.k1_cells.rows());
    std::vector<Eigen::Triplet<int>> triplets;
    row = 0;
    for (const auto& top : tops) {
        Eigen::MatrixXd P(C.k + 2, V.cols());
        for (int j = 0; j <= C.k + 1; ++j) {
            C.k1_cells(row, j) = top[j];
            P.row(j) = V.row(top[j]);
        }
        if (is_degenerate(P))
            throw Error("degenerate complex cell");
        C.k1_volumes(row) = simplex_volume(P);
        for (std::size_t i = 0; i < top.size(); ++i) {
            std::vector<int> face = top;
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
            triplets.emplace_back(static_cast<int>(C.k_index.at(face)), static_cast<int>(row),
                                  i % 2 == 0 ? 1 : -1);
        }
        ++row;
    }
    C.incidence.resize(C.k_cells.rows(), C.k1_cells.rows());
    C.incidence.setFromTriplets(triplets.begin(), triplets.end());
    return C;
}

FlatComplex grid_complex(const std::vector<std::pair<double, double>>& bounds,
                         const std::vector<int>& resolution, int k)
{
    const int N = static_cast<int>(bounds.size());
    if (N < 1)
        throw Error("grid complex needs at least one axis");
    if (k < 0 || k + 1 > N)
        throw Error("grid complex needs k + 1 <= ambient dimension");
    if (resolution.size() != 1 && static_cast<int>(resolution.size()) != N)
        throw Error("resolution must be one value or one per axis");
    GridAxes axes;
    for (int d = 0; d < N; ++d) {
        const int r = resolution.size() == 1 ? resolution[0] : resolution[d];
        if (r < 1)
            throw Error("grid resolution must be at least 1");
        axes.push_back(uniform_axis(bounds[d].first, bounds[d].second, r));
    }
    const auto solid = make_box_solid(axes, [](const std::vector<int>&) { return true; });

    std::set<std::vector<int>> faces;
    std::vector<int> pick(N + 1, 0);
    std::fill(pick.end() - (k + 2), pick.end(), 1);
    for (Eigen::Index c = 0; c < solid.num_cells(); ++c) {
        std::vector<int> sel = pick;
        do {
            std::vector<int> face;
            for (int j = 0; j <= N; ++j)
                if (sel[j])
                    face.push_back(solid.cells()(c, j));
            faces.insert(face);
        } while (std::next_permutation(sel.begin(), sel.end()));
    }
    Cells cells(static_cast<Eigen::Index>(faces.size()), k + 2);
    Eigen::Index r = 0;
    for (const auto& f : faces) {
        for (int j = 0; j < k + 2; ++j)
            cells(r, j) = f[j];
        ++r;
    }
    return complex_from_cells(solid.vertices(), cells);
}

Eigen::VectorXi embed_chain(const SimplicialCurrent& T, const FlatComplex& C)
{
    if (T.dim() != C.k)
        throw Error("current dimension does not match the complex");
    if (T.ambient_dim() != C.vertices.cols())
        throw Error("ambient dimension mismatch between current and complex");
    Eigen::VectorXi out = Eigen::VectorXi::Zero(C.k_cells.rows());
    if (T.is_zero())
        return out;
    const auto map = match_vertices(C.vertices, T.vertices());
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        std::vector<int> cell;
        std::vector<int> original;
        for (int j = 0; j <= T.dim(); ++j) {
            original.push_back(T.cells()(c, j));
            cell.push_back(map[T.cells()(c, j)]);
        }
        const bool missing_vertex = std::find(cell.begin(), cell.end(), -1) != cell.end();
        const int sign = missing_vertex ? 1 : sort_with_sign(cell);
        const Eigen::Index row = missing_vertex ? -1 : C.find_k_cell(cell);
        if (row < 0)
            throw Error(describe_cell(T.vertices(), original) + " is not in the complex");
        out(row) += sign * T.mults()(c);
    }
    return out;
}

SimplicialCurrent complex_chain(const FlatComplex& C, int dim, const Eigen::VectorXi& coeffs)
{
    const Cells& cells = dim == C.k ? C.k_cells : C.k1_cells;
    if ((dim != C.k && dim != C.k + 1) || coeffs.size() != cells.rows())
        throw Error("chain does not match the complex");
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        if (coeffs(i) != 0)
            rows.push_back(i);
    Cells sub(static_cast<Eigen::Index>(rows.size()), dim + 1);
    Multiplicities m(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        sub.row(r) = cells.row(rows[r]);
        m(r) = coeffs(rows[r]);
    }
    return SimplicialCurrent(C.vertices, dim, sub, m);
}

FlatNormCertificate flat_distance(const SimplicialCurrent& T1, const SimplicialCurrent& T2,
                                  const FlatComplex& C, bool exact)
{
    const Eigen::VectorXi t = embed_chain(T1, C) - embed_chain(T2, C);
    const Eigen::Index m = C.k_cells.rows(), p = C.k1_cells.rows();
    FlatNormCertificate cert;
    cert.exact = exact;
    cert.u = Eigen::VectorXd::Zero(m);
    cert.v = Eigen::VectorXd::Zero(p);
    cert.rounded_u = Eigen::VectorXi::Zero(m);
    cert.rounded_v = Eigen::VectorXi::Zero(p);
    if (t.isZero())
        return cert;

    auto unpack = [&](const auto& x) {
        using S = std::decay_t<decltype(x[0])>;
        for (Eigen::Index i = 0; i < m; ++i) {
            const S ui = x[i] - x[m + i];
            cert.u(i) = static_cast<double>(ui);
            if constexpr (std::is_floating_point_v<S>)
                cert.fractional |= std::abs(ui - std::round(ui)) > 1e-9;
            else
                cert.fractional |= denominator(ui) != 1;
        }
        for (Eigen::Index j = 0; j < p; ++j) {
            const S vj = x[2 * m + j] - x[2 * m + p + j];
            cert.v(j) = static_cast<double>(vj);
            if constexpr (std::is_floating_point_v<S>)
                cert.fractional |= std::abs(vj - std::round(vj)) > 1e-9;
            else
                cert.fractional |= denominator(vj) != 1;
        }
    };
    if (exact) {
        auto sol = solve_flat_lp<Rational>(t, C);
        unpack(sol.x);
        cert.pivots = sol.pivots;
    } else {
        auto sol = solve_flat_lp<double>(t, C);
        unpack(sol.x);
        cert.pivots = sol.pivots;
    }
    cert.value = chain_mass(cert.u, C.k_volumes) + chain_mass(cert.v, C.k1_volumes);

    for (Eigen::Index j = 0; j < p; ++j)
        cert.rounded_v(j) = static_cast<int>(std::lround(cert.v(j)));
    cert.rounded_u = t - C.incidence * cert.rounded_v;
    cert.rounded_value = chain_mass(cert.rounded_u.cast<double>(), C.k_volumes) +
                         chain_mass(cert.rounded_v.cast<double>(), C.k1_volumes);
    return cert;
}

bool verify_certificate(const FlatNormCertificate& cert, const SimplicialCurrent& T1,
                        const SimplicialCurrent& T2, const FlatComplex& C)
{
    if (cert.u.size() != C.k_cells.rows() || cert.v.size() != C.k1_cells.rows())
        return false;
    if (!(cert.value >= 0.0) || !cert.u.allFinite() || !cert.v.allFinite())
        return false;
    const Eigen::VectorXd t = (embed_chain(T1, C) - embed_chain(T2, C)).cast<double>();
    const Eigen::VectorXd residual = t - cert.u - C.incidence.cast<double>() * cert.v;
    if (residual.size() > 0 && residual.cwiseAbs().maxCoeff() > 1e-9)
        return false;
    const double m = chain_mass(cert.u, C.k_volumes) + chain_mass(cert.v, C.k1_volumes);
    return std::abs(m - cert.value) <= 1e-9 * std::max(1.0, cert.value);
}

}  // namespace currentlab
